//! The model elements `M_r(n,t)` and `L_r(n,t)`, exact finite-n traces of
//! their products, and the three-term recurrence residuals.
//!
//! `M_r(n,t)` is `n^(-r/2)` times the sum of the cycles `(0 a1 .. ar)` over
//! all tuples of distinct integers in `[1, floor(nt)]`; `L_r(n,t)` is the same
//! sum with the sets `{a1, .., ar}` in place of cycles. The normalisation is
//! carried as an explicit half-power of `n` so that every coefficient stays
//! in the scalar field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{cycle, Element, GroupElement, Kind};
use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::scalar::{floor_scaled, pow, Scalar};

/// Default cap on the number of tuples a finite-trace search may visit.
pub const DEFAULT_TRACE_GUARD: u128 = 100_000_000;

/// `n^(-half_power/2) * base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledElement<S> {
    base: Element<S>,
    n: u64,
    half_power: u32,
}

impl<S: Scalar> ScaledElement<S> {
    pub fn new(base: Element<S>, n: u64, half_power: u32) -> Self {
        ScaledElement {
            base,
            n,
            half_power,
        }
    }

    pub fn unit(kind: Kind, n: u64) -> Self {
        Self::new(Element::unit(kind), n, 0)
    }

    pub fn base(&self) -> &Element<S> {
        &self.base
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn half_power(&self) -> u32 {
        self.half_power
    }

    pub fn kind(&self) -> Kind {
        self.base.kind()
    }

    fn same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ScaleMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// Rewrites the element with a larger half-power of the same parity.
    fn raised_to(&self, half_power: u32) -> Result<Element<S>> {
        if half_power < self.half_power || (half_power - self.half_power) % 2 == 1 {
            return Err(Error::ParityMismatch);
        }
        let factor = pow(&S::from_u64(self.n), (half_power - self.half_power) / 2);
        Ok(self.base.scale(&factor))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_n(other)?;
        let hp = self.half_power.max(other.half_power);
        let base = self.raised_to(hp)?.try_add(&other.raised_to(hp)?)?;
        Ok(Self::new(base, self.n, hp))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-S::one()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_n(other)?;
        Ok(Self::new(
            self.base.try_mul(&other.base)?,
            self.n,
            self.half_power + other.half_power,
        ))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.base.scale(c), self.n, self.half_power)
    }

    pub fn star(&self) -> Self {
        Self::new(self.base.star(), self.n, self.half_power)
    }

    fn normalise(&self, raw: S, half_power: u32) -> Result<S> {
        if raw.is_zero() {
            return Ok(raw);
        }
        if half_power % 2 == 1 {
            return Err(Error::OddHalfPower);
        }
        Ok(raw / pow(&S::from_u64(self.n), half_power / 2))
    }

    pub fn trace(&self) -> Result<S> {
        self.normalise(self.base.trace(), self.half_power)
    }

    /// `trace(self * other)` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> Result<S> {
        self.same_n(other)?;
        let raw = self.base.trace_of_product(&other.base)?;
        self.normalise(raw, self.half_power + other.half_power)
    }
}

// Visits every tuple of `len` pairwise distinct integers in `lo+1..=hi`.
fn for_each_distinct_tuple(lo: u32, hi: u32, len: usize, visit: &mut dyn FnMut(&[u32])) {
    fn go(lo: u32, hi: u32, len: usize, cur: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
        if cur.len() == len {
            visit(cur);
            return;
        }
        for a in lo + 1..=hi {
            if !cur.contains(&a) {
                cur.push(a);
                go(lo, hi, len, cur, visit);
                cur.pop();
            }
        }
    }
    go(lo, hi, len, &mut Vec::with_capacity(len), visit);
}

/// `n^(-r/2)` times the sum of `(0 a1 .. ar)` over distinct tuples from
/// the integer range `(lo, hi]`.
pub fn build_m_on<S: Scalar>(n: u64, lo: u32, hi: u32, r: usize) -> ScaledElement<S> {
    let mut base = Element::zero(Kind::Perm);
    if r == 0 {
        base = Element::unit(Kind::Perm);
    } else {
        let mut pts = vec![0u32; r + 1];
        for_each_distinct_tuple(lo, hi, r, &mut |a| {
            pts[1..].copy_from_slice(a);
            base.add_term(cycle(&pts).expect("distinct points"), S::one());
        });
    }
    ScaledElement::new(base, n, r as u32)
}

/// `n^(-r/2)` times the sum of `{a1, .., ar}` over distinct tuples from the
/// integer range `(lo, hi]`; each set is hit `r!` times.
pub fn build_l_on<S: Scalar>(n: u64, lo: u32, hi: u32, r: usize) -> ScaledElement<S> {
    let mut base = Element::zero(Kind::FinSet);
    if r == 0 {
        base = Element::unit(Kind::FinSet);
    } else {
        for_each_distinct_tuple(lo, hi, r, &mut |a| {
            base.add_term(
                GroupElement::set(a.iter().copied()).expect("distinct points"),
                S::one(),
            );
        });
    }
    ScaledElement::new(base, n, r as u32)
}

fn top(n: u64, t: &BigRational) -> u32 {
    u32::try_from(floor_scaled(n, t)).expect("floor(nt) exceeds u32")
}

/// `M_r(n, t)`.
pub fn build_m<S: Scalar>(n: u64, t: &BigRational, r: usize) -> ScaledElement<S> {
    build_m_on(n, 0, top(n, t), r)
}

/// `L_r(n, t)`.
pub fn build_l<S: Scalar>(n: u64, t: &BigRational, r: usize) -> ScaledElement<S> {
    build_l_on(n, 0, top(n, t), r)
}

/// Exact product of a chain of scaled elements.
pub fn product_chain<S: Scalar>(
    factors: &[ScaledElement<S>],
    kind: Kind,
    n: u64,
) -> Result<ScaledElement<S>> {
    factors
        .iter()
        .try_fold(ScaledElement::unit(kind, n), |acc, x| acc.try_mul(x))
}

/// `trace(x1 * .. * xk)` by multiplying out each half and pairing them.
pub fn trace_of_chain<S: Scalar>(factors: &[ScaledElement<S>], kind: Kind, n: u64) -> Result<S> {
    let mid = factors.len().div_ceil(2);
    let left = product_chain(&factors[..mid], kind, n)?;
    let right = product_chain(&factors[mid..], kind, n)?;
    left.trace_of_product(&right)
}

/// Tuple-counting evaluator for traces of products of model elements.
#[derive(Debug, Clone, Copy)]
pub struct TraceCounter {
    pub guard: u128,
}

impl Default for TraceCounter {
    fn default() -> Self {
        TraceCounter {
            guard: DEFAULT_TRACE_GUARD,
        }
    }
}

struct Layout {
    // per ground position: upper end of its range, and start of its run
    bound: Vec<u32>,
    run_start: Vec<usize>,
    max: u32,
}

impl TraceCounter {
    pub fn with_guard(guard: u128) -> Self {
        TraceCounter { guard }
    }

    fn layout(&self, rs: &Composition, n: u64) -> Result<Layout> {
        let f = rs.projection();
        let tops: Vec<u32> = rs.time_vec().iter().map(|t| top(n, t)).collect();
        let bound: Vec<u32> = f.iter().map(|&k| tops[k]).collect();
        let mut run_start = vec![0; f.len()];
        for x in 1..f.len() {
            run_start[x] = if f[x] == f[x - 1] {
                run_start[x - 1]
            } else {
                x
            };
        }
        let estimate = bound
            .iter()
            .fold(1u128, |acc, &b| acc.saturating_mul(b as u128));
        if estimate > self.guard {
            return Err(Error::InstanceTooLarge {
                estimate,
                guard: self.guard,
            });
        }
        let max = bound.iter().copied().max().unwrap_or(0);
        Ok(Layout {
            bound,
            run_start,
            max,
        })
    }

    fn normalise(count: u64, n: u64, total: usize) -> BigRational {
        if count == 0 {
            return BigRational::zero();
        }
        debug_assert!(total.is_multiple_of(2));
        let denom = num_traits::pow(BigInt::from(n), total / 2);
        BigRational::new(BigInt::from(count), denom)
    }

    /// `phi(M_{r1}(n,t1) .. M_{rp}(n,tp))` by counting tuples whose product
    /// of star transpositions `(0 a1)(0 a2) ..` is the identity.
    pub fn free(&self, rs: &Composition, n: u64) -> Result<BigRational> {
        let lay = self.layout(rs, n)?;
        let m = rs.total();
        if m % 2 == 1 {
            return Ok(BigRational::zero());
        }
        let mut perm: Vec<u32> = (0..=lay.max).collect();
        let mut tuple = vec![0u32; m];
        let mut count = 0u64;
        free_search(&lay, 0, 0, &mut perm, &mut tuple, &mut count);
        Ok(Self::normalise(count, n, m))
    }

    /// `psi(L_{r1}(n,t1) .. L_{rp}(n,tp))` by counting tuples in which every
    /// value occurs an even number of times.
    pub fn classical(&self, rs: &Composition, n: u64) -> Result<BigRational> {
        let lay = self.layout(rs, n)?;
        let m = rs.total();
        if m % 2 == 1 {
            return Ok(BigRational::zero());
        }
        let mut odd = vec![false; lay.max as usize + 1];
        let mut tuple = vec![0u32; m];
        let mut count = 0u64;
        classical_search(&lay, 0, 0, &mut odd, &mut tuple, &mut count);
        Ok(Self::normalise(count, n, m))
    }
}

// Whether 0 and a lie on the same cycle of perm.
fn same_cycle(perm: &[u32], a: u32) -> bool {
    let mut x = perm[0];
    while x != 0 {
        if x == a {
            return true;
        }
        x = perm[x as usize];
    }
    false
}

fn free_search(
    lay: &Layout,
    k: usize,
    length: usize,
    perm: &mut [u32],
    tuple: &mut [u32],
    count: &mut u64,
) {
    let m = tuple.len();
    if k == m {
        if length == 0 {
            *count += 1;
        }
        return;
    }
    let remaining = m - k - 1;
    for a in 1..=lay.bound[k] {
        if tuple[lay.run_start[k]..k].contains(&a) {
            continue;
        }
        // right multiplication by (0 a) splits or merges a cycle
        let new_len = if same_cycle(perm, a) {
            length - 1
        } else {
            length + 1
        };
        if new_len > remaining {
            continue;
        }
        perm.swap(0, a as usize);
        tuple[k] = a;
        free_search(lay, k + 1, new_len, perm, tuple, count);
        perm.swap(0, a as usize);
    }
    tuple[k] = 0;
}

fn classical_search(
    lay: &Layout,
    k: usize,
    odd_count: usize,
    odd: &mut [bool],
    tuple: &mut [u32],
    count: &mut u64,
) {
    let m = tuple.len();
    if k == m {
        if odd_count == 0 {
            *count += 1;
        }
        return;
    }
    let remaining = m - k - 1;
    for a in 1..=lay.bound[k] {
        if tuple[lay.run_start[k]..k].contains(&a) {
            continue;
        }
        let i = a as usize;
        let next = if odd[i] { odd_count - 1 } else { odd_count + 1 };
        if next > remaining {
            continue;
        }
        odd[i] = !odd[i];
        tuple[k] = a;
        classical_search(lay, k + 1, next, odd, tuple, count);
        odd[i] = !odd[i];
    }
    tuple[k] = 0;
}

pub fn finite_trace_free(rs: &Composition, n: u64) -> Result<BigRational> {
    TraceCounter::default().free(rs, n)
}

pub fn finite_trace_classical(rs: &Composition, n: u64) -> Result<BigRational> {
    TraceCounter::default().classical(rs, n)
}

fn residual_guard(n: u64, t: &BigRational, r: usize, guard: u128) -> Result<()> {
    let estimate = (top(n, t) as u128).saturating_pow(r as u32 + 1);
    if estimate > guard {
        return Err(Error::InstanceTooLarge { estimate, guard });
    }
    Ok(())
}

/// `phi[(M_1 M_r - t M_{r-1} - M_{r+1})^2]` at `(n, t)`.
pub fn residual_free_guarded(
    n: u64,
    t: &BigRational,
    r: usize,
    guard: u128,
) -> Result<BigRational> {
    if r == 0 {
        return Err(Error::Usage("residual needs r >= 1".into()));
    }
    residual_guard(n, t, r, guard)?;
    let m1 = build_m::<BigRational>(n, t, 1);
    let x = m1
        .try_mul(&build_m(n, t, r))?
        .try_sub(&build_m(n, t, r - 1).scale(t))?
        .try_sub(&build_m(n, t, r + 1))?;
    x.trace_of_product(&x)
}

pub fn residual_free(n: u64, t: &BigRational, r: usize) -> Result<BigRational> {
    residual_free_guarded(n, t, r, DEFAULT_TRACE_GUARD)
}

/// The classical residual together with its closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalResidual {
    /// `(floor(nt) - r + 1) r / n - r t`.
    pub epsilon: BigRational,
    /// `psi[(L_r L_1 - r t L_{r-1} - L_{r+1})^2]`, computed in the algebra.
    pub residual: BigRational,
    /// `epsilon^2 * psi(L_{r-1}^2)`.
    pub predicted: BigRational,
}

pub fn residual_classical_guarded(
    n: u64,
    t: &BigRational,
    r: usize,
    guard: u128,
) -> Result<ClassicalResidual> {
    if r == 0 {
        return Err(Error::Usage("residual needs r >= 1".into()));
    }
    residual_guard(n, t, r, guard)?;
    let rq = BigRational::from_integer(BigInt::from(r));
    let nt = BigRational::from_integer(BigInt::from(floor_scaled(n, t)));
    let epsilon = (nt - &rq + BigRational::one()) * &rq
        / BigRational::from_integer(BigInt::from(n))
        - &rq * t;

    let x = build_l::<BigRational>(n, t, r)
        .try_mul(&build_l(n, t, 1))?
        .try_sub(&build_l(n, t, r - 1).scale(&(&rq * t)))?
        .try_sub(&build_l(n, t, r + 1))?;
    let residual = x.trace_of_product(&x)?;

    let lower = if r == 1 {
        BigRational::one()
    } else {
        let rs = Composition::with_times(vec![r - 1, r - 1], vec![t.clone(), t.clone()])?;
        TraceCounter::with_guard(guard).classical(&rs, n)?
    };
    let predicted = &epsilon * &epsilon * lower;
    Ok(ClassicalResidual {
        epsilon,
        residual,
        predicted,
    })
}

pub fn residual_classical(n: u64, t: &BigRational, r: usize) -> Result<ClassicalResidual> {
    residual_classical_guarded(n, t, r, DEFAULT_TRACE_GUARD)
}
