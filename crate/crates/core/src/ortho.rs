//! Exact polynomial arithmetic for the Chebyshev (second kind), Hermite and
//! centred free Charlier families, with moment functionals of their weights
//! and linearisation coefficients checked against pairing counts.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::pairing::{count, Family};
use crate::scalar::Scalar;

/// Dense polynomial, coefficient `i` multiplying `x^i`; trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![S::zero(); k + 1];
        c[k] = S::one();
        Poly { coeffs: c }
    }

    pub fn x() -> Self {
        Self::monomial(1)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> S {
        self.coeffs.last().cloned().unwrap_or_else(S::zero)
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            &(&acc * inner) + &Self::constant(c.clone())
        })
    }
}

impl<S: Scalar> Add for &Poly<S> {
    type Output = Poly<S>;

    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<S: Scalar> Sub for &Poly<S> {
    type Output = Poly<S>;

    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<S: Scalar> Mul for &Poly<S> {
    type Output = Poly<S>;

    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;

    fn neg(self) -> Poly<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Product of a list of polynomials.
pub fn product<S: Scalar>(polys: &[Poly<S>]) -> Poly<S> {
    polys.iter().fold(Poly::one(), |acc, p| &acc * p)
}

/// `U_0 = 1`, `U_1 = x`, `x U_n = U_{n-1} + U_{n+1}`.
pub fn chebyshev_u<S: Scalar>(n: usize) -> Poly<S> {
    chebyshev_u_family(n).pop().expect("nonempty")
}

/// `U_0, .., U_n`.
pub fn chebyshev_u_family<S: Scalar>(n: usize) -> Vec<Poly<S>> {
    let mut out = vec![Poly::one(), Poly::x()];
    while out.len() <= n {
        let k = out.len();
        let next = &(&Poly::x() * &out[k - 1]) - &out[k - 2];
        out.push(next);
    }
    out.truncate(n + 1);
    out
}

/// `H_0 = 1`, `H_1 = x`, `x H_r = H_{r+1} + r H_{r-1}`.
pub fn hermite<S: Scalar>(n: usize) -> Poly<S> {
    hermite_family(n).pop().expect("nonempty")
}

/// `H_0, .., H_n`.
pub fn hermite_family<S: Scalar>(n: usize) -> Vec<Poly<S>> {
    let mut out = vec![Poly::one(), Poly::x()];
    while out.len() <= n {
        let k = out.len();
        let next = &(&Poly::x() * &out[k - 1]) - &out[k - 2].scale(&S::from_u64(k as u64 - 1));
        out.push(next);
    }
    out.truncate(n + 1);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weight {
    /// Semicircle on `[-2, 2]`.
    Semicircle,
    /// Standard Gaussian.
    Gaussian,
    /// Law of `s^2 - 1` for a standard semicircular `s`.
    MpCentered,
}

/// Moments `m_0, m_1, ..` of a weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSequence<S> {
    pub weight: Weight,
    values: Vec<S>,
}

impl<S: Scalar> MomentSequence<S> {
    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn get(&self, k: usize) -> Option<&S> {
        self.values.get(k)
    }
}

/// Moments `m_0 .. m_up_to` of `weight`.
pub fn moments<S: Scalar>(weight: Weight, up_to: usize) -> Result<MomentSequence<S>> {
    let mut values = Vec::with_capacity(up_to + 1);
    for k in 0..=up_to {
        let v = match weight {
            Weight::Semicircle => {
                if k % 2 == 1 {
                    0
                } else {
                    catalan(k as u64 / 2)
                }
            }
            Weight::Gaussian => {
                if k % 2 == 1 {
                    0
                } else {
                    (1..=k as u64 / 2).map(|j| 2 * j - 1).product()
                }
            }
            Weight::MpCentered => {
                if k == 0 {
                    1
                } else {
                    count(&Composition::constant(2, k)?, Family::Nc2)?
                }
            }
        };
        values.push(S::from_u64(v));
    }
    Ok(MomentSequence { weight, values })
}

fn catalan(m: u64) -> u64 {
    let mut c = 1u64;
    for k in 0..m {
        c = c * (2 * (2 * k + 1)) / (k + 2);
    }
    c
}

/// `sum_i coeff_i * m_i`.
pub fn integrate<S: Scalar>(p: &Poly<S>, w: &MomentSequence<S>) -> Result<S> {
    if p.coeffs.len() > w.values.len() {
        return Err(Error::NotEnoughMoments {
            needed: p.coeffs.len() - 1,
            available: w.values.len().saturating_sub(1),
        });
    }
    let mut acc = S::zero();
    for (c, m) in p.coeffs.iter().zip(&w.values) {
        acc += c.clone() * m.clone();
    }
    Ok(acc)
}

/// Coefficients of `p` in a basis `basis[k]` with `deg basis[k] = k`,
/// peeled from the top degree down.
pub fn expand_in_basis<S: Scalar>(p: &Poly<S>, basis: &[Poly<S>]) -> Result<Vec<S>> {
    let Some(deg) = p.degree() else {
        return Ok(Vec::new());
    };
    if basis.len() <= deg {
        return Err(Error::Usage(format!("basis stops below degree {deg}")));
    }
    let mut rest = p.clone();
    let mut out = vec![S::zero(); deg + 1];
    for k in (0..=deg).rev() {
        let c = rest.coeff(k) / basis[k].leading();
        if !c.is_zero() {
            rest = &rest - &basis[k].scale(&c);
        }
        out[k] = c;
    }
    debug_assert!(rest.is_zero());
    Ok(out)
}

fn coefficient_of(coeffs: &[BigRational], k: usize) -> BigRational {
    coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
}

fn as_count(q: &BigRational) -> Option<u64> {
    use num_traits::ToPrimitive;
    q.is_integer().then(|| q.numer().to_u64()).flatten()
}

/// Coefficient of `U_k` in `U_{r1} .. U_{rp}`, checked against `#NC2(r, k)`.
pub fn linearize_chebyshev(r: &[usize], k: usize) -> Result<u64> {
    let top = r.iter().sum::<usize>().max(k);
    let basis = chebyshev_u_family::<BigRational>(top);
    let prod = product(&r.iter().map(|&i| basis[i].clone()).collect::<Vec<_>>());
    let c = coefficient_of(&expand_in_basis(&prod, &basis)?, k);
    let mut v = r.to_vec();
    v.push(k);
    let n = count(&Composition::dropping_zeros(&v), Family::Nc2)?;
    if as_count(&c) != Some(n) {
        return Err(Error::LinearizationMismatch {
            family: "chebyshev",
            expansion: c.to_string(),
            count: n,
        });
    }
    Ok(n)
}

/// Coefficient of `H_k` in `H_{r1} .. H_{rp}`, and `#Pi2(r, k)`.
pub fn linearize_hermite(r: &[usize], k: usize) -> Result<(BigRational, u64)> {
    let top = r.iter().sum::<usize>().max(k);
    let basis = hermite_family::<BigRational>(top);
    let prod = product(&r.iter().map(|&i| basis[i].clone()).collect::<Vec<_>>());
    let c = coefficient_of(&expand_in_basis(&prod, &basis)?, k);
    let mut v = r.to_vec();
    v.push(k);
    let n = count(&Composition::dropping_zeros(&v), Family::Pi2)?;
    Ok((c, n))
}

/// Monic orthogonal polynomials `V_0 .. V_n` for the centred
/// Marchenko-Pastur moments, by Gram-Schmidt.
pub fn free_charlier_family<S: Scalar>(n: usize) -> Result<Vec<Poly<S>>> {
    let w = moments::<S>(Weight::MpCentered, 2 * n)?;
    let mut out: Vec<Poly<S>> = Vec::with_capacity(n + 1);
    let mut norms: Vec<S> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let xk = Poly::monomial(k);
        let mut v = xk.clone();
        for (q, norm) in out.iter().zip(&norms) {
            let proj = integrate(&(&xk * q), &w)? / norm.clone();
            v = &v - &q.scale(&proj);
        }
        norms.push(integrate(&(&v * &v), &w)?);
        out.push(v);
    }
    Ok(out)
}

pub fn free_charlier<S: Scalar>(n: usize) -> Result<Poly<S>> {
    Ok(free_charlier_family(n)?.pop().expect("nonempty"))
}

fn doubled(r: &[usize], k: usize) -> Composition {
    let mut v: Vec<usize> = r.iter().map(|&x| 2 * x).collect();
    v.push(2 * k);
    Composition::dropping_zeros(&v)
}

/// Coefficient of `V_k` in `V_{r1} .. V_{rp}`, checked against `#NC2(2r, 2k)`.
pub fn linearize_charlier(r: &[usize], k: usize) -> Result<u64> {
    let top = r.iter().sum::<usize>().max(k);
    let basis = free_charlier_family::<BigRational>(top)?;
    let prod = product(&r.iter().map(|&i| basis[i].clone()).collect::<Vec<_>>());
    let c = coefficient_of(&expand_in_basis(&prod, &basis)?, k);
    let n = count(&doubled(r, k), Family::Nc2)?;
    if as_count(&c) != Some(n) {
        return Err(Error::LinearizationMismatch {
            family: "free charlier",
            expansion: c.to_string(),
            count: n,
        });
    }
    Ok(n)
}

/// Noncrossing partitions of the ground set of `r` without singletons and
/// without two points of one run in a block.
pub fn count_singleton_free_nc(r: &Composition) -> u64 {
    let f = r.projection();
    let mut n = 0;
    crate::pairing::for_each_noncrossing(r.total(), |lab| {
        let mut sizes = vec![0usize; lab.len()];
        for &b in lab {
            sizes[b] += 1;
        }
        let no_singletons = lab.iter().all(|&b| sizes[b] >= 2);
        let avoids =
            (0..lab.len()).all(|i| (i + 1..lab.len()).all(|j| lab[i] != lab[j] || f[i] != f[j]));
        if no_singletons && avoids {
            n += 1;
        }
    });
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::compositions_up_to;
    use crate::scalar::ratio;

    type Q = BigRational;
    type P = Poly<Q>;

    fn poly(c: &[i64]) -> P {
        Poly::new(c.iter().map(|&v| ratio(v, 1)).collect())
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(chebyshev_u::<Q>(0), poly(&[1]));
        assert_eq!(chebyshev_u::<Q>(1), poly(&[0, 1]));
        assert_eq!(chebyshev_u::<Q>(2), poly(&[-1, 0, 1]));
        assert_eq!(chebyshev_u::<Q>(4), poly(&[1, 0, -3, 0, 1]));
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite::<Q>(0), poly(&[1]));
        assert_eq!(hermite::<Q>(2), poly(&[-1, 0, 1]));
        assert_eq!(hermite::<Q>(3), poly(&[0, -3, 0, 1]));
    }

    #[test]
    fn chebyshev_trigonometric_values() {
        // U_n(2 cos t) sin t = sin((n+1) t) at t = pi/2, pi/3, 2pi/3, plus the
        // endpoint limits U_n(2) = n + 1 and U_n(-2) = (-1)^n (n + 1)
        let at_zero = [1, 0, -1, 0];
        let at_one = [1, 1, 0, -1, -1, 0];
        let at_minus_one = [1, -1, 0, 1, -1, 0];
        for n in 0..=12usize {
            let u = chebyshev_u::<Q>(n);
            assert_eq!(u.eval(&ratio(0, 1)), ratio(at_zero[n % 4], 1));
            assert_eq!(u.eval(&ratio(1, 1)), ratio(at_one[n % 6], 1));
            assert_eq!(u.eval(&ratio(-1, 1)), ratio(at_minus_one[n % 6], 1));
            assert_eq!(u.eval(&ratio(2, 1)), ratio(n as i64 + 1, 1));
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(u.eval(&ratio(-2, 1)), ratio(sign * (n as i64 + 1), 1));
        }
    }

    #[test]
    fn moment_examples() {
        assert_eq!(
            moments::<Q>(Weight::Semicircle, 6).unwrap().values()[6],
            ratio(5, 1)
        );
        assert_eq!(
            moments::<Q>(Weight::Gaussian, 6).unwrap().values()[6],
            ratio(15, 1)
        );
        let mp = moments::<Q>(Weight::MpCentered, 4).unwrap();
        assert_eq!(
            mp.values(),
            &[
                ratio(1, 1),
                ratio(0, 1),
                ratio(1, 1),
                ratio(1, 1),
                ratio(3, 1)
            ]
        );
    }

    #[test]
    fn integration_examples() {
        let sc = moments::<Q>(Weight::Semicircle, 8).unwrap();
        let u1 = chebyshev_u::<Q>(1);
        let u2 = chebyshev_u::<Q>(2);
        assert_eq!(integrate(&(&u2 * &u2), &sc).unwrap(), ratio(1, 1));
        assert_eq!(integrate(&(&u1 * &u2), &sc).unwrap(), ratio(0, 1));
        for w in [Weight::Semicircle, Weight::Gaussian, Weight::MpCentered] {
            assert_eq!(
                integrate(&P::one(), &moments(w, 0).unwrap()).unwrap(),
                ratio(1, 1)
            );
        }
        assert!(integrate(&P::monomial(9), &sc).is_err());
    }

    #[test]
    fn orthogonality() {
        let sc = moments::<Q>(Weight::Semicircle, 16).unwrap();
        let g = moments::<Q>(Weight::Gaussian, 16).unwrap();
        let u = chebyshev_u_family::<Q>(8);
        let h = hermite_family::<Q>(8);
        let mut fact = ratio(1, 1);
        for m in 0..=8 {
            if m > 0 {
                fact *= ratio(m as i64, 1);
            }
            for n in 0..=8 {
                let du = if m == n { ratio(1, 1) } else { ratio(0, 1) };
                assert_eq!(integrate(&(&u[m] * &u[n]), &sc).unwrap(), du);
                let dh = if m == n { fact.clone() } else { ratio(0, 1) };
                assert_eq!(integrate(&(&h[m] * &h[n]), &g).unwrap(), dh);
            }
        }
    }

    #[test]
    fn moments_count_pairings() {
        let sc = moments::<Q>(Weight::Semicircle, 12).unwrap();
        let g = moments::<Q>(Weight::Gaussian, 12).unwrap();
        for n in 1..=12 {
            let r = Composition::constant(1, n).unwrap();
            let x = P::monomial(n);
            assert_eq!(
                integrate(&x, &sc).unwrap(),
                ratio(count(&r, Family::Nc2).unwrap() as i64, 1)
            );
            assert_eq!(
                integrate(&x, &g).unwrap(),
                ratio(count(&r, Family::Pi2).unwrap() as i64, 1)
            );
        }
    }

    #[test]
    fn limit_moments_are_chebyshev_integrals() {
        let sc = moments::<Q>(Weight::Semicircle, 12).unwrap();
        let u = chebyshev_u_family::<Q>(12);
        for r in compositions_up_to(10) {
            let prod = product(&r.parts().iter().map(|&i| u[i].clone()).collect::<Vec<_>>());
            let want = count(&r, Family::Nc2).unwrap() as i64;
            assert_eq!(integrate(&prod, &sc).unwrap(), ratio(want, 1), "{r}");
        }
    }

    #[test]
    fn linearization_examples() {
        assert_eq!(linearize_chebyshev(&[1, 1], 2).unwrap(), 1);
        assert_eq!(linearize_chebyshev(&[2, 2], 0).unwrap(), 1);
        assert_eq!(linearize_chebyshev(&[1], 2).unwrap(), 0);

        assert_eq!(linearize_hermite(&[1, 1], 2).unwrap(), (ratio(1, 1), 2));
        assert_eq!(linearize_hermite(&[1, 1], 0).unwrap(), (ratio(1, 1), 1));
        assert_eq!(linearize_hermite(&[2, 2], 0).unwrap(), (ratio(2, 1), 2));

        assert_eq!(linearize_charlier(&[1, 1], 0).unwrap(), 1);
        assert_eq!(linearize_charlier(&[1], 1).unwrap(), 1);
        assert_eq!(linearize_charlier(&[1], 0).unwrap(), 0);
    }

    #[test]
    fn free_charlier_examples() {
        assert_eq!(free_charlier::<Q>(0).unwrap(), poly(&[1]));
        assert_eq!(free_charlier::<Q>(1).unwrap(), poly(&[0, 1]));
        assert_eq!(free_charlier::<Q>(2).unwrap(), poly(&[-1, -1, 1]));
        let v = free_charlier_family::<Q>(5).unwrap();
        let u = chebyshev_u_family::<Q>(10);
        for n in 0..=5 {
            assert_eq!(v[n].compose(&u[2]), u[2 * n], "n={n}");
        }
    }

    #[test]
    fn charlier_counts_match_singleton_free_partitions() {
        for r in compositions_up_to(6) {
            for k in 0..=3 {
                let rk = r.appended(k);
                assert_eq!(
                    count(&doubled(r.parts(), k), Family::Nc2).unwrap(),
                    count_singleton_free_nc(&rk),
                    "{r} k={k}"
                );
            }
        }
    }

    #[test]
    fn hermite_contract_small() {
        for r in compositions_up_to(6) {
            for k in 0..=4 {
                let (c, n) = linearize_hermite(r.parts(), k).unwrap();
                let fact: u64 = (1..=k as u64).product();
                assert_eq!(c * ratio(fact as i64, 1), ratio(n as i64, 1), "{r} k={k}");
            }
        }
    }

    #[test]
    fn compose_and_eval_agree() {
        let p = poly(&[3, -1, 2]);
        let q = poly(&[1, 1]);
        let pq = p.compose(&q);
        for x in -3..=3 {
            let x = ratio(x, 1);
            assert_eq!(pq.eval(&x), p.eval(&q.eval(&x)));
        }
        assert_eq!(poly(&[1, 0, -3]).to_string(), "-3*x^2 + 1");
    }
}
