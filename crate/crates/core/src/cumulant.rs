//! Moment-to-cumulant inversion over the noncrossing lattice (free) and the
//! full partition lattice (classical).
//!
//! Both inversions peel off the block containing the first argument. For the
//! free case the remaining points split into the gaps of that block, each of
//! which contributes a plain moment; for the classical case the complement of
//! the block contributes one moment.

use std::collections::HashMap;

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::pairing::{collapse, for_each_noncrossing, Family, Pairings, SetPartition};
use crate::scalar::Scalar;

/// Mixed moments indexed by a tuple of generator labels.
pub trait MomentFunctional<S> {
    fn moment(&self, labels: &[usize]) -> Result<S>;
}

impl<S, F> MomentFunctional<S> for F
where
    F: Fn(&[usize]) -> Result<S>,
{
    fn moment(&self, labels: &[usize]) -> Result<S> {
        self(labels)
    }
}

/// A finite table of moments; the empty tuple always has moment 1.
#[derive(Debug, Clone, Default)]
pub struct MomentTable<S> {
    values: HashMap<Vec<usize>, S>,
}

impl<S: Scalar> MomentTable<S> {
    pub fn new() -> Self {
        MomentTable {
            values: HashMap::new(),
        }
    }

    pub fn insert(&mut self, labels: Vec<usize>, value: S) {
        self.values.insert(labels, value);
    }

    /// Moments `m_1, m_2, ..` of a single generator `label`.
    pub fn from_sequence(label: usize, seq: &[S]) -> Self {
        let mut t = Self::new();
        for (k, v) in seq.iter().enumerate() {
            t.insert(vec![label; k + 1], v.clone());
        }
        t
    }
}

impl<S: Scalar> MomentFunctional<S> for MomentTable<S> {
    fn moment(&self, labels: &[usize]) -> Result<S> {
        if labels.is_empty() {
            return Ok(S::one());
        }
        self.values
            .get(labels)
            .cloned()
            .ok_or_else(|| Error::MissingMoment(labels.to_vec()))
    }
}

/// The limit moments `r -> #family(r)` of the model elements.
#[derive(Debug, Clone, Copy)]
pub struct PairingMoments {
    pub family: Family,
    pub pairings: Pairings,
}

impl PairingMoments {
    /// `r -> #NC2(r)`, the free limit.
    pub fn free() -> Self {
        PairingMoments {
            family: Family::Nc2,
            pairings: Pairings::default(),
        }
    }

    /// `r -> #Pi2(r)`, the classical limit.
    pub fn classical() -> Self {
        PairingMoments {
            family: Family::Pi2,
            pairings: Pairings::default(),
        }
    }
}

impl<S: Scalar> MomentFunctional<S> for PairingMoments {
    fn moment(&self, labels: &[usize]) -> Result<S> {
        let r = Composition::dropping_zeros(labels);
        let c = self.pairings.count(&r, self.family)?;
        Ok(S::from_u64(c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Lattice {
    Noncrossing,
    All,
}

/// Memoised cumulant evaluator over one moment functional.
pub struct CumulantEngine<'a, S, M: ?Sized> {
    moments: &'a M,
    lattice: Lattice,
    memo: HashMap<Vec<usize>, S>,
}

impl<'a, S: Scalar, M: MomentFunctional<S> + ?Sized> CumulantEngine<'a, S, M> {
    pub fn free(moments: &'a M) -> Self {
        CumulantEngine {
            moments,
            lattice: Lattice::Noncrossing,
            memo: HashMap::new(),
        }
    }

    pub fn classical(moments: &'a M) -> Self {
        CumulantEngine {
            moments,
            lattice: Lattice::All,
            memo: HashMap::new(),
        }
    }

    fn moment_of(&self, labels: &[usize], idx: &[usize]) -> Result<S> {
        let sub: Vec<usize> = idx.iter().map(|&i| labels[i]).collect();
        self.moments.moment(&sub)
    }

    /// The cumulant of the tuple `labels`.
    pub fn cumulant(&mut self, labels: &[usize]) -> Result<S> {
        if let Some(v) = self.memo.get(labels) {
            return Ok(v.clone());
        }
        let p = labels.len();
        if p == 0 {
            return Err(Error::Usage("cumulant of an empty tuple".into()));
        }
        let mut value = self.moments.moment(labels)?;
        // subsets of 1..p joining point 0 in its block, excluding the full set
        let rest = p - 1;
        for mask in 0u64..(1u64 << rest) {
            if mask.count_ones() as usize == rest {
                continue;
            }
            let mut block = vec![0usize];
            block.extend((0..rest).filter(|&b| mask >> b & 1 == 1).map(|b| b + 1));
            let sub: Vec<usize> = block.iter().map(|&i| labels[i]).collect();
            let mut term = self.cumulant(&sub)?;
            match self.lattice {
                Lattice::Noncrossing => {
                    let mut ends = block.clone();
                    ends.push(p);
                    for w in ends.windows(2) {
                        if w[1] > w[0] + 1 {
                            let gap: Vec<usize> = (w[0] + 1..w[1]).collect();
                            term *= self.moment_of(labels, &gap)?;
                        }
                    }
                }
                Lattice::All => {
                    let comp: Vec<usize> = (1..p).filter(|i| !block.contains(i)).collect();
                    term *= self.moment_of(labels, &comp)?;
                }
            }
            value -= term;
        }
        self.memo.insert(labels.to_vec(), value.clone());
        Ok(value)
    }

    /// `kappa_pi`: the product over blocks of `pi` of the cumulant of the
    /// block's arguments, taken in increasing order.
    pub fn cumulant_partition(&mut self, labels: &[usize], pi: &SetPartition) -> Result<S> {
        if pi.ground() != labels.len() {
            return Err(Error::Partition(format!(
                "partition of {} points for {} arguments",
                pi.ground(),
                labels.len()
            )));
        }
        let mut acc = S::one();
        for b in pi.blocks() {
            let sub: Vec<usize> = b.iter().map(|&x| labels[x - 1]).collect();
            acc *= self.cumulant(&sub)?;
        }
        Ok(acc)
    }
}

/// Free cumulant `kappa_p(labels)` of a moment functional.
pub fn free_cumulant<S: Scalar, M: MomentFunctional<S> + ?Sized>(
    m: &M,
    labels: &[usize],
) -> Result<S> {
    CumulantEngine::free(m).cumulant(labels)
}

/// Classical cumulant `k_p(labels)` of a moment functional.
pub fn classical_cumulant<S: Scalar, M: MomentFunctional<S> + ?Sized>(
    m: &M,
    labels: &[usize],
) -> Result<S> {
    CumulantEngine::classical(m).cumulant(labels)
}

/// `sum over pi in NC(p) of prod over blocks of kappa(block)`, the forward
/// direction of the free moment-cumulant relation.
pub fn free_moment_from_cumulants<S: Scalar>(
    kappa: &dyn Fn(&[usize]) -> Result<S>,
    labels: &[usize],
) -> Result<S> {
    let mut acc = S::zero();
    let mut err = None;
    for_each_noncrossing(labels.len(), |lab| {
        if err.is_some() {
            return;
        }
        let pi = SetPartition::from_labels(lab);
        let mut term = S::one();
        for b in pi.blocks() {
            let sub: Vec<usize> = b.iter().map(|&x| labels[x - 1]).collect();
            match kappa(&sub) {
                Ok(v) => term *= v,
                Err(e) => {
                    err = Some(e);
                    return;
                }
            }
        }
        acc += term;
    });
    match err {
        Some(e) => Err(e),
        None => Ok(acc),
    }
}

/// `#{P in NC2(r) : collapse(P) = pi}`.
pub fn count_by_collapse(r: &Composition, pi: &SetPartition) -> Result<u64> {
    if pi.ground() != r.len() {
        return Err(Error::Partition(format!(
            "partition of {} points for {} blocks",
            pi.ground(),
            r.len()
        )));
    }
    if !pi.is_noncrossing() {
        return Err(Error::Partition(format!("{pi} is crossing")));
    }
    let mut n = 0;
    let mut err = None;
    Pairings::default().for_each(r, Family::Nc2, |partner| {
        let p = crate::pairing::Pairing::from_partners(partner.to_vec()).expect("valid pairing");
        match collapse(&p, r) {
            Ok(c) if &c == pi => n += 1,
            Ok(_) => {}
            Err(e) => err = Some(e),
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(n),
    }
}
