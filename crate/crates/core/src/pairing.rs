//! Set partitions of `{1, .., m}`, pairings, and the block-constrained pairing
//! families indexed by a composition `r`.
//!
//! For a composition `r` the partition `ker f_r` groups consecutive runs of
//! ground points. `Pi2(r)` holds the pairings that never pair two points of
//! the same run, `NC2(r)` the noncrossing ones among them, and the starred
//! families additionally require the pairs together with the runs to connect
//! the whole ground set.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::composition::Composition;
use crate::error::{Error, Result};

/// Default largest ground set the pairing enumerators accept.
pub const DEFAULT_PAIRING_GUARD: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    m: usize,
    // 1-based, each sorted, ordered by minimum
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(m: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; m + 1];
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::Partition("empty block".into()));
            }
            for &x in b {
                if x == 0 || x > m {
                    return Err(Error::Partition(format!("point {x} outside 1..={m}")));
                }
                if seen[x] {
                    return Err(Error::Partition(format!("point {x} in two blocks")));
                }
                seen[x] = true;
            }
        }
        if let Some(x) = (1..=m).find(|&x| !seen[x]) {
            return Err(Error::Partition(format!("point {x} not covered")));
        }
        blocks.sort_unstable();
        Ok(SetPartition { m, blocks })
    }

    /// From a block label per point, `labels[x - 1]` for point `x`.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut order: Vec<usize> = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            match order.iter().position(|&o| o == l) {
                Some(k) => blocks[k].push(i + 1),
                None => {
                    order.push(l);
                    blocks.push(vec![i + 1]);
                }
            }
        }
        SetPartition {
            m: labels.len(),
            blocks,
        }
    }

    /// The singleton partition, bottom of the lattice.
    pub fn singletons(m: usize) -> Self {
        SetPartition {
            m,
            blocks: (1..=m).map(|x| vec![x]).collect(),
        }
    }

    /// The one-block partition, top of the lattice.
    pub fn one_block(m: usize) -> Self {
        SetPartition {
            m,
            blocks: if m == 0 {
                vec![]
            } else {
                vec![(1..=m).collect()]
            },
        }
    }

    /// `ker f_r`: the runs of the composition.
    pub fn kernel(r: &Composition) -> Self {
        Self::from_labels(&r.projection())
    }

    pub fn ground(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block index per point, 0-based on both sides.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.m];
        for (k, b) in self.blocks.iter().enumerate() {
            for &x in b {
                out[x - 1] = k;
            }
        }
        out
    }

    pub fn is_pairing(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    /// No `a < b < c < d` with `a, c` in one block and `b, d` in another.
    pub fn is_noncrossing(&self) -> bool {
        let lab = self.labels();
        let m = self.m;
        for a in 0..m {
            for b in a + 1..m {
                if lab[b] == lab[a] {
                    continue;
                }
                for c in b + 1..m {
                    if lab[c] != lab[a] {
                        continue;
                    }
                    if (c + 1..m).any(|d| lab[d] == lab[b]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Common refinement.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.same_ground(other)?;
        let (a, b) = (self.labels(), other.labels());
        let pairs: Vec<(usize, usize)> = a.into_iter().zip(b).collect();
        let mut ids: Vec<(usize, usize)> = Vec::new();
        let labels: Vec<usize> = pairs
            .iter()
            .map(|p| match ids.iter().position(|q| q == p) {
                Some(i) => i,
                None => {
                    ids.push(*p);
                    ids.len() - 1
                }
            })
            .collect();
        Ok(Self::from_labels(&labels))
    }

    /// Finest partition coarser than both.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.same_ground(other)?;
        let mut uf = UnionFind::new(self.m);
        for b in self.blocks.iter().chain(&other.blocks) {
            for w in b.windows(2) {
                uf.union(w[0] - 1, w[1] - 1);
            }
        }
        Ok(uf.partition())
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Self) -> bool {
        if self.m != other.m {
            return false;
        }
        let lab = other.labels();
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&x| lab[x - 1] == lab[b[0] - 1]))
    }

    fn same_ground(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::Partition(format!(
                "ground sets differ: {} vs {}",
                self.m, other.m
            )));
        }
        Ok(())
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let inner: Vec<String> = b.iter().map(usize::to_string).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        write!(f, "{{{}}}", body.join(","))
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    /// Parses `{{1,4},{2,3}}`; the ground set is `1..=max point`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed partition `{s}`"));
        let body = s
            .trim()
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(bad)?;
        let mut blocks = Vec::new();
        for chunk in body.split('}') {
            let chunk = chunk.trim().trim_start_matches(',').trim();
            if chunk.is_empty() {
                continue;
            }
            let inner = chunk.strip_prefix('{').ok_or_else(bad)?;
            let block = inner
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        let m = blocks.iter().flatten().copied().max().unwrap_or(0);
        SetPartition::new(m, blocks)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut y = x;
        while self.parent[y] != root {
            let next = self.parent[y];
            self.parent[y] = root;
            y = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn partition(&mut self) -> SetPartition {
        let labels: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        SetPartition::from_labels(&labels)
    }

    fn single_class(&mut self) -> bool {
        let n = self.parent.len();
        (0..n).all(|x| self.find(x) == self.find(0))
    }
}

/// A perfect matching, stored as the 0-based partner of every point.
///
/// The derived order is lexicographic on the partner array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pairing {
    partner: Vec<usize>,
}

impl Pairing {
    pub fn from_partners(partner: Vec<usize>) -> Result<Self> {
        let m = partner.len();
        for (i, &j) in partner.iter().enumerate() {
            if j >= m || j == i || partner[j] != i {
                return Err(Error::Partition(
                    "partner array is not an involution without fixed points".into(),
                ));
            }
        }
        Ok(Pairing { partner })
    }

    pub fn from_partition(p: &SetPartition) -> Result<Self> {
        if !p.is_pairing() {
            return Err(Error::Partition(format!("{p} is not a pairing")));
        }
        let mut partner = vec![0; p.ground()];
        for b in p.blocks() {
            partner[b[0] - 1] = b[1] - 1;
            partner[b[1] - 1] = b[0] - 1;
        }
        Ok(Pairing { partner })
    }

    pub fn ground(&self) -> usize {
        self.partner.len()
    }

    /// 0-based partner array.
    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    /// Pairs `(i, j)` with `i < j`, 1-based.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.partner
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i < j)
            .map(|(i, &j)| (i + 1, j + 1))
            .collect()
    }

    pub fn to_partition(&self) -> SetPartition {
        SetPartition {
            m: self.ground(),
            blocks: self.pairs().into_iter().map(|(i, j)| vec![i, j]).collect(),
        }
    }

    pub fn is_noncrossing(&self) -> bool {
        noncrossing_partners(&self.partner)
    }

    /// No pair inside a run of `r`.
    pub fn avoids_blocks(&self, r: &Composition) -> bool {
        let f = r.projection();
        f.len() == self.ground() && self.pairs().iter().all(|&(i, j)| f[i - 1] != f[j - 1])
    }

    /// The pairs together with the runs of `r` connect every point.
    pub fn connects(&self, r: &Composition) -> bool {
        connected_with_runs(&self.partner, &r.projection(), r.len())
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_partition().fmt(f)
    }
}

fn noncrossing_partners(partner: &[usize]) -> bool {
    let mut stack = Vec::new();
    for (i, &j) in partner.iter().enumerate() {
        if j > i {
            stack.push(i);
        } else if stack.pop() != Some(j) {
            return false;
        }
    }
    true
}

fn connected_with_runs(partner: &[usize], f: &[usize], p: usize) -> bool {
    if p == 0 {
        return true;
    }
    let mut uf = UnionFind::new(p);
    for (i, &j) in partner.iter().enumerate() {
        uf.union(f[i], f[j]);
    }
    uf.single_class()
}

/// The pairing families indexed by a composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `Pi2(r)`: no pair inside a run.
    Pi2,
    /// `Pi2*(r)`: `Pi2(r)` connecting all runs.
    Pi2Star,
    /// `NC2(r)`: noncrossing members of `Pi2(r)`.
    Nc2,
    /// `NC2*(r)`: `NC2(r)` connecting all runs.
    Nc2Star,
}

impl Family {
    fn noncrossing(self) -> bool {
        matches!(self, Family::Nc2 | Family::Nc2Star)
    }

    fn connected(self) -> bool {
        matches!(self, Family::Pi2Star | Family::Nc2Star)
    }
}

/// Pairing enumerator with a ground-size guard.
#[derive(Debug, Clone, Copy)]
pub struct Pairings {
    pub guard: usize,
}

impl Default for Pairings {
    fn default() -> Self {
        Pairings {
            guard: DEFAULT_PAIRING_GUARD,
        }
    }
}

impl Pairings {
    pub fn with_guard(guard: usize) -> Self {
        Pairings { guard }
    }

    fn check(&self, m: usize) -> Result<()> {
        if m > self.guard {
            return Err(Error::InstanceTooLarge {
                estimate: m as u128,
                guard: self.guard as u128,
            });
        }
        Ok(())
    }

    /// Visits the partner array of every member of `family(r)` in
    /// lexicographic order.
    pub fn for_each(
        &self,
        r: &Composition,
        family: Family,
        mut visit: impl FnMut(&[usize]),
    ) -> Result<()> {
        let m = r.total();
        self.check(m)?;
        if m % 2 == 1 {
            return Ok(());
        }
        let f = r.projection();
        let mut partner = vec![usize::MAX; m];
        let nc = family.noncrossing();
        let conn = family.connected();
        let p = r.len();
        let mut emit = |partner: &[usize]| {
            if !conn || connected_with_runs(partner, &f, p) {
                visit(partner);
            }
        };
        match_smallest(&mut partner, Some(&f), nc, &mut emit);
        Ok(())
    }

    pub fn enumerate(&self, r: &Composition, family: Family) -> Result<Vec<Pairing>> {
        let mut out = Vec::new();
        self.for_each(r, family, |p| {
            out.push(Pairing {
                partner: p.to_vec(),
            })
        })?;
        Ok(out)
    }

    pub fn count(&self, r: &Composition, family: Family) -> Result<u64> {
        let mut n = 0u64;
        self.for_each(r, family, |_| n += 1)?;
        Ok(n)
    }

    /// Every pairing of `{1, .., m}`; empty for odd `m`.
    pub fn all(&self, m: usize) -> Result<Vec<Pairing>> {
        self.check(m)?;
        let mut out = Vec::new();
        if m.is_multiple_of(2) {
            let mut partner = vec![usize::MAX; m];
            match_smallest(&mut partner, None, false, &mut |p: &[usize]| {
                out.push(Pairing {
                    partner: p.to_vec(),
                })
            });
        }
        Ok(out)
    }
}

// Pairs the smallest unmatched point with each admissible later point.
fn match_smallest(
    partner: &mut [usize],
    runs: Option<&[usize]>,
    noncrossing: bool,
    emit: &mut dyn FnMut(&[usize]),
) {
    let Some(i) = partner.iter().position(|&q| q == usize::MAX) else {
        emit(partner);
        return;
    };
    for j in i + 1..partner.len() {
        if partner[j] != usize::MAX {
            // every point before the smallest unmatched one is matched to
            // something earlier, so a matched point inside (i, j) crosses
            if noncrossing {
                break;
            }
            continue;
        }
        if runs.is_some_and(|f| f[i] == f[j]) {
            continue;
        }
        if noncrossing && (j - i - 1) % 2 == 1 {
            continue;
        }
        partner[i] = j;
        partner[j] = i;
        match_smallest(partner, runs, noncrossing, emit);
        partner[i] = usize::MAX;
        partner[j] = usize::MAX;
    }
}

pub fn enumerate_pairings(m: usize) -> Result<Vec<Pairing>> {
    Pairings::default().all(m)
}

pub fn enumerate_nc2(r: &Composition) -> Result<Vec<Pairing>> {
    Pairings::default().enumerate(r, Family::Nc2)
}

pub fn enumerate_nc2_star(r: &Composition) -> Result<Vec<Pairing>> {
    Pairings::default().enumerate(r, Family::Nc2Star)
}

pub fn enumerate_pi2(r: &Composition) -> Result<Vec<Pairing>> {
    Pairings::default().enumerate(r, Family::Pi2)
}

pub fn enumerate_pi2_star(r: &Composition) -> Result<Vec<Pairing>> {
    Pairings::default().enumerate(r, Family::Pi2Star)
}

/// `#family(r)` with the default guard.
pub fn count(r: &Composition, family: Family) -> Result<u64> {
    Pairings::default().count(r, family)
}

pub fn is_noncrossing(p: &SetPartition) -> bool {
    p.is_noncrossing()
}

pub fn meet(p: &SetPartition, q: &SetPartition) -> Result<SetPartition> {
    p.meet(q)
}

pub fn join(p: &SetPartition, q: &SetPartition) -> Result<SetPartition> {
    p.join(q)
}

/// Sum over `Pi2(r)` (or `NC2(r)`) of the product over pairs `{i, j}` of
/// `min(t_{f(i)}, t_{f(j)})`.
pub fn weighted_pairing_sum(r: &Composition, noncrossing_only: bool) -> Result<BigRational> {
    let f = r.projection();
    let t = r.time_vec();
    let family = if noncrossing_only {
        Family::Nc2
    } else {
        Family::Pi2
    };
    let mut acc = BigRational::zero();
    Pairings::default().for_each(r, family, |partner| {
        let mut w = BigRational::one();
        for (i, &j) in partner.iter().enumerate() {
            if i < j {
                let (a, b) = (&t[f[i]], &t[f[j]]);
                w *= if a < b { a.clone() } else { b.clone() };
            }
        }
        acc += w;
    })?;
    Ok(acc)
}

/// The partition of the runs `{1, .., p}` induced by `join(P, ker f_r)`.
pub fn collapse(pairing: &Pairing, r: &Composition) -> Result<SetPartition> {
    if pairing.ground() != r.total() {
        return Err(Error::Partition(format!(
            "pairing on {} points used with |r| = {}",
            pairing.ground(),
            r.total()
        )));
    }
    let f = r.projection();
    let mut uf = UnionFind::new(r.len());
    for (i, &j) in pairing.partners().iter().enumerate() {
        uf.union(f[i], f[j]);
    }
    Ok(uf.partition())
}

/// Visits every noncrossing partition of `{1, .., p}` as a 0-based label vector.
pub fn for_each_noncrossing(p: usize, mut visit: impl FnMut(&[usize])) {
    // Open blocks form a stack; joining one closes everything above it.
    fn go(
        x: usize,
        p: usize,
        labels: &mut Vec<usize>,
        stack: &mut Vec<usize>,
        next: usize,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if x == p {
            visit(labels);
            return;
        }
        labels.push(next);
        stack.push(next);
        go(x + 1, p, labels, stack, next + 1, visit);
        stack.pop();
        labels.pop();
        for depth in (0..stack.len()).rev() {
            let b = stack[depth];
            let saved: Vec<usize> = stack.drain(depth + 1..).collect();
            labels.push(b);
            go(x + 1, p, labels, stack, next, visit);
            labels.pop();
            stack.extend(saved);
        }
    }
    go(
        0,
        p,
        &mut Vec::with_capacity(p),
        &mut Vec::new(),
        0,
        &mut visit,
    );
}

/// `NC(p)`, sorted.
pub fn enumerate_nc(p: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    for_each_noncrossing(p, |lab| out.push(SetPartition::from_labels(lab)));
    out.sort();
    out
}
