//! The group algebras of finitely supported permutations and of finite sets
//! under symmetric difference, with their canonical traces and adjoint.
//!
//! Permutations compose right to left: `(a * b)(x) = a(b(x))`. With this
//! convention `(0 c) * (0 a1 .. ar) = (0 a1 .. ar c)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// Finitely supported permutations of the nonnegative integers.
    Perm,
    /// Finite sets of nonnegative integers under symmetric difference.
    FinSet,
}

/// A finitely supported permutation, stored as its non-fixed points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Perm {
    // sorted by point, no fixed points
    map: Vec<(u32, u32)>,
}

impl Perm {
    pub fn identity() -> Self {
        Perm { map: Vec::new() }
    }

    /// Builds a permutation from `(point, image)` pairs. Fixed points may be
    /// listed; anything that is not a bijection on the listed points is rejected.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut map: Vec<(u32, u32)> = pairs.into_iter().filter(|(p, i)| p != i).collect();
        map.sort_unstable();
        let mut points: Vec<u32> = map.iter().map(|&(p, _)| p).collect();
        let mut images: Vec<u32> = map.iter().map(|&(_, i)| i).collect();
        images.sort_unstable();
        points.dedup();
        if points.len() != map.len() {
            return Err(Error::Parse("point listed twice".into()));
        }
        if points != images {
            return Err(Error::Parse("pairs do not define a permutation".into()));
        }
        Ok(Perm { map })
    }

    pub fn apply(&self, x: u32) -> u32 {
        match self.map.binary_search_by_key(&x, |&(p, _)| p) {
            Ok(i) => self.map[i].1,
            Err(_) => x,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.map.iter().map(|&(p, _)| p)
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.map
    }

    /// `self * other`, applying `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        let mut pts: Vec<u32> = self.support().chain(other.support()).collect();
        pts.sort_unstable();
        pts.dedup();
        let map = pts
            .into_iter()
            .filter_map(|x| {
                let y = self.apply(other.apply(x));
                (y != x).then_some((x, y))
            })
            .collect();
        Perm { map }
    }

    pub fn inverse(&self) -> Perm {
        let mut map: Vec<(u32, u32)> = self.map.iter().map(|&(p, i)| (i, p)).collect();
        map.sort_unstable();
        Perm { map }
    }

    /// Disjoint cycles, each starting at its smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for &(start, _) in &self.map {
            if seen.contains(&start) {
                continue;
            }
            let mut cyc = vec![start];
            seen.insert(start);
            let mut x = self.apply(start);
            while x != start {
                seen.insert(x);
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }
}

/// A finite set of nonnegative integers, strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FinSet {
    elems: Vec<u32>,
}

impl FinSet {
    pub fn empty() -> Self {
        FinSet { elems: Vec::new() }
    }

    /// Builds a set from distinct points in any order.
    pub fn from_points(points: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut elems: Vec<u32> = points.into_iter().collect();
        elems.sort_unstable();
        if let Some(w) = elems.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::RepeatedPoint(w[0]));
        }
        Ok(FinSet { elems })
    }

    pub fn elements(&self) -> &[u32] {
        &self.elems
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn symmetric_difference(&self, other: &FinSet) -> FinSet {
        let (a, b) = (&self.elems, &other.elems);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        FinSet { elems: out }
    }
}

/// An element of either group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Perm(Perm),
    Set(FinSet),
}

impl GroupElement {
    pub fn identity(kind: Kind) -> Self {
        match kind {
            Kind::Perm => GroupElement::Perm(Perm::identity()),
            Kind::FinSet => GroupElement::Set(FinSet::empty()),
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            GroupElement::Perm(_) => Kind::Perm,
            GroupElement::Set(_) => Kind::FinSet,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Perm(p) => p.is_identity(),
            GroupElement::Set(s) => s.is_empty(),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            GroupElement::Perm(p) => GroupElement::Perm(p.inverse()),
            GroupElement::Set(s) => GroupElement::Set(s.clone()),
        }
    }

    pub fn set(points: impl IntoIterator<Item = u32>) -> Result<Self> {
        FinSet::from_points(points).map(GroupElement::Set)
    }
}

/// Group product; for permutations the right factor acts first.
pub fn group_mul(a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    match (a, b) {
        (GroupElement::Perm(x), GroupElement::Perm(y)) => Ok(GroupElement::Perm(x.compose(y))),
        (GroupElement::Set(x), GroupElement::Set(y)) => {
            Ok(GroupElement::Set(x.symmetric_difference(y)))
        }
        _ => Err(Error::KindMismatch),
    }
}

/// The cycle `p0 -> p1 -> .. -> pk -> p0`.
pub fn cycle(points: &[u32]) -> Result<GroupElement> {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::RepeatedPoint(w[0]));
    }
    if points.len() < 2 {
        return Ok(GroupElement::identity(Kind::Perm));
    }
    let pairs = points
        .iter()
        .zip(points.iter().cycle().skip(1))
        .map(|(&p, &q)| (p, q));
    Perm::from_pairs(pairs).map(GroupElement::Perm)
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Perm(p) => {
                if p.is_identity() {
                    return f.write_str("()");
                }
                for c in p.cycles() {
                    let body: Vec<String> = c.iter().map(u32::to_string).collect();
                    write!(f, "({})", body.join(" "))?;
                }
                Ok(())
            }
            GroupElement::Set(s) => {
                let body: Vec<String> = s.elems.iter().map(u32::to_string).collect();
                write!(f, "{{{}}}", body.join(","))
            }
        }
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("malformed group element `{s}`"));
        if let Some(body) = s.strip_prefix('{') {
            let body = body.strip_suffix('}').ok_or_else(bad)?;
            let pts = body
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            return GroupElement::set(pts);
        }
        if !s.starts_with('(') {
            return Err(bad());
        }
        let mut acc = GroupElement::identity(Kind::Perm);
        for chunk in s.split_inclusive(')') {
            let chunk = chunk.trim();
            let body = chunk
                .strip_prefix('(')
                .and_then(|c| c.strip_suffix(')'))
                .ok_or_else(bad)?;
            let pts = body
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            acc = group_mul(&acc, &cycle(&pts)?)?;
        }
        Ok(acc)
    }
}

/// A finitely supported coefficient map on one of the two groups.
///
/// Zero coefficients are never stored, so structural equality is equality in
/// the algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element<S> {
    kind: Kind,
    terms: BTreeMap<GroupElement, S>,
}

impl<S: Scalar> Element<S> {
    pub fn zero(kind: Kind) -> Self {
        Element {
            kind,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(kind: Kind) -> Self {
        Self::delta(GroupElement::identity(kind))
    }

    pub fn delta(g: GroupElement) -> Self {
        Self::term(g, S::one())
    }

    pub fn term(g: GroupElement, c: S) -> Self {
        let mut out = Self::zero(g.kind());
        out.add_term(g, c);
        out
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: &GroupElement) -> S {
        self.terms.get(g).cloned().unwrap_or_else(S::zero)
    }

    /// Adds `c * g` in place. Panics on a kind mismatch.
    pub fn add_term(&mut self, g: GroupElement, c: S) {
        assert_eq!(g.kind(), self.kind, "term kind does not match element kind");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.kind);
        }
        Element {
            kind: self.kind,
            terms: self
                .terms
                .iter()
                .map(|(g, x)| (g.clone(), x.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch);
        }
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-S::one()))
    }

    /// Convolution product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch);
        }
        let mut out = Self::zero(self.kind);
        for (g, x) in &self.terms {
            for (h, y) in &other.terms {
                out.add_term(group_mul(g, h)?, x.clone() * y.clone());
            }
        }
        Ok(out)
    }

    /// Coefficient of the identity.
    pub fn trace(&self) -> S {
        self.coeff(&GroupElement::identity(self.kind))
    }

    /// `trace(self * other)` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> Result<S> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch);
        }
        let mut acc = S::zero();
        for (g, x) in &self.terms {
            if let Some(y) = other.terms.get(&g.inverse()) {
                acc += x.clone() * y.clone();
            }
        }
        Ok(acc)
    }

    pub fn star(&self) -> Self {
        Element {
            kind: self.kind,
            terms: self
                .terms
                .iter()
                .map(|(g, x)| (g.inverse(), x.conj()))
                .collect(),
        }
    }

    /// Parses the text form, taking `kind` for the zero element.
    pub fn parse_with_kind(s: &str, kind: Kind) -> Result<Self>
    where
        S: FromStr,
    {
        let s = s.trim();
        let mut out = Self::zero(kind);
        if s == "0" {
            return Ok(out);
        }
        let mut first = true;
        for part in s.split(" + ") {
            let (c, g) = part
                .split_once('*')
                .ok_or_else(|| Error::Parse(format!("term `{part}` lacks `coeff*element`")))?;
            let c: S = c
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient `{c}`")))?;
            let g: GroupElement = g.parse()?;
            if first {
                out.kind = g.kind();
                first = false;
            } else if g.kind() != out.kind {
                return Err(Error::KindMismatch);
            }
            out.add_term(g, c);
        }
        Ok(out)
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let body: Vec<String> = self.terms.iter().map(|(g, c)| format!("{c}*{g}")).collect();
        f.write_str(&body.join(" + "))
    }
}

impl<S: Scalar + FromStr> FromStr for Element<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with_kind(s, Kind::Perm)
    }
}

pub fn alg_mul<S: Scalar>(x: &Element<S>, y: &Element<S>) -> Result<Element<S>> {
    x.try_mul(y)
}

pub fn trace<S: Scalar>(x: &Element<S>) -> S {
    x.trace()
}

pub fn star<S: Scalar>(x: &Element<S>) -> Element<S> {
    x.star()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn p(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    #[test]
    fn transposition_product_is_three_cycle() {
        let prod = group_mul(&p("(0 1)"), &p("(0 2)")).unwrap();
        assert_eq!(prod, cycle(&[0, 2, 1]).unwrap());
        let GroupElement::Perm(perm) = &prod else {
            panic!()
        };
        assert_eq!((perm.apply(0), perm.apply(2), perm.apply(1)), (2, 1, 0));
    }

    #[test]
    fn star_transposition_extends_cycle() {
        // (0 c)(0 a1 .. ar) = (0 a1 .. ar c)
        let lhs = group_mul(&cycle(&[0, 9]).unwrap(), &cycle(&[0, 3, 5, 7]).unwrap()).unwrap();
        assert_eq!(lhs, cycle(&[0, 3, 5, 7, 9]).unwrap());
        // (0 b1 .. bs) = (0 bs) .. (0 b1)
        let mut acc = GroupElement::identity(Kind::Perm);
        for b in [4, 2, 6] {
            acc = group_mul(&cycle(&[0, b]).unwrap(), &acc).unwrap();
        }
        assert_eq!(acc, cycle(&[0, 4, 2, 6]).unwrap());
    }

    #[test]
    fn symmetric_difference_and_identity() {
        assert_eq!(group_mul(&p("{1,2}"), &p("{2,3}")).unwrap(), p("{1,3}"));
        for g in [p("(0 4 1)"), p("{0,5}")] {
            let e = GroupElement::identity(g.kind());
            assert_eq!(group_mul(&g, &e).unwrap(), g);
            assert_eq!(group_mul(&e, &g).unwrap(), g);
        }
        assert_eq!(group_mul(&p("(0 1)"), &p("{1}")), Err(Error::KindMismatch));
    }

    #[test]
    fn cycles() {
        assert_eq!(cycle(&[0, 3]).unwrap(), p("(0 3)"));
        let c = cycle(&[0, 1, 2]).unwrap();
        let GroupElement::Perm(perm) = &c else {
            panic!()
        };
        assert_eq!((perm.apply(0), perm.apply(1), perm.apply(2)), (1, 2, 0));
        assert!(cycle(&[5]).unwrap().is_identity());
        assert_eq!(cycle(&[0, 2, 0]), Err(Error::RepeatedPoint(0)));
    }

    #[test]
    fn text_forms() {
        assert_eq!(cycle(&[0, 3, 5]).unwrap().to_string(), "(0 3 5)");
        assert_eq!(cycle(&[3, 5, 0]).unwrap().to_string(), "(0 3 5)");
        assert_eq!(GroupElement::set([5, 1, 3]).unwrap().to_string(), "{1,3,5}");
        assert_eq!(GroupElement::identity(Kind::FinSet).to_string(), "{}");
        assert_eq!(p("(0 1)(2 3)").to_string(), "(0 1)(2 3)");
        assert!("(0 1".parse::<GroupElement>().is_err());
        assert!("{1,1}".parse::<GroupElement>().is_err());
    }

    #[test]
    fn convolution_examples() {
        let x = Element::<Q>::delta(p("(0 1)"))
            .try_add(&Element::delta(p("(0 2)")))
            .unwrap();
        let y = Element::<Q>::delta(p("(0 1)"));
        let xy = alg_mul(&x, &y).unwrap();
        assert_eq!(xy.trace(), ratio(1, 1));
        assert_eq!(xy.coeff(&p("(0 1 2)")), ratio(1, 1));
        assert_eq!(xy.len(), 2);

        assert!(alg_mul(&x, &Element::zero(Kind::Perm)).unwrap().is_zero());

        let s = Element::<Q>::delta(p("{1}"));
        assert_eq!(alg_mul(&s, &s).unwrap(), Element::unit(Kind::FinSet));
    }

    #[test]
    fn trace_and_star_examples() {
        assert_eq!(trace(&Element::<Q>::unit(Kind::Perm)), ratio(1, 1));
        assert_eq!(trace(&Element::<Q>::delta(p("(0 1)"))), ratio(0, 1));
        let c = Element::<Q>::delta(p("(0 1 2)"));
        assert_eq!(star(&c), Element::delta(p("(0 2 1)")));
        assert_eq!(star(&star(&c)), c);
    }

    fn arb_perm_term() -> impl Strategy<Value = (GroupElement, i64)> {
        (
            proptest::sample::subsequence((0u32..5).collect::<Vec<_>>(), 0..=4),
            any::<bool>(),
            -3i64..=3,
        )
            .prop_map(|(mut pts, rev, c)| {
                if rev {
                    pts.reverse();
                }
                (cycle(&pts).unwrap(), c)
            })
    }

    fn arb_perm_element() -> impl Strategy<Value = Element<Q>> {
        prop::collection::vec(arb_perm_term(), 0..5).prop_map(|ts| {
            let mut e = Element::zero(Kind::Perm);
            for (g, c) in ts {
                e.add_term(g, ratio(c, 1));
            }
            e
        })
    }

    fn arb_set_element() -> impl Strategy<Value = Element<Q>> {
        prop::collection::vec(
            (prop::collection::btree_set(0u32..6, 0..4), -3i64..=3),
            0..5,
        )
        .prop_map(|ts| {
            let mut e = Element::zero(Kind::FinSet);
            for (s, c) in ts {
                e.add_term(GroupElement::set(s).unwrap(), ratio(c, 2));
            }
            e
        })
    }

    proptest! {
        #[test]
        fn trace_is_tracial(x in arb_perm_element(), y in arb_perm_element()) {
            let xy = alg_mul(&x, &y).unwrap().trace();
            let yx = alg_mul(&y, &x).unwrap().trace();
            prop_assert_eq!(&xy, &yx);
            prop_assert_eq!(x.trace_of_product(&y).unwrap(), xy);
        }

        #[test]
        fn trace_is_positive(x in arb_perm_element()) {
            let t = alg_mul(&x, &star(&x)).unwrap().trace();
            prop_assert!(t >= ratio(0, 1));
        }

        #[test]
        fn product_is_associative(x in arb_perm_element(), y in arb_perm_element(), z in arb_perm_element()) {
            let l = alg_mul(&alg_mul(&x, &y).unwrap(), &z).unwrap();
            let r = alg_mul(&x, &alg_mul(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn set_algebra_laws(x in arb_set_element(), y in arb_set_element(), z in arb_set_element()) {
            prop_assert_eq!(alg_mul(&x, &y).unwrap(), alg_mul(&y, &x).unwrap());
            let l = alg_mul(&alg_mul(&x, &y).unwrap(), &z).unwrap();
            let r = alg_mul(&x, &alg_mul(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(l, r);
            for (g, _) in x.terms() {
                prop_assert!(group_mul(g, g).unwrap().is_identity());
            }
        }

        #[test]
        fn text_round_trip(x in arb_perm_element(), y in arb_set_element()) {
            for e in [x, y] {
                let printed = e.to_string();
                let parsed = Element::<Q>::parse_with_kind(&printed, e.kind()).unwrap();
                prop_assert_eq!(&parsed, &e);
                prop_assert_eq!(parsed.to_string(), printed);
            }
        }
    }
}
