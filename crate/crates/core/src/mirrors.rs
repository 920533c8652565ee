//! Dyck r-paths, the truncated Toeplitz model and two-row tableaux: three
//! objects counted by `#NC2(r)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::pairing::Pairing;

/// `Delta(k) = {k, k-2, .., -k}`, descending.
pub fn delta_set(k: usize) -> Vec<i64> {
    let k = k as i64;
    (0..=k).map(|s| k - 2 * s).collect()
}

fn in_delta(jump: i64, k: usize) -> bool {
    jump.unsigned_abs() as usize <= k && (jump - k as i64) % 2 == 0
}

/// Values `gamma(0..=p)` of a Dyck r-path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePath {
    values: Vec<i64>,
}

impl LatticePath {
    /// Checks membership in `Gamma(r)`.
    pub fn new(values: Vec<i64>, r: &Composition) -> Result<Self> {
        if !is_dyck_path(&values, r.parts()) {
            return Err(Error::NotMember(format!(
                "{} is not a Dyck {r}-path",
                LatticePath { values }
            )));
        }
        Ok(LatticePath { values })
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn height(&self) -> i64 {
        self.values.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.values.iter().map(i64::to_string).collect();
        write!(f, "({})", body.join(","))
    }
}

impl FromStr for LatticePath {
    type Err = Error;

    /// Parses the values only; membership is checked by [`LatticePath::new`].
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let values = inner
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad path value {v:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticePath { values })
    }
}

impl Serialize for LatticePath {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn is_dyck_path(values: &[i64], r: &[usize]) -> bool {
    values.len() == r.len() + 1
        && values[0] == 0
        && values[r.len()] == 0
        && r.iter().enumerate().all(|(i, &ri)| {
            let (a, b) = (values[i], values[i + 1]);
            in_delta(b - a, ri) && a + b >= ri as i64
        })
}

/// No window `(x, y) != (0, p)` of the path, shifted to start at 0, is a
/// Dyck path for the matching slice of `r`.
pub fn is_irreducible(path: &LatticePath, r: &Composition) -> bool {
    let g = &path.values;
    let p = r.len();
    for x in 0..p {
        for y in x + 1..=p {
            if (x, y) == (0, p) {
                continue;
            }
            let shifted: Vec<i64> = g[x..=y].iter().map(|v| v - g[x]).collect();
            if is_dyck_path(&shifted, &r.parts()[x..y]) {
                return false;
            }
        }
    }
    true
}

/// `Gamma(r)` in lexicographic order.
pub fn enumerate_paths(r: &Composition) -> Vec<LatticePath> {
    fn go(i: usize, r: &[usize], suffix: &[usize], cur: &mut Vec<i64>, out: &mut Vec<LatticePath>) {
        if i == r.len() {
            if cur[i] == 0 {
                out.push(LatticePath {
                    values: cur.clone(),
                });
            }
            return;
        }
        let a = cur[i];
        for jump in delta_set(r[i]).into_iter().rev() {
            let b = a + jump;
            // the remaining jumps must be able to come back down
            if b < 0 || a + b < r[i] as i64 || b > suffix[i + 1] as i64 {
                continue;
            }
            cur.push(b);
            go(i + 1, r, suffix, cur, out);
            cur.pop();
        }
    }
    let parts = r.parts();
    let mut suffix = vec![0usize; parts.len() + 1];
    for i in (0..parts.len()).rev() {
        suffix[i] = suffix[i + 1] + parts[i];
    }
    let mut out = Vec::new();
    go(0, parts, &suffix, &mut vec![0], &mut out);
    out
}

/// `Gamma*(r)`.
pub fn enumerate_irreducible_paths(r: &Composition) -> Vec<LatticePath> {
    enumerate_paths(r)
        .into_iter()
        .filter(|g| is_irreducible(g, r))
        .collect()
}

/// `gamma(i)` is the number of pairs still open after the first `i` runs.
pub fn pairing_to_path(pairing: &Pairing, r: &Composition) -> Result<LatticePath> {
    if !(pairing.is_noncrossing() && pairing.avoids_blocks(r)) {
        return Err(Error::NotMember(format!("{pairing} is not in NC2{r}")));
    }
    let partner = pairing.partners();
    let f = r.projection();
    let mut values = vec![0i64; r.len() + 1];
    for (x, &y) in partner.iter().enumerate() {
        values[f[x] + 1] += if y > x { 1 } else { -1 };
    }
    for i in 1..values.len() {
        values[i] += values[i - 1];
    }
    Ok(LatticePath { values })
}

/// Inverse of [`pairing_to_path`]: run `i` closes `s_i` pairs, then opens the rest.
pub fn path_to_pairing(path: &LatticePath, r: &Composition) -> Result<Pairing> {
    if !is_dyck_path(&path.values, r.parts()) {
        return Err(Error::NotMember(format!("{path} is not a Dyck {r}-path")));
    }
    let mut partner = vec![0usize; r.total()];
    let mut open = Vec::new();
    let mut x = 0;
    for (i, &ri) in r.parts().iter().enumerate() {
        let rise = path.values[i + 1] - path.values[i];
        let closers = ((ri as i64 - rise) / 2) as usize;
        for _ in 0..closers {
            let o = open.pop().expect("path stays above the closers");
            partner[o] = x;
            partner[x] = o;
            x += 1;
        }
        for _ in closers..ri {
            open.push(x);
            x += 1;
        }
    }
    Pairing::from_partners(partner)
}

/// Square matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    d: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Usage("matrix dimension must be at least 1".into()));
        }
        Ok(IntegerMatrix {
            d,
            entries: vec![BigInt::zero(); d * d],
        })
    }

    pub fn identity(d: usize) -> Result<Self> {
        let mut m = Self::zeros(d)?;
        for i in 0..d {
            m.entries[i * d + i] = BigInt::one();
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.d + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.d + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.entries
            .chunks(self.d)
            .map(<[BigInt]>::to_vec)
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::Usage(format!("dimension {} vs {}", self.d, other.d)));
        }
        let d = self.d;
        let mut out = Self::zeros(d)?;
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * d + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::Usage(format!("dimension {} vs {}", self.d, other.d)));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(IntegerMatrix { d: self.d, entries })
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(BigInt::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// `T_r` truncated to indices `0..d`: entry 1 iff `j - i` is in `Delta(r)`
/// and `i + j >= r`.
pub fn toeplitz_matrix(r: usize, d: usize) -> Result<IntegerMatrix> {
    let mut m = IntegerMatrix::zeros(d)?;
    for i in 0..d {
        for j in 0..d {
            if in_delta(j as i64 - i as i64, r) && i + j >= r {
                m.set(i, j, BigInt::one());
            }
        }
    }
    Ok(m)
}

/// `[T_{r1} .. T_{rp}](0, 0)` at dimension `|r|/2 + 1`.
pub fn toeplitz_moment(rs: &[usize]) -> Result<BigInt> {
    toeplitz_moment_with_dim(rs, rs.iter().sum::<usize>() / 2 + 1)
}

pub fn toeplitz_moment_with_dim(rs: &[usize], d: usize) -> Result<BigInt> {
    let mut acc = IntegerMatrix::identity(d)?;
    for &r in rs {
        acc = acc.mul(&toeplitz_matrix(r, d)?)?;
    }
    Ok(acc.get(0, 0).clone())
}

/// Two-row semistandard tableau of shape `(|r|/2, |r|/2)`, entries 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    rows: [Vec<usize>; 2],
}

impl Tableau {
    pub fn new(top: Vec<usize>, bottom: Vec<usize>) -> Result<Self> {
        let t = Tableau {
            rows: [top, bottom],
        };
        if !t.is_semistandard() {
            return Err(Error::NotMember(format!(
                "{t} is not a semistandard two-row tableau"
            )));
        }
        Ok(t)
    }

    pub fn top(&self) -> &[usize] {
        &self.rows[0]
    }

    pub fn bottom(&self) -> &[usize] {
        &self.rows[1]
    }

    fn is_semistandard(&self) -> bool {
        let [a, b] = &self.rows;
        a.len() == b.len()
            && a.windows(2).all(|w| w[0] <= w[1])
            && b.windows(2).all(|w| w[0] <= w[1])
            && a.iter().zip(b).all(|(x, y)| x < y)
            && a.iter().chain(b).all(|&v| v >= 1)
    }

    /// Multiplicity of each entry `1..=p`.
    pub fn weight(&self, p: usize) -> Vec<usize> {
        let mut w = vec![0; p];
        for &v in self.rows.iter().flatten() {
            if v <= p {
                w[v - 1] += 1;
            }
        }
        w
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &[usize]| r.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        write!(f, "[[{}],[{}]]", row(&self.rows[0]), row(&self.rows[1]))
    }
}

impl Serialize for Tableau {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&self.rows[0])?;
        seq.serialize_element(&self.rows[1])?;
        seq.end()
    }
}

/// All tableaux of weight `r`, sorted by top row then bottom row.
///
/// Values are placed in increasing order: value `i` puts `s_i` copies in the
/// bottom row and `r_i - s_i` in the top. Columns stay strict iff the bottom
/// row never outgrows the part of the top row filled by smaller values.
pub fn enumerate_ssyt(r: &Composition) -> Vec<Tableau> {
    fn go(i: usize, r: &[usize], half: usize, t: &mut Tableau, out: &mut Vec<Tableau>) {
        if i == r.len() {
            if t.rows[0].len() == half && t.rows[1].len() == half {
                out.push(t.clone());
            }
            return;
        }
        let (a, b) = (t.rows[0].len(), t.rows[1].len());
        for s in 0..=r[i] {
            if b + s > a || a + r[i] - s > half {
                continue;
            }
            t.rows[1].extend(std::iter::repeat_n(i + 1, s));
            t.rows[0].extend(std::iter::repeat_n(i + 1, r[i] - s));
            go(i + 1, r, half, t, out);
            t.rows[0].truncate(a);
            t.rows[1].truncate(b);
        }
    }
    let mut out = Vec::new();
    if r.total().is_multiple_of(2) {
        let mut t = Tableau {
            rows: [Vec::new(), Vec::new()],
        };
        go(0, r.parts(), r.total() / 2, &mut t, &mut out);
    }
    out.sort();
    out
}

/// Closers of run `i` go to the bottom row, openers to the top.
pub fn pairing_to_ssyt(pairing: &Pairing, r: &Composition) -> Result<Tableau> {
    let path = pairing_to_path(pairing, r)?;
    let mut t = Tableau {
        rows: [Vec::new(), Vec::new()],
    };
    for (i, &ri) in r.parts().iter().enumerate() {
        let rise = path.values[i + 1] - path.values[i];
        let closers = ((ri as i64 - rise) / 2) as usize;
        t.rows[1].extend(std::iter::repeat_n(i + 1, closers));
        t.rows[0].extend(std::iter::repeat_n(i + 1, ri - closers));
    }
    debug_assert!(t.is_semistandard());
    Ok(t)
}
