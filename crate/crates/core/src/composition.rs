use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

/// A vector of positive block sizes `r = (r_1, .., r_p)` with optional
/// nonnegative times, one per block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<usize>,
    times: Option<Vec<BigRational>>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if let Some(i) = parts.iter().position(|&r| r == 0) {
            return Err(Error::InvalidComposition(format!("part {} is zero", i + 1)));
        }
        Ok(Composition { parts, times: None })
    }

    pub fn with_times(parts: Vec<usize>, times: Vec<BigRational>) -> Result<Self> {
        let mut c = Self::new(parts)?;
        if times.len() != c.parts.len() {
            return Err(Error::InvalidComposition(format!(
                "{} times for {} parts",
                times.len(),
                c.parts.len()
            )));
        }
        if times.iter().any(Signed::is_negative) {
            return Err(Error::InvalidComposition("negative time".into()));
        }
        c.times = Some(times);
        Ok(c)
    }

    /// Drops zero parts (and their times) instead of rejecting them.
    pub fn dropping_zeros(parts: &[usize]) -> Self {
        Composition {
            parts: parts.iter().copied().filter(|&r| r > 0).collect(),
            times: None,
        }
    }

    /// `<s>_p`, the constant vector.
    pub fn constant(s: usize, p: usize) -> Result<Self> {
        Self::new(vec![s; p])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `|r|`.
    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn times(&self) -> Option<&[BigRational]> {
        self.times.as_deref()
    }

    /// Time of block `k` (0-based); 1 when no times are attached.
    pub fn time(&self, k: usize) -> BigRational {
        match &self.times {
            Some(t) => t[k].clone(),
            None => BigRational::one(),
        }
    }

    /// All times, defaulting to 1.
    pub fn time_vec(&self) -> Vec<BigRational> {
        (0..self.len()).map(|k| self.time(k)).collect()
    }

    /// The block projection `f_r`, 0-based on both sides: entry `x` is the
    /// block of ground point `x + 1`.
    pub fn projection(&self) -> Vec<usize> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(k, &r)| std::iter::repeat_n(k, r))
            .collect()
    }

    /// 1-based `f_r(x)` for `x` in `1..=|r|`.
    pub fn block_of(&self, x: usize) -> usize {
        let mut acc = 0;
        for (k, &r) in self.parts.iter().enumerate() {
            acc += r;
            if x <= acc {
                return k + 1;
            }
        }
        panic!("point {x} outside 1..={}", self.total());
    }

    /// Appends a part, ignoring zero.
    pub fn appended(&self, k: usize) -> Composition {
        let mut parts = self.parts.clone();
        if k > 0 {
            parts.push(k);
        }
        Composition { parts, times: None }
    }

    /// Sub-composition on the given block indices (0-based, kept in order).
    pub fn restrict(&self, blocks: &[usize]) -> Composition {
        Composition {
            parts: blocks.iter().map(|&b| self.parts[b]).collect(),
            times: self
                .times
                .as_ref()
                .map(|t| blocks.iter().map(|&b| t[b].clone()).collect()),
        }
    }
}

/// All compositions of `total` into positive parts, in lexicographic order.
pub fn compositions_of(total: usize) -> Vec<Composition> {
    fn go(rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if rest == 0 {
            out.push(Composition {
                parts: cur.clone(),
                times: None,
            });
            return;
        }
        for first in 1..=rest {
            cur.push(first);
            go(rest - first, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if total > 0 {
        go(total, &mut Vec::new(), &mut out);
    }
    out
}

/// All compositions with `1 <= |r| <= max_total`, grouped by total.
pub fn compositions_up_to(max_total: usize) -> Vec<Composition> {
    (1..=max_total).flat_map(compositions_of).collect()
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", body.join(","))
    }
}

impl FromStr for Composition {
    type Err = Error;

    /// Accepts `2,2` or `(2,2)`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = body
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad part `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Composition::new(parts)
    }
}
