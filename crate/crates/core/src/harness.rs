//! Report builders behind the `chaoslab` command line: convergence tables,
//! residuals, asymptotic freeness, cross-validation and the small
//! enumeration commands. Every number is produced and compared exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::Kind;
use crate::chaos::{
    build_l_on, build_m_on, residual_classical_guarded, residual_free_guarded, trace_of_chain,
    ScaledElement, TraceCounter, DEFAULT_TRACE_GUARD,
};
use crate::composition::{compositions_up_to, Composition};
use crate::cumulant::{classical_cumulant, free_cumulant, PairingMoments};
use crate::error::{Error, Result};
use crate::mirrors::{
    enumerate_irreducible_paths, enumerate_paths, enumerate_ssyt, is_irreducible, pairing_to_path,
    pairing_to_ssyt, path_to_pairing, toeplitz_matrix, toeplitz_moment_with_dim,
};
use crate::ortho::{
    free_charlier_family, linearize_charlier, linearize_chebyshev, linearize_hermite,
};
use crate::pairing::{count, enumerate_nc2, weighted_pairing_sum, Family};
use crate::scalar::{floor_scaled, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Free,
    Classical,
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(Model::Free),
            "classical" => Ok(Model::Classical),
            _ => Err(Error::Usage(format!(
                "unknown model {s:?}; expected free or classical"
            ))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Free => "free",
            Model::Classical => "classical",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    /// No failure among the rows that ran, but some row hit the guard.
    #[serde(rename = "ERROR")]
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 2,
            Verdict::Error => 3,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Error => "ERROR",
        })
    }
}

/// An exact rational with a decimal rendering for reading.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactValue {
    pub exact: String,
    pub decimal: f64,
}

impl From<&BigRational> for ExactValue {
    fn from(q: &BigRational) -> Self {
        ExactValue {
            exact: q.to_string(),
            decimal: q.to_f64(),
        }
    }
}

fn exact(q: &BigRational) -> Value {
    serde_json::to_value(ExactValue::from(q)).expect("plain struct")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub instance: String,
    pub values: BTreeMap<String, Value>,
    pub limit: Option<ExactValue>,
    pub gap: Option<ExactValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Row {
    fn new(instance: impl Into<String>) -> Self {
        Row {
            instance: instance.into(),
            values: BTreeMap::new(),
            limit: None,
            gap: None,
            error: None,
        }
    }

    fn value(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.values.insert(key.to_string(), v.into());
        self
    }

    fn failed(instance: impl Into<String>, e: &Error) -> Self {
        let mut row = Row::new(instance);
        row.error = Some(e.to_string());
        row
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub rows: Vec<Row>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    fn new(command: &str, params: BTreeMap<String, String>) -> Self {
        Report {
            command: command.to_string(),
            params,
            rows: Vec::new(),
            verdict: Verdict::Pass,
            notes: Vec::new(),
        }
    }

    fn settle(mut self, ok: bool) -> Self {
        self.verdict = if !ok {
            Verdict::Fail
        } else if self.rows.iter().any(|r| r.error.is_some()) {
            Verdict::Error
        } else {
            Verdict::Pass
        };
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// One line per row: instance, every value key that occurs, limit, gap,
    /// error. Exact values are written as fractions.
    pub fn to_csv(&self) -> Result<String> {
        let mut keys: Vec<&String> = self.rows.iter().flat_map(|r| r.values.keys()).collect();
        keys.sort();
        keys.dedup();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["instance".to_string()];
        header.extend(keys.iter().map(|k| k.to_string()));
        header.extend(["limit", "gap", "error"].map(String::from));
        let csv_err = |e: csv::Error| Error::Usage(e.to_string());
        w.write_record(&header).map_err(csv_err)?;
        for row in &self.rows {
            let mut rec = vec![row.instance.clone()];
            rec.extend(
                keys.iter()
                    .map(|k| row.values.get(*k).map(cell).unwrap_or_default()),
            );
            rec.push(
                row.limit
                    .as_ref()
                    .map(|v| v.exact.clone())
                    .unwrap_or_default(),
            );
            rec.push(
                row.gap
                    .as_ref()
                    .map(|v| v.exact.clone())
                    .unwrap_or_default(),
            );
            rec.push(row.error.clone().unwrap_or_default());
            w.write_record(&rec).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Usage(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 strings"))
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(o) => match o.get("exact") {
            Some(Value::String(s)) => s.clone(),
            _ => v.to_string(),
        },
        _ => v.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Usage(format!(
                "unknown format {s:?}; expected json or csv"
            ))),
        }
    }
}

pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(report.to_json()),
        Format::Csv => report.to_csv(),
    }
}

fn list<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn check_ns(ns: &[u64]) -> Result<()> {
    if ns.is_empty() || ns.contains(&0) {
        return Err(Error::Usage("--n needs one or more positive sizes".into()));
    }
    Ok(())
}

/// `4 / n_max`.
pub fn tolerance(n_max: u64) -> BigRational {
    BigRational::new(BigInt::from(4), BigInt::from(n_max.max(1)))
}

/// `|g(n_max)| <= |g(n_min)|` and `|g(n_max)| <= 4 / n_max`, over the rows
/// that produced a value.
fn vanishing(points: &[(u64, BigRational)]) -> bool {
    let Some(first) = points.iter().min_by_key(|p| p.0) else {
        return true;
    };
    let last = points.iter().max_by_key(|p| p.0).expect("nonempty");
    last.1.abs() <= first.1.abs() && last.1.abs() <= tolerance(last.0)
}

/// Finite-n trace against its pairing limit.
pub fn cmd_converge(model: Model, r: &Composition, ns: &[u64], guard: u128) -> Result<Report> {
    check_ns(ns)?;
    let mut params = BTreeMap::new();
    params.insert("model".into(), model.to_string());
    params.insert("r".into(), r.to_string());
    params.insert("t".into(), list(&r.time_vec()));
    params.insert("n".into(), list(ns));
    params.insert("guard".into(), guard.to_string());
    let mut report = Report::new("converge", params);

    let limit = weighted_pairing_sum(r, model == Model::Free)?;
    let counter = TraceCounter::with_guard(guard);
    let mut gaps = Vec::new();
    for &n in ns {
        let instance = format!("n={n}");
        let value = match model {
            Model::Free => counter.free(r, n),
            Model::Classical => counter.classical(r, n),
        };
        match value {
            Ok(v) => {
                let gap = &limit - &v;
                gaps.push((n, gap.clone()));
                let mut row = Row::new(instance).value("trace", exact(&v));
                row.limit = Some((&limit).into());
                row.gap = Some((&gap).into());
                report.rows.push(row);
            }
            Err(e @ Error::InstanceTooLarge { .. }) => report.rows.push(Row::failed(instance, &e)),
            Err(e) => return Err(e),
        }
    }
    Ok(report.settle(vanishing(&gaps)))
}

/// Residuals of the chaos recursions.
pub fn cmd_residual(
    model: Model,
    r: usize,
    t: &BigRational,
    ns: &[u64],
    guard: u128,
) -> Result<Report> {
    check_ns(ns)?;
    if r == 0 {
        return Err(Error::Usage("residual needs r >= 1".into()));
    }
    let mut params = BTreeMap::new();
    params.insert("model".into(), model.to_string());
    params.insert("r".into(), r.to_string());
    params.insert("t".into(), t.to_string());
    params.insert("n".into(), list(ns));
    params.insert("guard".into(), guard.to_string());
    let mut report = Report::new("residual", params);

    let zero = BigRational::zero();
    let mut seq = Vec::new();
    let mut identity_ok = true;
    for &n in ns {
        let instance = format!("n={n}");
        let row = match model {
            Model::Free => residual_free_guarded(n, t, r, guard).map(|res| {
                seq.push((n, res.clone()));
                Row::new(instance.clone()).value("residual", exact(&res))
            }),
            Model::Classical => residual_classical_guarded(n, t, r, guard).map(|c| {
                identity_ok &= c.residual == c.predicted;
                seq.push((n, c.residual.clone()));
                Row::new(instance.clone())
                    .value("residual", exact(&c.residual))
                    .value("epsilon", exact(&c.epsilon))
                    .value("predicted", exact(&c.predicted))
            }),
        };
        match row {
            Ok(mut row) => {
                row.limit = Some((&zero).into());
                row.gap = Some((&seq.last().expect("just pushed").1).into());
                report.rows.push(row);
            }
            Err(e @ Error::InstanceTooLarge { .. }) => report.rows.push(Row::failed(instance, &e)),
            Err(e) => return Err(e),
        }
    }
    let mut sorted = seq.clone();
    sorted.sort_by_key(|p| p.0);
    let ok = match model {
        Model::Free => {
            let monotone = sorted.windows(2).all(|w| w[1].1 <= w[0].1);
            monotone && sorted.last().is_none_or(|p| p.1 <= tolerance(p.0))
        }
        Model::Classical => {
            report
                .notes
                .push("classical verdict: residual equals epsilon^2 psi(L_{r-1}^2) at every n, final value within 4/n_max".into());
            identity_ok && sorted.last().is_none_or(|p| p.1 <= tolerance(p.0))
        }
    };
    Ok(report.settle(ok))
}

/// Parsed `--t` cut points and `--word` letters for [`cmd_freeness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreenessSetup {
    /// Right endpoints `t_1 < .. < t_p` of `(t_{i-1}, t_i]`, with `t_0 = 0`.
    pub cuts: Vec<BigRational>,
    /// Chaos order attached to each interval.
    pub orders: Vec<usize>,
    /// Interval index (0-based) of each factor.
    pub word: Vec<usize>,
}

impl FreenessSetup {
    pub fn new(cuts: Vec<BigRational>, orders: Vec<usize>, word: &str) -> Result<Self> {
        if cuts.is_empty() || cuts.len() != orders.len() {
            return Err(Error::Usage(format!(
                "{} cut points but {} orders; give one order per interval",
                cuts.len(),
                orders.len()
            )));
        }
        let mut prev = BigRational::zero();
        for c in &cuts {
            if *c <= prev {
                return Err(Error::Usage("cut points must increase from 0".into()));
            }
            prev = c.clone();
        }
        if orders.contains(&0) {
            return Err(Error::Usage("orders must be positive".into()));
        }
        let word = word
            .trim()
            .chars()
            .map(|ch| {
                let k = (ch.to_ascii_uppercase() as usize).wrapping_sub('A' as usize);
                if ch.is_ascii_alphabetic() && k < cuts.len() {
                    Ok(k)
                } else {
                    Err(Error::Usage(format!("letter {ch:?} names no interval")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if word.is_empty() {
            return Err(Error::Usage("empty word".into()));
        }
        Ok(FreenessSetup { cuts, orders, word })
    }

    /// Distinct letters, and neighbours differ.
    pub fn is_alternating(&self) -> bool {
        let mut letters = self.word.clone();
        letters.sort_unstable();
        letters.dedup();
        letters.len() > 1 && self.word.windows(2).all(|w| w[0] != w[1])
    }

    fn range(&self, n: u64, i: usize) -> (u32, u32) {
        let lo = if i == 0 {
            0
        } else {
            floor_scaled(n, &self.cuts[i - 1])
        };
        let hi = floor_scaled(n, &self.cuts[i]);
        (
            u32::try_from(lo).expect("fits"),
            u32::try_from(hi).expect("fits"),
        )
    }

    fn word_text(&self) -> String {
        self.word
            .iter()
            .map(|&k| (b'A' + k as u8) as char)
            .collect()
    }
}

fn falling(m: u32, r: usize) -> u128 {
    (0..r as u128).fold(1u128, |acc, j| {
        acc.saturating_mul((m as u128).saturating_sub(j))
    })
}

// Terms formed when each half of the chain is multiplied out.
fn chain_estimate(sizes: &[u128]) -> u128 {
    let mid = sizes.len().div_ceil(2);
    let half = |s: &[u128]| s.iter().fold(1u128, |a, &b| a.saturating_mul(b.max(1)));
    half(&sizes[..mid]).saturating_add(half(&sizes[mid..]))
}

fn centred(x: &ScaledElement<BigRational>) -> Result<ScaledElement<BigRational>> {
    let c = x.trace()?;
    if c.is_zero() {
        return Ok(x.clone());
    }
    // a nonzero trace forces an even half-power, so c is carried as c n^(k/2)
    let k = x.half_power();
    let lift = num_traits::pow(BigInt::from(x.n()), (k / 2) as usize);
    let unit = ScaledElement::unit(x.kind(), x.n()).scale(&(c * BigRational::from_integer(lift)));
    x.try_sub(&ScaledElement::new(unit.base().clone(), x.n(), k))
}

fn freeness_value(model: Model, setup: &FreenessSetup, n: u64, guard: u128) -> Result<BigRational> {
    let p = setup.cuts.len();
    let ranges: Vec<(u32, u32)> = (0..p).map(|i| setup.range(n, i)).collect();
    let sizes: Vec<u128> = setup
        .word
        .iter()
        .map(|&i| falling(ranges[i].1 - ranges[i].0, setup.orders[i]))
        .collect();
    let estimate = chain_estimate(&sizes);
    if estimate > guard {
        return Err(Error::InstanceTooLarge { estimate, guard });
    }
    match model {
        Model::Free => {
            let elems = ranges
                .iter()
                .zip(&setup.orders)
                .map(|(&(lo, hi), &r)| centred(&build_m_on(n, lo, hi, r)))
                .collect::<Result<Vec<_>>>()?;
            let chain: Vec<_> = setup.word.iter().map(|&i| elems[i].clone()).collect();
            trace_of_chain(&chain, Kind::Perm, n)
        }
        Model::Classical => {
            let elems: Vec<ScaledElement<BigRational>> = ranges
                .iter()
                .zip(&setup.orders)
                .map(|(&(lo, hi), &r)| build_l_on(n, lo, hi, r))
                .collect();
            let chain: Vec<_> = setup.word.iter().map(|&i| elems[i].clone()).collect();
            let joint = trace_of_chain(&chain, Kind::FinSet, n)?;
            let mut marginals = BigRational::from_integer(1.into());
            for (i, e) in elems.iter().enumerate() {
                let own: Vec<_> = setup
                    .word
                    .iter()
                    .filter(|&&k| k == i)
                    .map(|_| e.clone())
                    .collect();
                if !own.is_empty() {
                    marginals *= trace_of_chain(&own, Kind::FinSet, n)?;
                }
            }
            Ok(joint - marginals)
        }
    }
}

/// Free mode: centred alternating moments. Classical mode: joint moment
/// minus the product of the per-interval moments. Both should vanish.
pub fn cmd_freeness(
    model: Model,
    setup: &FreenessSetup,
    ns: &[u64],
    guard: u128,
) -> Result<Report> {
    check_ns(ns)?;
    let mut params = BTreeMap::new();
    params.insert("model".into(), model.to_string());
    params.insert("t".into(), list(&setup.cuts));
    params.insert("r".into(), list(&setup.orders));
    params.insert("word".into(), setup.word_text());
    params.insert("n".into(), list(ns));
    params.insert("guard".into(), guard.to_string());
    let mut report = Report::new("freeness", params);
    if model == Model::Free && !setup.is_alternating() {
        report
            .notes
            .push("word does not alternate between distinct intervals; nothing to test".into());
        return Ok(report.settle(true));
    }
    let zero = BigRational::zero();
    let mut seq = Vec::new();
    for &n in ns {
        let instance = format!("n={n}");
        match freeness_value(model, setup, n, guard) {
            Ok(v) => {
                seq.push((n, v.clone()));
                let mut row = Row::new(instance).value("moment", exact(&v));
                row.limit = Some((&zero).into());
                row.gap = Some((&v).into());
                report.rows.push(row);
            }
            Err(e @ Error::InstanceTooLarge { .. }) => report.rows.push(Row::failed(instance, &e)),
            Err(e) => return Err(e),
        }
    }
    Ok(report.settle(vanishing(&seq)))
}

fn crossval_row(r: &Composition, max_total: usize) -> Result<(Row, Vec<String>)> {
    let mut problems = Vec::new();
    let mut row = Row::new(r.to_string());
    let nc = count(r, Family::Nc2)?;
    let nc_star = count(r, Family::Nc2Star)?;
    let pi = count(r, Family::Pi2)?;
    let pi_star = count(r, Family::Pi2Star)?;
    let paths = enumerate_paths(r);
    let irreducible = paths.iter().filter(|g| is_irreducible(g, r)).count() as u64;
    let toeplitz = toeplitz_moment_with_dim(r.parts(), r.total() / 2 + 1)?;
    let ssyt = enumerate_ssyt(r);

    if paths.len() as u64 != nc || toeplitz != BigInt::from(nc) || ssyt.len() as u64 != nc {
        problems.push(format!("{r}: four-way counts disagree"));
    }
    if irreducible != nc_star {
        problems.push(format!(
            "{r}: irreducible paths {irreducible} vs NC2* {nc_star}"
        ));
    }
    let mut images = Vec::new();
    let mut tableaux = Vec::new();
    for p in enumerate_nc2(r)? {
        let g = pairing_to_path(&p, r)?;
        if path_to_pairing(&g, r)? != p || p.connects(r) != is_irreducible(&g, r) {
            problems.push(format!("{r}: bijection fails at {p}"));
        }
        images.push(g);
        tableaux.push(pairing_to_ssyt(&p, r)?);
    }
    images.sort();
    tableaux.sort();
    if images != paths || tableaux != ssyt {
        problems.push(format!("{r}: pairing images are not the enumerated sets"));
    }

    let kf: BigRational = free_cumulant(&PairingMoments::free(), r.parts())?;
    let kc: BigRational = classical_cumulant(&PairingMoments::classical(), r.parts())?;
    if kf != BigRational::from_integer(nc_star.into()) {
        problems.push(format!("{r}: free cumulant {kf} vs NC2* {nc_star}"));
    }
    if kc != BigRational::from_integer(pi_star.into()) {
        problems.push(format!("{r}: classical cumulant {kc} vs Pi2* {pi_star}"));
    }

    let mut lin = 0u64;
    for k in 0..=max_total - r.total() {
        match linearize_chebyshev(r.parts(), k) {
            Ok(_) => lin += 1,
            Err(e) => problems.push(e.to_string()),
        }
        let (c, n) = linearize_hermite(r.parts(), k)?;
        let fact: BigInt = (1..=k as u64).map(BigInt::from).product();
        if c * BigRational::from_integer(fact) != BigRational::from_integer(n.into()) {
            problems.push(format!(
                "{r}: hermite coefficient of H_{k} times {k}! is not {n}"
            ));
        } else {
            lin += 1;
        }
        if 2 * (r.total() + k) <= max_total {
            match linearize_charlier(r.parts(), k) {
                Ok(_) => lin += 1,
                Err(e) => problems.push(e.to_string()),
            }
        }
    }

    row = row
        .value("nc2", nc)
        .value("nc2_star", nc_star)
        .value("pi2", pi)
        .value("pi2_star", pi_star)
        .value("paths", paths.len() as u64)
        .value("irreducible_paths", irreducible)
        .value("toeplitz", toeplitz.to_string())
        .value("ssyt", ssyt.len() as u64)
        .value("linearization_checks", lin)
        .value("ok", problems.is_empty());
    Ok((row, problems))
}

/// Every identity, for every composition with `|r| <= max_total`.
pub fn cmd_crossval(max_total: usize) -> Result<Report> {
    if max_total % 2 == 1 {
        return Err(Error::Usage(format!(
            "max total must be even, got {max_total}"
        )));
    }
    let mut params = BTreeMap::new();
    params.insert("max_total".into(), max_total.to_string());
    let mut report = Report::new("crossval", params);
    let mut ok = true;

    let v = free_charlier_family::<BigRational>(max_total / 2)?;
    let u = crate::ortho::chebyshev_u_family::<BigRational>(max_total);
    for (n, vn) in v.iter().enumerate() {
        if vn.compose(&u[2]) != u[2 * n] {
            ok = false;
            report
                .notes
                .push(format!("V_{n}(U_2) differs from U_{}", 2 * n));
        }
    }

    for r in compositions_up_to(max_total) {
        let (row, problems) = crossval_row(&r, max_total)?;
        ok &= problems.is_empty();
        report.notes.extend(problems);
        report.rows.push(row);
    }
    Ok(report.settle(ok))
}

pub fn parse_family(s: &str) -> Result<Family> {
    match s.to_ascii_lowercase().as_str() {
        "nc2" => Ok(Family::Nc2),
        "nc2*" | "nc2star" | "nc2_star" => Ok(Family::Nc2Star),
        "pi2" => Ok(Family::Pi2),
        "pi2*" | "pi2star" | "pi2_star" => Ok(Family::Pi2Star),
        _ => Err(Error::Usage(format!(
            "unknown family {s:?}; expected nc2, nc2*, pi2 or pi2*"
        ))),
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Nc2 => "nc2",
        Family::Nc2Star => "nc2_star",
        Family::Pi2 => "pi2",
        Family::Pi2Star => "pi2_star",
    }
}

/// Sizes of the pairing families of `r`; all four when `family` is `None`.
pub fn cmd_count(r: &Composition, family: Option<Family>) -> Result<Report> {
    let mut params = BTreeMap::new();
    params.insert("r".into(), r.to_string());
    if let Some(f) = family {
        params.insert("family".into(), family_name(f).into());
    }
    let mut report = Report::new("count", params);
    let families = match family {
        Some(f) => vec![f],
        None => vec![Family::Nc2, Family::Nc2Star, Family::Pi2, Family::Pi2Star],
    };
    let mut row = Row::new(r.to_string());
    for f in families {
        row = row.value(family_name(f), count(r, f)?);
    }
    report.rows.push(row);
    Ok(report.settle(true))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Chebyshev,
    Hermite,
    Charlier,
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chebyshev" => Ok(Basis::Chebyshev),
            "hermite" => Ok(Basis::Hermite),
            "charlier" => Ok(Basis::Charlier),
            _ => Err(Error::Usage(format!(
                "unknown basis {s:?}; expected chebyshev, hermite or charlier"
            ))),
        }
    }
}

/// Linearisation coefficients of `P_{r1} .. P_{rp}` on `P_k`, each checked
/// against its pairing count.
pub fn cmd_linearize(r: &Composition, ks: &[usize], bases: &[Basis]) -> Result<Report> {
    let mut params = BTreeMap::new();
    params.insert("r".into(), r.to_string());
    params.insert("k".into(), list(ks));
    let mut report = Report::new("linearize", params);
    let mut ok = true;
    for &k in ks {
        let mut row = Row::new(format!("k={k}"));
        for basis in bases {
            match basis {
                Basis::Chebyshev => match linearize_chebyshev(r.parts(), k) {
                    Ok(c) => row = row.value("chebyshev", c),
                    Err(e @ Error::LinearizationMismatch { .. }) => {
                        ok = false;
                        report.notes.push(e.to_string());
                    }
                    Err(e) => return Err(e),
                },
                Basis::Hermite => {
                    let (c, n) = linearize_hermite(r.parts(), k)?;
                    let fact: BigInt = (1..=k as u64).map(BigInt::from).product();
                    ok &=
                        &c * BigRational::from_integer(fact) == BigRational::from_integer(n.into());
                    row = row
                        .value("hermite", exact(&c))
                        .value("hermite_pi2_count", n);
                }
                Basis::Charlier => match linearize_charlier(r.parts(), k) {
                    Ok(c) => row = row.value("charlier", c),
                    Err(e @ Error::LinearizationMismatch { .. }) => {
                        ok = false;
                        report.notes.push(e.to_string());
                    }
                    Err(e) => return Err(e),
                },
            }
        }
        report.rows.push(row);
    }
    Ok(report.settle(ok))
}

/// `Gamma(r)` or `Gamma*(r)`, each path with its pairing.
pub fn cmd_paths(r: &Composition, irreducible: bool) -> Result<Report> {
    let mut params = BTreeMap::new();
    params.insert("r".into(), r.to_string());
    params.insert("irreducible".into(), irreducible.to_string());
    let mut report = Report::new("paths", params);
    let paths = if irreducible {
        enumerate_irreducible_paths(r)
    } else {
        enumerate_paths(r)
    };
    let family = if irreducible {
        Family::Nc2Star
    } else {
        Family::Nc2
    };
    let expected = count(r, family)?;
    for g in &paths {
        let p = path_to_pairing(g, r)?;
        report
            .rows
            .push(Row::new(g.to_string()).value("pairing", p.to_string()));
    }
    report
        .notes
        .push(format!("{} paths, {} pairings", paths.len(), expected));
    Ok(report.settle(paths.len() as u64 == expected))
}

/// Two-row tableaux of weight `r`.
pub fn cmd_tableaux(r: &Composition) -> Result<Report> {
    let mut params = BTreeMap::new();
    params.insert("r".into(), r.to_string());
    let mut report = Report::new("tableaux", params);
    let tableaux = enumerate_ssyt(r);
    let expected = count(r, Family::Nc2)?;
    for t in &tableaux {
        report.rows.push(
            Row::new(t.to_string())
                .value("top", json!(t.top()))
                .value("bottom", json!(t.bottom())),
        );
    }
    report.notes.push(format!(
        "{} tableaux, {} pairings",
        tableaux.len(),
        expected
    ));
    Ok(report.settle(tableaux.len() as u64 == expected))
}

/// Vacuum entry of `T_{r1} .. T_{rp}` at dimension `d` (default `|r|/2 + 1`),
/// and the single matrix when `r` has one part.
pub fn cmd_toeplitz(r: &Composition, d: Option<usize>) -> Result<Report> {
    let d = d.unwrap_or(r.total() / 2 + 1);
    let mut params = BTreeMap::new();
    params.insert("r".into(), r.to_string());
    params.insert("d".into(), d.to_string());
    let mut report = Report::new("toeplitz", params);
    let moment = toeplitz_moment_with_dim(r.parts(), d)?;
    let expected = count(r, Family::Nc2)?;
    let mut row = Row::new(r.to_string())
        .value("moment", moment.to_string())
        .value("nc2", expected);
    if let [single] = r.parts() {
        let rows: Vec<Vec<String>> = toeplitz_matrix(*single, d)?
            .rows()
            .iter()
            .map(|row| row.iter().map(BigInt::to_string).collect())
            .collect();
        row = row.value("matrix", json!(rows));
    }
    report.rows.push(row);
    let ok = d < r.total() / 2 + 1 || moment == BigInt::from(expected);
    if d < r.total() / 2 + 1 {
        report
            .notes
            .push("dimension below |r|/2 + 1; moment may be truncated".into());
    }
    Ok(report.settle(ok))
}

/// Default guard for the model commands.
pub const DEFAULT_GUARD: u128 = DEFAULT_TRACE_GUARD;
