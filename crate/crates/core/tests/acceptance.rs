//! Acceptance checks, one PASS/FAIL line per criterion. Every comparison is
//! exact; the only tolerance is the rational envelope 4/n_max of the
//! convergence verdicts. Exits non-zero if any criterion fails.

use std::process::ExitCode;

use chaoslab::algebra::Kind;
use chaoslab::chaos::{
    build_l, build_m, product_chain, residual_classical, residual_free, TraceCounter,
};
use chaoslab::composition::{compositions_up_to, Composition};
use chaoslab::cumulant::{
    classical_cumulant, free_cumulant, CumulantEngine, MomentTable, PairingMoments,
};
use chaoslab::harness::{cmd_converge, Model, Verdict, DEFAULT_GUARD};
use chaoslab::mirrors::{
    enumerate_irreducible_paths, enumerate_paths, enumerate_ssyt, is_irreducible, pairing_to_path,
    path_to_pairing, toeplitz_moment,
};
use chaoslab::ortho::{
    chebyshev_u_family, expand_in_basis, free_charlier_family, hermite_family, integrate, moments,
    product, Weight,
};
use chaoslab::pairing::{count, enumerate_nc2, Family};
use chaoslab::scalar::ratio;
use chaoslab::Rational;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Check);

const RANDOM_INSTANCES: usize = 50;
const SEED: u64 = 0x5eed_c4a0;

fn int(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(k: u64) -> u64 {
    (1..=k).product()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: chaoslab::Error) -> String {
    e.to_string()
}

fn criterion_1() -> Check {
    let mut got = Vec::new();
    for m in 1..=5u64 {
        let c = count(
            &Composition::constant(1, 2 * m as usize).map_err(err)?,
            Family::Nc2,
        )
        .map_err(err)?;
        let catalan = binomial(2 * m, m) / (m + 1);
        ensure(c == catalan, || format!("m={m}: {c} vs Catalan {catalan}"))?;
        got.push(c);
    }
    ensure(got == [1, 2, 5, 14, 42], || format!("{got:?}"))?;
    Ok(format!("#NC2(<1>_2m) = {got:?}"))
}

fn criterion_2() -> Check {
    let mut got = Vec::new();
    for m in 1..=4u64 {
        let c = count(
            &Composition::constant(1, 2 * m as usize).map_err(err)?,
            Family::Pi2,
        )
        .map_err(err)?;
        let double_factorial: u64 = (1..=m).map(|j| 2 * j - 1).product();
        ensure(c == double_factorial, || {
            format!("m={m}: {c} vs (2m-1)!! {double_factorial}")
        })?;
        got.push(c);
    }
    ensure(got == [1, 3, 15, 105], || format!("{got:?}"))?;
    Ok(format!("#Pi2(<1>_2m) = {got:?}"))
}

fn criterion_3() -> Check {
    // the single-variable moments of M_2, from the centred free Poisson law
    let seq = moments::<Rational>(Weight::MpCentered, 6).map_err(err)?;
    let table = MomentTable::from_sequence(2, &seq.values()[1..]);
    for p in 2..=6 {
        let labels = vec![2; p];
        let from_table: Rational = free_cumulant(&table, &labels).map_err(err)?;
        let from_counts: Rational = free_cumulant(&PairingMoments::free(), &labels).map_err(err)?;
        ensure(from_table == int(1) && from_counts == int(1), || {
            format!("p={p}: kappa = {from_table} / {from_counts}")
        })?;
        let star =
            count(&Composition::constant(2, p).map_err(err)?, Family::Nc2Star).map_err(err)?;
        ensure(star == 1, || format!("p={p}: #NC2*(<2>_p) = {star}"))?;
    }
    Ok("kappa_p(M_2) = 1 and #NC2*(<2>_p) = 1 for p = 2..6".into())
}

fn criterion_4() -> Check {
    let sc = moments::<Rational>(Weight::Semicircle, 12).map_err(err)?;
    let u = chebyshev_u_family::<Rational>(12);
    let mut pairs = 0;
    for q in 1..=11usize {
        for r in 1..=12 - q {
            if q == r {
                continue;
            }
            let c = count(&Composition::new(vec![q, r]).map_err(err)?, Family::Nc2).map_err(err)?;
            let i = integrate(&(&u[q] * &u[r]), &sc).map_err(err)?;
            ensure(c == 0 && i == int(0), || {
                format!("(q,r)=({q},{r}): count {c}, integral {i}")
            })?;
            pairs += 1;
        }
    }
    Ok(format!(
        "{pairs} pairs q != r with q + r <= 12 uncorrelated"
    ))
}

fn criterion_5() -> Check {
    let mut checked = 0;
    for r in compositions_up_to(10)
        .into_iter()
        .filter(|r| r.total() % 2 == 0)
    {
        let nc = count(&r, Family::Nc2).map_err(err)?;
        let paths = enumerate_paths(&r);
        let toeplitz = toeplitz_moment(r.parts()).map_err(err)?;
        let ssyt = enumerate_ssyt(&r).len() as u64;
        ensure(
            paths.len() as u64 == nc && toeplitz == BigInt::from(nc) && ssyt == nc,
            || {
                format!(
                    "{r}: NC2 {nc}, paths {}, toeplitz {toeplitz}, ssyt {ssyt}",
                    paths.len()
                )
            },
        )?;
        let star = count(&r, Family::Nc2Star).map_err(err)?;
        let irreducible = enumerate_irreducible_paths(&r);
        ensure(irreducible.len() as u64 == star, || {
            format!("{r}: NC2* {star}, irreducible paths {}", irreducible.len())
        })?;
        let mut images = Vec::new();
        for p in enumerate_nc2(&r).map_err(err)? {
            let g = pairing_to_path(&p, &r).map_err(err)?;
            ensure(path_to_pairing(&g, &r).map_err(err)? == p, || {
                format!("{r}: {p} does not round-trip")
            })?;
            ensure(p.connects(&r) == is_irreducible(&g, &r), || {
                format!("{r}: {p} connected-ness differs from {g}")
            })?;
            images.push(g);
        }
        images.sort();
        ensure(images == paths, || {
            format!("{r}: path images differ from Gamma(r)")
        })?;
        checked += 1;
    }
    Ok(format!(
        "{checked} compositions, four counts agree, bijection round-trips"
    ))
}

fn criterion_6() -> Check {
    let u = chebyshev_u_family::<Rational>(10);
    let h = hermite_family::<Rational>(10);
    let mut cases = 0;
    for r in compositions_up_to(10) {
        for k in 0..=10 - r.total() {
            let rk = r.appended(k);

            let prod_u = product(&r.parts().iter().map(|&i| u[i].clone()).collect::<Vec<_>>());
            let cu = expand_in_basis(&prod_u, &u)
                .map_err(err)?
                .get(k)
                .cloned()
                .unwrap_or_else(|| int(0));
            let nc = count(&rk, Family::Nc2).map_err(err)?;
            ensure(cu == int(nc), || {
                format!("{r} k={k}: chebyshev {cu} vs #NC2 {nc}")
            })?;

            let prod_h = product(&r.parts().iter().map(|&i| h[i].clone()).collect::<Vec<_>>());
            let ch = expand_in_basis(&prod_h, &h)
                .map_err(err)?
                .get(k)
                .cloned()
                .unwrap_or_else(|| int(0));
            let pi = count(&rk, Family::Pi2).map_err(err)?;
            ensure(ch.clone() * int(factorial(k as u64)) == int(pi), || {
                format!("{r} k={k}: hermite {ch} * {k}! vs #Pi2 {pi}")
            })?;
            cases += 1;
        }
    }
    let v = free_charlier_family::<Rational>(4).map_err(err)?;
    for (n, vn) in v.iter().enumerate() {
        ensure(vn.compose(&u[2]) == u[2 * n], || {
            format!("V_{n}(U_2) != U_{}", 2 * n)
        })?;
    }
    Ok(format!("{cases} (r, k) cases; V_n(U_2) = U_2n for n <= 4"))
}

fn criterion_7() -> Check {
    let r: Composition = "2,2".parse().map_err(err)?;
    let expect = [
        (Model::Free, ["1/4", "1/8", "1/16"], "1"),
        (Model::Classical, ["1/2", "1/4", "1/8"], "2"),
    ];
    for (model, gaps, limit) in expect {
        let rep = cmd_converge(model, &r, &[4, 8, 16], DEFAULT_GUARD).map_err(err)?;
        let got: Vec<&str> = rep
            .rows
            .iter()
            .filter_map(|row| row.gap.as_ref())
            .map(|g| g.exact.as_str())
            .collect();
        ensure(got == gaps, || format!("{model}: gaps {got:?}"))?;
        ensure(
            rep.rows
                .iter()
                .all(|row| row.limit.as_ref().is_some_and(|l| l.exact == limit)),
            || format!("{model}: limit is not {limit}"),
        )?;
        ensure(rep.verdict == Verdict::Pass, || {
            format!("{model}: verdict {}", rep.verdict)
        })?;
    }
    Ok("free gaps 1/4, 1/8, 1/16 to 1; classical 1/2, 1/4, 1/8 to 2; both PASS".into())
}

fn criterion_8() -> Check {
    let one = ratio(1, 1);
    for n in 1..=16 {
        let v = residual_free(n, &one, 1).map_err(err)?;
        ensure(v == int(0), || format!("r=1 n={n}: {v}"))?;
    }
    let ns = [4u64, 6, 8, 10, 12];
    let seq: Vec<Rational> = ns
        .iter()
        .map(|&n| residual_free(n, &one, 2))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    ensure(seq.windows(2).all(|w| w[1] < w[0]), || {
        format!("r=2 not strictly decreasing: {seq:?}")
    })?;
    let last = seq.last().expect("five values");
    ensure(*last <= ratio(4, 12), || format!("r=2 final {last} > 4/12"))?;

    let mut cases = 0;
    for t in [ratio(1, 1), ratio(1, 2), ratio(3, 2)] {
        for r in 1..=3 {
            for n in [2u64, 3, 4, 5, 6] {
                let c = residual_classical(n, &t, r).map_err(err)?;
                ensure(c.residual == c.predicted, || {
                    format!(
                        "classical r={r} n={n} t={t}: {} vs {}",
                        c.residual, c.predicted
                    )
                })?;
                cases += 1;
            }
        }
    }
    let shown: Vec<String> = seq.iter().map(|q| q.to_string()).collect();
    Ok(format!(
        "free r=2 residuals {}; {cases} classical cases equal eps^2 psi(L_(r-1)^2)",
        shown.join(" > ")
    ))
}

fn criterion_9() -> Check {
    let free_m = PairingMoments::free();
    let classical_m = PairingMoments::classical();
    let mut free = CumulantEngine::<Rational, _>::free(&free_m);
    let mut classical = CumulantEngine::<Rational, _>::classical(&classical_m);
    let mut n = 0;
    for r in compositions_up_to(10) {
        let kf = free.cumulant(r.parts()).map_err(err)?;
        let star = count(&r, Family::Nc2Star).map_err(err)?;
        ensure(kf == int(star), || {
            format!("{r}: free cumulant {kf} vs #NC2* {star}")
        })?;
        let kc = classical.cumulant(r.parts()).map_err(err)?;
        let pstar = count(&r, Family::Pi2Star).map_err(err)?;
        ensure(kc == int(pstar), || {
            format!("{r}: classical cumulant {kc} vs #Pi2* {pstar}")
        })?;
        n += 1;
    }
    for (p, expect) in [(2u64, 2u64), (3, 8), (4, 48)] {
        let chi_square = (1u64 << (p - 1)) * factorial(p - 1);
        let k: Rational = classical_cumulant(&classical_m, &vec![2; p as usize]).map_err(err)?;
        ensure(chi_square == expect && k == int(chi_square), || {
            format!("p={p}: k = {k}, oracle {chi_square}")
        })?;
    }
    Ok(format!(
        "{n} compositions invert to NC2* and Pi2*; k_p(L_2) = 2, 8, 48"
    ))
}

fn criterion_10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let counter = TraceCounter::with_guard(DEFAULT_GUARD);
    let times = [ratio(1, 2), ratio(1, 1), ratio(1, 3), ratio(5, 6)];
    for i in 0..RANDOM_INSTANCES {
        let total = rng.gen_range(1..=6usize);
        let mut parts = Vec::new();
        let mut left = total;
        while left > 0 {
            let p = rng.gen_range(1..=left);
            parts.push(p);
            left -= p;
        }
        let ts: Vec<Rational> = parts
            .iter()
            .map(|_| times[rng.gen_range(0..times.len())].clone())
            .collect();
        let n = rng.gen_range(1..=6u64);
        let r = Composition::with_times(parts.clone(), ts.clone()).map_err(err)?;

        let ms: Vec<_> = parts
            .iter()
            .zip(&ts)
            .map(|(&p, t)| build_m::<Rational>(n, t, p))
            .collect();
        let ls: Vec<_> = parts
            .iter()
            .zip(&ts)
            .map(|(&p, t)| build_l::<Rational>(n, t, p))
            .collect();
        let explicit_free = product_chain(&ms, Kind::Perm, n)
            .and_then(|x| x.trace())
            .map_err(err)?;
        let explicit_classical = product_chain(&ls, Kind::FinSet, n)
            .and_then(|x| x.trace())
            .map_err(err)?;
        let free = counter.free(&r, n).map_err(err)?;
        let classical = counter.classical(&r, n).map_err(err)?;
        ensure(
            free == explicit_free && classical == explicit_classical,
            || {
                format!(
                "instance {i}: r={r} t={ts:?} n={n}: free {free} vs {explicit_free}, classical {classical} vs {explicit_classical}"
            )
            },
        )?;
    }
    Ok(format!(
        "{RANDOM_INSTANCES} seeded instances agree in both models"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "Catalan counts of NC2", criterion_1),
        (2, "double-factorial counts of Pi2", criterion_2),
        (3, "free Poisson cumulants", criterion_3),
        (4, "orthogonality of M_q, M_r", criterion_4),
        (5, "four-way equality and path bijection", criterion_5),
        (6, "linearization coefficients", criterion_6),
        (7, "finite-n convergence", criterion_7),
        (8, "recursion residuals", criterion_8),
        (9, "cumulant inversion suites", criterion_9),
        (10, "tuple counting vs explicit products", criterion_10),
    ];
    let mut failed = 0;
    for (k, name, run) in criteria {
        match run() {
            Ok(detail) => println!("[PASS] criterion {k}: {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {k}: {name}: {detail}");
            }
        }
    }
    println!("{} of 10 criteria pass", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
