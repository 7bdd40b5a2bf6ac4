//! Acceptance suite: twelve criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every line reaches stdout; the
//! process exits nonzero if any criterion fails.

use std::collections::HashSet;
use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use faclab_core::combinatorics::{cg_count, erdos_stats, ruzsa_check};
use faclab_core::modular::{primes_in, PrimeModulus};
use faclab_core::represent::{
    coverage_report, cp_search, k_term_product_rep, product_plus_factorials_rep, reachable_set, verify_certificate,
    wilson_check, CoverageShape, CpSolver, NotFound, Outcome, DEFAULT_SEARCH_BUDGET,
};
use faclab_core::expsum::WindowSums;
use faclab_core::sets::{
    build_factorial_set, estimate_product_cardinality, multiplicative_energy, product_set, quotient_set, EnergyLeft,
    ResidueSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Wilson sweep wall-clock ceiling, single-threaded.
const WILSON_TIME: Duration = Duration::from_secs(120);
/// Moment identity tolerance and wall-clock ceiling.
const MOMENT_REL: f64 = 1e-6;
const MOMENT_TIME: Duration = Duration::from_secs(300);
/// Slack on the Cauchy-Schwarz ceiling for odd moments.
const HOLDER_SLACK: f64 = 1e-6;
/// Sampled cardinality estimate vs exact.
const ESTIMATOR_REL: f64 = 0.10;
/// Calibrated window for the mean missing fraction (heuristic 1/e).
const ERDOS_WINDOW: (f64, f64) = (0.33, 0.41);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn modulus(p: u64) -> PrimeModulus {
    PrimeModulus::new(p).unwrap()
}

fn wilson() -> Verdict {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let t = Instant::now();
    let (primes, failures) = pool.install(|| {
        primes_in(2, 9999).fold((0, 0), |(n, f), p| {
            (n + 1, f + wilson_check(&modulus(p)).unwrap().failures.len())
        })
    });
    let el = t.elapsed();
    verdict(
        failures == 0 && el < WILSON_TIME,
        format!("{primes} primes below 10^4, {failures} failures, {:.1}s", el.as_secs_f64()),
    )
}

fn two_product() -> Verdict {
    let mut short = Vec::new();
    let mut n = 0;
    for p in primes_in(3, 2000) {
        n += 1;
        let c = coverage_report(&modulus(p), CoverageShape::TwoProduct, 1 << 20).unwrap();
        if c.fraction() != 1.0 {
            short.push(p);
        }
    }
    verdict(short.is_empty(), format!("{n} primes in [3, 2000], incomplete at {short:?}"))
}

fn moment_grid() -> Vec<(u64, u64, u32)> {
    let mut g = Vec::new();
    for p in [101, 499, 1009, 2003] {
        for n in [10, 25, 50] {
            for ell in [1, 2, 3] {
                g.push((p, n, ell));
            }
        }
    }
    g
}

fn moments() -> (Verdict, Verdict) {
    let t = Instant::now();
    let reports: Vec<_> = moment_grid()
        .into_iter()
        .map(|(p, n, ell)| WindowSums::new(0, n, &modulus(p)).unwrap().moment_report(ell, 1 << 22).unwrap())
        .collect();
    let el = t.elapsed();
    let worst = reports.iter().map(|r| r.relative_error()).fold(0.0, f64::max);
    let holder_bad = reports
        .iter()
        .filter(|r| r.odd_moment > r.holder_ceiling() * (1.0 + HOLDER_SLACK))
        .count();
    (
        verdict(
            worst < MOMENT_REL && el < MOMENT_TIME,
            format!("{} instances, worst relative error {worst:.2e}, {:.1}s", reports.len(), el.as_secs_f64()),
        ),
        verdict(holder_bad == 0, format!("{} instances, {holder_bad} above sqrt(J_l J_(l+1))", reports.len())),
    )
}

fn random_prime(rng: &mut ChaCha8Rng, lo: u64, hi: u64) -> u64 {
    loop {
        let x = rng.random_range(lo..=hi);
        if faclab_core::is_prime(x) {
            return x;
        }
    }
}

fn random_set(rng: &mut ChaCha8Rng, m: PrimeModulus, size: usize) -> ResidueSet {
    let mut s = ResidueSet::from_residues(m, []);
    while s.len() < size {
        s.insert(rng.random_range(1..m.p()));
    }
    s
}

fn set_identities() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = 0;
    for _ in 0..100 {
        let p = random_prime(&mut rng, 3, 10_000);
        let n = rng.random_range(1..=300.min(p - 1));
        let a = build_factorial_set(&modulus(p), n, false).unwrap();
        let (k, prod, quot) = (
            a.len() as u128,
            product_set(&a, &a).unwrap().len() as u128,
            quotient_set(&a, &a).unwrap().len() as u128,
        );
        let ok = prod >= k && quot >= k && quot <= k * k && prod.pow(4) >= quot.pow(3);
        bad += u32::from(!ok);
    }
    verdict(bad == 0, format!("100 instances, {bad} violations"))
}

fn ruzsa() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bad = 0;
    for _ in 0..1000 {
        let p = random_prime(&mut rng, 3, 10_000);
        let m = modulus(p);
        let top = 200.min(p as usize - 1);
        let draw = |rng: &mut ChaCha8Rng| {
            let k = rng.random_range(1..=top);
            random_set(rng, m, k)
        };
        let (x, y, z) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        bad += u32::from(!ruzsa_check(&x, &y, &z).unwrap().holds);
    }
    verdict(bad == 0, format!("1000 triples, {bad} violations"))
}

fn energy() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mismatches = 0;
    for _ in 0..50 {
        let p = random_prime(&mut rng, 40, 10_000);
        let m = modulus(p);
        let (ns, nm) = (rng.random_range(1..=30), rng.random_range(1..=30));
        let s = random_set(&mut rng, m, ns);
        let t = random_set(&mut rng, m, nm);
        let (sv, tv) = (s.to_sorted_vec(), t.to_sorted_vec());
        let mut brute = 0u128;
        for &s1 in &sv {
            for &m1 in &tv {
                for &s2 in &sv {
                    for &m2 in &tv {
                        brute += u128::from(s1 * m1 % p == s2 * m2 % p);
                    }
                }
            }
        }
        mismatches += u32::from(multiplicative_energy(EnergyLeft::Set(&s), &t).unwrap().count != brute);
    }
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let p = random_prime(&mut rng, 5000, 100_000);
        let m = modulus(p);
        let a = build_factorial_set(&m, rng.random_range(100..400), false).unwrap();
        let nb = rng.random_range(100..400);
        let b = random_set(&mut rng, m, nb);
        let exact = product_set(&a, &b).unwrap().len() as f64;
        let est = estimate_product_cardinality(&a, &b, 4000, i).unwrap().estimate;
        worst = worst.max((est - exact).abs() / exact);
    }
    verdict(
        mismatches == 0 && worst <= ESTIMATOR_REL,
        format!("50 brute-force instances, {mismatches} mismatches; estimator worst error {:.1}%", worst * 100.0),
    )
}

fn erdos() -> Verdict {
    let fracs: Vec<f64> = primes_in(1000, 10_000)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&p| erdos_stats(&modulus(p), 1 << 20).unwrap().missing_fraction())
        .collect();
    let mean = fracs.iter().sum::<f64>() / fracs.len() as f64;
    verdict(
        (ERDOS_WINDOW.0..=ERDOS_WINDOW.1).contains(&mean),
        format!("{} primes in [10^3, 10^4], mean missing/p = {mean:.4}", fracs.len()),
    )
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn cg() -> Verdict {
    let (mut cases, mut mismatches, mut asym) = (0u64, 0u64, 0u64);
    for p in primes_in(2, 200) {
        let m = modulus(p);
        for s0 in 0..p {
            for side in 1..=14.min(p - 1) {
                let mut n = 0;
                for x in 1..=side {
                    for y in 1..=side {
                        if (x + p - s0 * y % p) % p == 0 && gcd(x, y) == 1 {
                            n += 1;
                        }
                    }
                }
                let got = cg_count(&m, s0, side, side).unwrap().count;
                mismatches += u64::from(got != n);
                cases += 1;
            }
            if s0 == 0 {
                continue;
            }
            let inv = m.inv(s0).unwrap();
            for x in 1..=14.min(p - 1) {
                for y in [1, 3, 7, 14].into_iter().filter(|&y| y < p) {
                    let a = cg_count(&m, s0, x, y).unwrap().count;
                    let b = cg_count(&m, inv, y, x).unwrap().count;
                    asym += u64::from(a != b);
                }
            }
        }
    }
    verdict(
        mismatches == 0 && asym == 0,
        format!("{cases} boxes, {mismatches} brute-force mismatches, {asym} symmetry breaks"),
    )
}

enum SolverRun {
    Verified,
    ConfirmedMiss,
    Bad(String),
}

fn solver_soundness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let jobs: Vec<(bool, u64, u64)> = (0..2000)
        .map(|i| {
            let p = random_prime(&mut rng, 3, 10_000);
            (i % 2 == 0, p, rng.random_range(0..p))
        })
        .collect();
    let results: Vec<SolverRun> = jobs
        .par_iter()
        .map(|&(k_term, p, lambda)| {
            let m = modulus(p);
            let bound = ((p as f64).powf(0.9).ceil() as u64).min(p - 1);
            let outcome = if k_term {
                k_term_product_rep(&m, lambda, 5, bound, DEFAULT_SEARCH_BUDGET)
            } else {
                product_plus_factorials_rep(&m, lambda, 5, bound, DEFAULT_SEARCH_BUDGET)
            }
            .unwrap();
            match outcome {
                Outcome::Found(c) if verify_certificate(&c).unwrap().is_valid() => SolverRun::Verified,
                Outcome::Found(_) => SolverRun::Bad(format!("p={p} lambda={lambda}: certificate rejected")),
                Outcome::NotFound(NotFound::BudgetTruncated) => {
                    SolverRun::Bad(format!("p={p} lambda={lambda}: budget truncated"))
                }
                Outcome::NotFound(NotFound::Exhausted) => {
                    let shape = if k_term {
                        CoverageShape::KTermProduct { k: 5, bound }
                    } else {
                        CoverageShape::ProductPlusFactorials { k: 5, bound }
                    };
                    if reachable_set(&m, shape).unwrap().contains(lambda) {
                        SolverRun::Bad(format!("p={p} lambda={lambda}: miss contradicted"))
                    } else {
                        SolverRun::ConfirmedMiss
                    }
                }
            }
        })
        .collect();
    let found = results.iter().filter(|r| matches!(r, SolverRun::Verified)).count();
    let missed = results.iter().filter(|r| matches!(r, SolverRun::ConfirmedMiss)).count();
    let bad: Vec<&String> = results
        .iter()
        .filter_map(|r| match r {
            SolverRun::Bad(s) => Some(s),
            _ => None,
        })
        .collect();
    verdict(
        bad.is_empty(),
        format!(
            "1000 k-term + 1000 product-plus runs: {found} verified, {missed} confirmed misses, {} defects{}",
            bad.len(),
            bad.first().map(|s| format!(" (first: {s})")).unwrap_or_default()
        ),
    )
}

fn cp() -> Verdict {
    let primes: Vec<u64> = primes_in(5, 500).collect();
    let failures: Vec<u64> = primes
        .par_iter()
        .filter(|&&p| {
            let m = modulus(p);
            let Some(c) = cp_search(&m, p, p).unwrap().c else {
                return true;
            };
            // re-verify through certificates checked by direct arithmetic
            let solver = CpSolver::new(&m, p, c).unwrap();
            let covered: HashSet<u64> = (0..p)
                .filter(|&l| solver.solve(l).is_some_and(|cert| verify_certificate(&cert).unwrap().is_valid()))
                .collect();
            covered.len() as u64 != p
        })
        .copied()
        .collect();
    verdict(
        failures.is_empty(),
        format!("{} primes in [5, 500], failures at {failures:?}", primes.len()),
    )
}

fn determinism() -> Verdict {
    let runs: [&[&str]; 6] = [
        &["growth", "--p", "10007", "--n", "50:1000:50"],
        &["card", "--p", "1009..1100", "--n", "100,300", "--strategy", "sampled", "--samples", "500", "--seed", "3"],
        &["expsum", "--p", "2003", "--n", "40", "--strategy", "sampled", "--samples", "50", "--seed", "4"],
        &["katz-shen", "--p", "101..200", "--trials", "5", "--seed", "8"],
        &["solve", "--p", "3..100", "--shape", "k_term_product", "--k", "3"],
        &["moments", "--p", "499", "--n", "25"],
    ];
    let root = tempfile::tempdir().unwrap();
    let mut diffs = Vec::new();
    for (i, args) in runs.iter().enumerate() {
        let mut trees = Vec::new();
        for rep in 0..2 {
            let dir = root.path().join(format!("{i}_{rep}"));
            let st = Command::new(env!("CARGO_BIN_EXE_faclab"))
                .args(*args)
                .args(["--out", dir.to_str().unwrap(), "-q"])
                .status()
                .unwrap();
            if !st.success() {
                diffs.push(format!("{} exited {st}", args[0]));
            }
            let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(&dir)
                .unwrap()
                .filter_map(|e| {
                    let e = e.ok()?;
                    e.file_type().ok()?.is_file().then(|| {
                        (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
                    })
                })
                .collect();
            files.sort();
            trees.push(files);
        }
        if trees[0] != trees[1] {
            diffs.push(args[0].to_owned());
        }
    }
    verdict(diffs.is_empty(), format!("{} commands run twice, differing: {diffs:?}", runs.len()))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |id: u32, name: &str, v: Verdict| {
        println!("{} {id:>2} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += u32::from(!v.pass);
    };
    report(1, "wilson identity", wilson());
    report(2, "two-product coverage", two_product());
    let (m3, m4) = moments();
    report(3, "moment identity", m3);
    report(4, "odd-moment ceiling", m4);
    report(5, "set identities", set_identities());
    report(6, "ruzsa triangle", ruzsa());
    report(7, "energy oracle", energy());
    report(8, "erdos statistic", erdos());
    report(9, "cg_count oracle", cg());
    report(10, "solver soundness", solver_soundness());
    report(11, "cp_search", cp());
    report(12, "determinism", determinism());
    println!("acceptance: {} of 12 passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
