//! One driver per CLI command. Each reads validated parameters, calls into
//! the core, and streams rows into the run's tables.

use std::fs::File;
use std::io::{BufReader, Write};

use faclab_core::combinatorics::{
    bound_curves, cg_count, erdos_stats, katz_shen_ratio, ruzsa_check, BoundKind, BoundOutcome, BoundProfile,
    SubsetStrategy,
};
use faclab_core::expsum::{MaxStrategy, WindowSums};
use faclab_core::factorial::{factorial_range, FactorialCheckpoint, WindowOptions};
use faclab_core::modular::{PrimeModulus, Residue};
use faclab_core::represent::{
    coverage_report, cp_search, two_product_rep, verify_certificate, wilson_check, wilson_pair, wilson_set,
    Certificate, CoverageShape, CpSolver, KTermSolver, NotFound, Outcome, ProductPlusFactorialsSolver,
    DEFAULT_SOLVER_CAP,
};
use faclab_core::sets::{
    build_factorial_set, estimate_product_cardinality, multiplicative_energy, product_set, quotient_set, EnergyLeft,
    ResidueSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Params, Value};
use crate::error::{CliError, ConfigError};
use crate::formats::{read_checkpoints, write_certificate, write_checkpoints, write_set};
use crate::output::{fmt_f64, Run};
use crate::row;

pub fn execute(pr: &Params, run: &mut Run) -> Result<(), CliError> {
    match pr.spec.name {
        "factorials" => factorials(pr, run),
        "card" => card(pr, run),
        "growth" => growth(pr, run),
        "energy" => energy(pr, run),
        "expsum" => expsum(pr, run),
        "moments" => moments(pr, run),
        "solve" => solve(pr, run),
        "cp-search" => cp_search_cmd(pr, run),
        "wilson-check" => wilson(pr, run),
        "erdos-stats" => erdos(pr, run),
        "ruzsa-check" => ruzsa(pr, run),
        "katz-shen" => katz_shen(pr, run),
        "cg-count" => cg(pr, run),
        "bounds" => bounds(pr, run),
        other => unreachable!("validated command {other}"),
    }
}

fn modulus(p: u64) -> Result<PrimeModulus, CliError> {
    Ok(PrimeModulus::new(p)?)
}

fn header(pr: &Params, file: &str) -> &'static str {
    pr.spec
        .outputs
        .iter()
        .find(|(f, _)| *f == file)
        .map(|(_, cols)| *cols)
        .expect("output listed in the command schema")
}

fn open(pr: &Params, run: &mut Run, file: &str) -> Result<(), CliError> {
    run.open_table(file, header(pr, file))
}

fn int(pr: &Params, key: &str) -> u64 {
    pr.int(key).unwrap_or_else(|| panic!("`{key}` has a default"))
}

fn bound_row(outcome: BoundOutcome) -> (String, String, bool) {
    match outcome {
        BoundOutcome::Value(v) => (fmt_f64(v.value), v.case.to_owned(), v.asymptotic_placeholder),
        BoundOutcome::OutOfRegime(_) => ("nan".into(), "out_of_regime".into(), false),
    }
}

fn factorials(pr: &Params, run: &mut Run) -> Result<(), CliError> {
    let (start, n) = (int(pr, "start"), int(pr, "n"));
    let opts = WindowOptions {
        allow_zero_tail: pr.flag("zero_tail"),
        checkpoint_stride: int(pr, "stride"),
        ..Default::default()
    };
    let resume = match pr.path("resume") {
        Some(path) => {
            let f = File::open(path).map_err(|e| ConfigError::field("resume", format!("{path}: {e}")))?;
            Some(read_checkpoints(BufReader::new(f)).map_err(|e| CliError::Format {
                path: path.to_owned(),
                message: e.to_string(),
            })?)
        }
        None => None,
    };
    open(pr, run, "factorials.csv")?;
    let ps = pr.list("p");
    let mut cps: Vec<FactorialCheckpoint> = Vec::new();
    for (i, &p) in ps.iter().enumerate() {
        let m = modulus(p)?;
        let from = match &resume {
            Some(all) => Some(all.iter().find(|c| c.p == p && c.n == start).ok_or_else(|| {
                ConfigError::field("resume", format!("no checkpoint for p = {p} at n = {start}"))
            })?),
            None => None,
        };
        let w = factorial_range(start, n, &m, from, &opts)?;
        let t = run.table("factorials.csv");
        for (k, v) in w.iter() {
            t.row(row![p, k, v])?;
        }
        cps.extend_from_slice(w.checkpoints());
        let end = w.end_checkpoint();
        if cps.last() != Some(&end) {
            cps.push(end);
        }
        run.progress.tick("factorials", i + 1, ps.len());
    }
    let mut f = run.create_file("checkpoints.txt")?;
    write_checkpoints(&mut f, &cps)?;
    f.flush()?;
    Ok(())
}

fn card(pr: &Params, run: &mut Run) -> Result<(), CliError> {
    open(pr, run, "card.csv")?;
    let sampled = pr.choice("strategy") == "sampled";
    let (samples, seed) = (int(pr, "samples"), pr.seed().unwrap_or(0));
    let (ps, ns) = (pr.list("p"), pr.list("n"));
    for (i, &p) in ps.iter().enumerate() {
        let m = modulus(p)?;
        for &n in ns {
            let a = build_factorial_set(&m, n, false)?;
            let (est, low, high, exact) = if sampled {
                let e = estimate_product_cardinality(&a, &a, samples, seed)?;
                (e.estimate, e.low, e.high, e.exact)
            } else {
                let len = product_set(&a, &a)?.len() as f64;
                (len, len, len, true)
            };
            run.table("card.csv")
                .row(row![p, n, a.len(), fmt_f64(est), fmt_f64(low), fmt_f64(high), exact])?;
            if pr.flag("export") {
                let mut f = run.create_file(&format!("sets/p{p}_n{n}.txt"))?;
                write_set(&mut f, &a)?;
                f.flush()?;
            }
        }
        run.progress.tick("card", i + 1, ps.len());
    }
    Ok(())
}

fn growth(pr: &Params, run: &mut Run) -> Result<(), CliError> {
    open(pr, run, "growth.csv")?;
    let (constant, cutoff) = (pr.float("constant"), pr.float("cutoff"));
    let (ps, ns) = (pr.list("p"), pr.list("n"));
    for (i, &p) in ps.iter().enumerate() {
        let m = modulus(p)?;
        for &n in ns {
            let a = build_factorial_set(&m, n, false)?;
            let prod = product_set(&a, &a)?.len();
            let quot = quotient_set(&a, &a)?.len();
            let profile = |kind| BoundProfile {
                constant,
                cutoff,
                ..BoundProfile::new(kind, p, n)
            };
            let mut pb = bound_curves(&profile(BoundKind::ProductSet));
            if pb.value().is_none() {
                pb = bound_curves(&profile(BoundKind::ProductSetSmall));
            }
            let (pv, pcase, pflag) = bound_row(pb);
            let (qv, qcase, _) = bound_row(bound_curves(&profile(BoundKind::QuotientSet)));
            run.table("growth.csv")
                .row(row![p, n, a.len(), prod, quot, pv, pcase, pflag, qv, qcase])?;
        }
        run.progress.tick("growth", i + 1, ps.len());
    }
    Ok(())
}

fn energy(pr: &Params, run: &mut Run) -> Result<(), CliError> {
    open(pr, run, "energy.csv")?;
    let (left_kind, right_kind) = (pr.choice("left"), pr.choice("right"));
    let mm = int(pr, "m");
    let constant = pr.float("constant");
    let (ps, ns) = (pr.list("p"), pr.list("n"));
    for (i, &p) in ps.iter().enumerate() {
        let m = modulus(p)?;
        let right = match right_kind {
            "interval" => ResidueSet::interval(m, mm)?,
            _ => build_factorial_set(&m, mm, false)?,
        };
        for &n in ns {
            let stored;
            let left = match left_kind {
                "interval" => EnergyLeft::Interval(n),
                "primes" => EnergyLeft::PrimesUpTo(n),
                _ => {
                    stored = build_factorial_set(&m, n, false)?;
                    EnergyLeft::Set(&stored)
                }
            };
            let e = multiplicative_energy(left, &right)?;
            let profile = BoundProfile {
                m: Some(e.right_len),
                constant,
                ..BoundProfile::new(BoundKind::Energy, p, n)
            };
            let (bv, bcase, bflag) = bound_row(bound_curves(&profile));
            run.table("energy.csv").row(row![
                p,
                left_kind,
                n,
                right_kind,
                mm,
                e.left_len,
                e.right_len,
                e.count,
                e.diagonal(),
                fmt_f64(e.product_set_lower_bound()),
                bv,
                bcase,
                bflag
            ])?;
        }
        run.progress.tick("energy", i + 1, ps.len());
    }
    Ok(())
}

fn expsum(pr: &Params, run: &mut Run) -> Result<(), CliError> {
    open(pr, run, "expsum.csv")?;
    let mode = pr.choice("mode");
    let (start, a, cap) = (int(pr, "start"), int(pr, "a"), int(pr, "cap"));
    let strategy = match pr.choice("strategy") {
        "sampled" => MaxStrategy::Sampled {
            count: int(pr, "samples"),
            seed: pr.seed().expect("seed checked for sampled runs"),
        },
        _ => MaxStrategy::Full,
    };
    let constant = pr.float("constant");
    let (ps, ns) = (pr.list("p"), pr.list("n"));
    for (i, &p) in ps.iter().enumerate() {
        let m = modulus(p)?;
        for &n in ns {
            let ws = WindowSums::new(start, n, &m)?;
            let (v, bound) = match mode {
                "single" => (ws.single(m.reduce(a)), f64::NAN),
                "double" => {
                    let set = build_factorial_set(&m, pr.int("set_n").unwrap_or(n), false)?;
                    let profile = BoundProfile {
                        set_len: Some(set.len() as u64),
                        constant,
                        ..BoundProfile::new(BoundKind::DoubleSum, p, n)
                    };
                    let b = bound_curves(&profile).value().map_or(f64::NAN, |b| b.value);
                    (ws.double(m.reduce(a), &set)?, b)
                }
                _ => (ws.max_single(strategy, cap)?, f64::NAN),
            };
            let abs = v.magnitude();
            run.table("expsum.csv").row(row![
                p,
                start,
                n,
                mode,
                v.a,
                v.terms,
                fmt_f64(v.value.re),
                fmt_f64(v.value.im),
                fmt_f64(abs),
                fmt_f64(bound),
                fmt_f64(abs / bound)
            ])?;
        }
        run.progress.tick("expsum", i + 1, ps.len());
    }
    Ok(())
}

fn moments(pr: &Params, run: &mut Run) -> Result<(), CliError> {
    open(pr, run, "moments.csv")?;
    let (start, cap) = (int(pr, "start"), int(pr, "cap"));
    let constant = pr.float("constant");
    let ells: Vec<u32> = pr
        .list("ell")
        .iter()
        .map(|&l| u32::try_from(l).map_err(|_| ConfigError::field("ell", "too large")))
        .collect::<Result<_, _>>()?;
    let (ps, ns) = (pr.list("p"), pr.list("n"));
    for (i, &p) in ps.iter().enumerate() {
        let m = modulus(p)?;
        for &n in ns {
            let ws = WindowSums::new(start, n, &m)?;
            for &ell in &ells {
                let r = ws.moment_report(ell, cap)?;
                let profile = BoundProfile {
                    ell: Some(ell),
                    constant,
                    ..BoundProfile::new(BoundKind::Moment, p, n)
                };
                let (bv, _, _) = bound_row(bound_curves(&profile));
                run.table("moments.csv").row(row![
                    p,
                    start,
                    n,
                    ell,
                    r.exact,
                    r.exact_next,
                    fmt_f64(r.even_moment),
                    fmt_f64(r.odd_moment),
                    fmt_f64(r.relative_error()),
                    fmt_f64(r.holder_ceiling()),
                    bv
                ])?;
            }
        }
        run.progress.tick("moments", i + 1, ps.len());
    }
    Ok(())
}

/// The per-prime search the `solve` command drives.
enum Searcher {
    Wilson,
    TwoProduct,
    KTerm(Box<KTermSolver>),
    ProductPlus(Box<ProductPlusFactorialsSolver>),
    Cp(Box<CpSolver>),
}

impl Searcher {
    fn solve(&self, m: &PrimeModulus, lambda: Residue) -> Result<Result<Certificate, &'static str>, CliError> {
        let outcome = |o: Outcome| match o {
            Outcome::Found(c) => Ok(c),
            Outcome::NotFound(NotFound::Exhausted) => Err("exhausted"),
            Outcome::NotFound(NotFound::BudgetTruncated) => Err("budget_truncated"),
        };
        Ok(match self {
            Searcher::Wilson if lambda % 2 == 1 => Err("odd_target"),
            Searcher::Wilson => Ok(wilson_pair(m, lambda)?),
            Searcher::TwoProduct => Ok(two_product_rep(m, lambda)?),
            Searcher::KTerm(s) => outcome(s.solve(lambda)),
            Searcher::ProductPlus(s) => outcome(s.solve(lambda)),
            Searcher::Cp(s) => s.solve(lambda).ok_or("exhausted"),
        })
    }
}

fn solve(pr: &Params, run: &mut Run) -> Result<(), CliError> {
    let shape = pr.choice("shape");
    let all = matches!(pr.get("lambda"), Some(Value::All));
    let k = u32::try_from(int(pr, "k")).map_err(|_| ConfigError::field("k", "too large"))?;
    let (c, budget) = (int(pr, "c"), u128::from(int(pr, "budget")));
    open(pr, run, "solve.csv")?;
    if all {
        open(pr, run, "coverage.csv")?;
    }
    let mut certs = run.create_file("certificates.txt")?;
    let ps = pr.list("p");
    for (i, &p) in ps.iter().enumerate() {
        let m = modulus(p)?;
        let top = if shape == "cp_form" { p } else { p - 1 };
        let bound = pr.int("m").map_or(top, |b| b.min(top));
        let (searcher, coverage_shape) = match shape {
            "wilson_pair" => (Searcher::Wilson, None),
            "two_product" => (Searcher::TwoProduct, Some(CoverageShape::TwoProduct)),
            "k_term_product" => (
                Searcher::KTerm(Box::new(KTermSolver::new(&m, k, bound, budget)?)),
                Some(CoverageShape::KTermProduct { k, bound }),
            ),
            "product_plus_factorials" => (
                Searcher::ProductPlus(Box::new(ProductPlusFactorialsSolver::new(&m, k, bound, budget)?)),
                Some(CoverageShape::ProductPlusFactorials { k, bound }),
            ),
            _ => (
                Searcher::Cp(Box::new(CpSolver::new(&m, bound, c)?)),
                Some(CoverageShape::CpForm { c, bound }),
            ),
        };
        let targets: Vec<Residue> = match pr.get("lambda") {
            Some(Value::Int(l)) if *l >= p => return Err(ConfigError::field("lambda", format!("{l} >= p = {p}")).into()),
            Some(Value::Int(l)) => vec![*l],
            _ => (0..p).collect(),
        };
        let (mut covered, mut truncated) = (0usize, false);
        for &lambda in &targets {
            let status = match searcher.solve(&m, lambda)? {
                Ok(cert) => {
                    if !verify_certificate(&cert)?.is_valid() {
                        return Err(CliError::Verification(format!(
                            "certificate for p = {p}, lambda = {lambda} fails re-verification"
                        )));
                    }
                    write_certificate(&mut certs, &cert)?;
                    writeln!(certs)?;
                    covered += 1;
                    "found"
                }
                Err(status) => {
                    truncated |= status == "budget_truncated";
                    status
                }
            };
            run.table("solve.csv").row(row![p, shape, k, bound, lambda, status])?;
        }
        if all {
            let expected = match coverage_shape {
                Some(cs) => coverage_report(&m, cs, DEFAULT_SOLVER_CAP)?.covered,
                None => wilson_set(&m).len(),
            };
            if !truncated && expected != covered {
                return Err(CliError::Verification(format!(
                    "p = {p}: solver covered {covered} residues, coverage report says {expected}"
                )));
            }
            let frac = covered as f64 / p as f64;
            run.table("coverage.csv")
                .row(row![p, shape, k, bound, covered, fmt_f64(frac), covered as u64 == p])?;
        }
        run.progress.tick("solve", i + 1, ps.len());
    }
    certs.flush()?;
    Ok(())
}

fn cp_search_cmd(pr: &Params, run: &mut Run) -> Result<(), CliError> {
    open(pr, run, "cp_search.csv")?;
    open(pr, run, "cp_misses.csv")?;
    let max_c = int(pr, "max_c");
    let ps = pr.list("p");
    for (i, &p) in ps.iter().enumerate() {
        let m = modulus(p)?;
        let bound = pr.int("m").map_or(p, |b| b.min(p));
        let res = cp_search(&m, bound, max_c)?;
        let verified = match res.c {
            Some(c) => {
                let solver = CpSolver::new(&m, bound, c)?;
                for lambda in 0..p {
                    let ok = match solver.solve(lambda) {
                        Some(cert) => verify_certificate(&cert)?.is_valid(),
                        None => false,
                    };
                    if !ok {
                        return Err(CliError::Verification(format!(
                            "p = {p}, c = {c}: no verified certificate for lambda = {lambda}"
                        )));
                    }
                }
                true
            }
            None => false,
        };
        run.table("cp_search.csv")
            .row(row![p, bound, res.c.unwrap_or(0), res.c.is_some(), res.misses.len(), verified])?;
        for (c, missed) in &res.misses {
            run.table("cp_misses.csv").row(row![p, c, missed])?;
        }
        run.progress.tick("cp-search", i + 1, ps.len());
    }
    Ok(())
}

fn wilson(pr: &Params, run: &mut Run) -> Result<(), CliError> {
    open(pr, run, "wilson.csv")?;
    let ps = pr.list("p");
    let mut bad = Vec::new();
    for (i, &p) in ps.iter().enumerate() {
        let w = wilson_check(&modulus(p)?)?;
        run.table("wilson.csv").row(row![p, w.checked, w.failures.len()])?;
        if let Some(&l) = w.failures.first() {
            bad.push((p, l));
        }
        run.progress.tick("wilson-check", i + 1, ps.len());
    }
    match bad.first() {
        Some((p, l)) => Err(CliError::Verification(format!(
            "Wilson identity fails at p = {p}, lambda = {l} ({} primes affected)",
            bad.len()
        ))),
        None => Ok(()),
    }
}

fn erdos(pr: &Params, run: &mut Run) -> Result<(), CliError> {
    open(pr, run, "erdos.csv")?;
    open(pr, run, "erdos_summary.csv")?;
    let cap = int(pr, "cap");
    let ps = pr.list("p");
    let mut fracs = Vec::with_capacity(ps.len());
    for (i, &p) in ps.iter().enumerate() {
        let s = erdos_stats(&modulus(p)?, cap)?;
        fracs.push(s.missing_fraction());
        run.table("erdos.csv")
            .row(row![p, s.distinct, s.missing, fmt_f64(s.missing_fraction())])?;
        run.progress.tick("erdos-stats", i + 1, ps.len());
    }
    let mean = fracs.iter().sum::<f64>() / fracs.len() as f64;
    let lo = fracs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = fracs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    run.table("erdos_summary.csv")
        .row(row![fracs.len(), fmt_f64(mean), fmt_f64(lo), fmt_f64(hi)])?;
    Ok(())
}

/// `size` distinct nonzero residues.
fn random_set(rng: &mut ChaCha8Rng, m: PrimeModulus, size: u64) -> ResidueSet {
    let mut s = ResidueSet::from_residues(m, []);
    while (s.len() as u64) < size {
        s.insert(rng.random_range(1..m.p()));
    }
    s
}

fn ruzsa(pr: &Params, run: &mut Run) -> Result<(), CliError> {
    open(pr, run, "ruzsa.csv")?;
    let mut rng = ChaCha8Rng::seed_from_u64(pr.seed().expect("seed checked"));
    let (trials, size) = (int(pr, "trials"), int(pr, "size"));
    let ps = pr.list("p");
    let mut failures = 0u64;
    for t in 0..trials {
        let p = ps[rng.random_range(0..ps.len())];
        if p < 3 {
            return Err(ConfigError::field("p", "needs primes >= 3").into());
        }
        let m = modulus(p)?;
        let top = size.min(p - 1);
        let draw = |rng: &mut ChaCha8Rng| {
            let n = rng.random_range(1..=top);
            random_set(rng, m, n)
        };
        let (x, y, z) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let r = ruzsa_check(&x, &y, &z)?;
        failures += u64::from(!r.holds);
        run.table("ruzsa.csv")
            .row(row![t, p, x.len(), y.len(), z.len(), r.quotient, r.xz, r.zy, r.holds])?;
        run.progress.tick("ruzsa-check", t as usize + 1, trials as usize);
    }
    if failures > 0 {
        return Err(CliError::Verification(format!("{failures} triples violate the triangle inequality")));
    }
    Ok(())
}

fn katz_shen(pr: &Params, run: &mut Run) -> Result<(), CliError> {
    open(pr, run, "katz_shen.csv")?;
    let mut rng = ChaCha8Rng::seed_from_u64(pr.seed().expect("seed checked"));
    let (trials, xs, bs, k) = (int(pr, "trials"), int(pr, "x_size"), int(pr, "b_size"), int(pr, "k"));
    let strategies: &[(SubsetStrategy, &str)] = match pr.choice("strategy") {
        "exhaustive" => &[(SubsetStrategy::Exhaustive, "exhaustive")],
        "greedy" => &[(SubsetStrategy::Greedy, "greedy")],
        _ => &[(SubsetStrategy::Exhaustive, "exhaustive"), (SubsetStrategy::Greedy, "greedy")],
    };
    let ps = pr.list("p");
    for t in 0..trials {
        let p = ps[rng.random_range(0..ps.len())];
        if xs.max(bs) >= p {
            return Err(ConfigError::field("x_size", format!("set sizes must stay below p = {p}")).into());
        }
        let m = modulus(p)?;
        let x = random_set(&mut rng, m, xs);
        let b: Vec<ResidueSet> = (0..k).map(|_| random_set(&mut rng, m, bs)).collect();
        for &(strat, name) in strategies {
            let r = katz_shen_ratio(&x, &b, strat)?;
            run.table("katz_shen.csv")
                .row(row![t, p, name, x.len(), r.subset.len(), r.product_len, fmt_f64(r.ratio)])?;
        }
        run.progress.tick("katz-shen", t as usize + 1, trials as usize);
    }
    Ok(())
}

fn cg(pr: &Params, run: &mut Run) -> Result<(), CliError> {
    let single = pr.int("s0");
    let file = if single.is_some() { "cg_count.csv" } else { "cg_max.csv" };
    open(pr, run, file)?;
    let ps = pr.list("p");
    for (i, &p) in ps.iter().enumerate() {
        let m = modulus(p)?;
        let x = pr.int("x").unwrap_or(p.isqrt());
        let y = pr.int("y").unwrap_or(p.isqrt());
        match single {
            Some(s0) => {
                let r = cg_count(&m, s0, x, y)?;
                run.table(file).row(row![p, r.s0, x, y, r.count, fmt_f64(r.ratio)])?;
            }
            None => {
                let mut best = cg_count(&m, 1, x, y)?;
                for s0 in 2..p {
                    let r = cg_count(&m, s0, x, y)?;
                    if r.count > best.count {
                        best = r;
                    }
                }
                run.table(file)
                    .row(row![p, x, y, best.count, fmt_f64(best.ratio), best.s0])?;
            }
        }
        run.progress.tick("cg-count", i + 1, ps.len());
    }
    Ok(())
}

fn bounds(pr: &Params, run: &mut Run) -> Result<(), CliError> {
    open(pr, run, "bounds.csv")?;
    let kind = BoundKind::from_name(pr.choice("profile")).expect("validated profile");
    let opt = |v: Option<u64>| v.map_or("na".to_owned(), |x| x.to_string());
    let ell = pr
        .int("ell")
        .map(|l| u32::try_from(l).map_err(|_| ConfigError::field("ell", "too large")))
        .transpose()?;
    for &p in pr.list("p") {
        for &n in pr.list("n") {
            let profile = BoundProfile {
                m: pr.int("m"),
                ell,
                set_len: pr.int("set_len"),
                constant: pr.float("constant"),
                cutoff: pr.float("cutoff"),
                ..BoundProfile::new(kind, p, n)
            };
            let (v, case, flag) = bound_row(bound_curves(&profile));
            run.table("bounds.csv").row(row![
                kind.name(),
                case,
                p,
                n,
                opt(pr.int("m")),
                opt(pr.int("ell")),
                opt(pr.int("set_len")),
                fmt_f64(profile.constant),
                v,
                flag
            ])?;
        }
    }
    Ok(())
}
