use faclab_core::combinatorics::{
    bound_curves, cg_count, erdos_stats, katz_shen_ratio, BoundKind, BoundOutcome, BoundProfile, SubsetStrategy,
};
use faclab_core::modular::{primes_in, PrimeModulus};
use faclab_core::sets::ResidueSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

#[test]
fn cg_count_is_symmetric() {
    for p in primes_in(3, 200) {
        let m = PrimeModulus::new(p).unwrap();
        for s0 in 1..p {
            let inv = m.inv(s0).unwrap();
            let boxes = [(1, 1), (3, 7), (10, 4), (p - 1, 2), (p / 2, p / 3 + 1)];
            for (x, y) in boxes.into_iter().filter(|&(x, y)| x < p && y < p) {
                let a = cg_count(&m, s0, x, y).unwrap().count;
                let b = cg_count(&m, inv, y, x).unwrap().count;
                assert_eq!(a, b, "p={p} s0={s0} X={x} Y={y}");
            }
        }
    }
}

#[test]
fn cg_count_matches_brute_force() {
    for p in primes_in(3, 100) {
        let m = PrimeModulus::new(p).unwrap();
        for s0 in 0..p {
            for side in 1..=14.min(p - 1) {
                let mut n = 0;
                for x in 1..=side {
                    for y in 1..=side {
                        n += u64::from((x + p * p - s0 * y % p) % p == 0 && gcd(x, y) == 1);
                    }
                }
                assert_eq!(cg_count(&m, s0, side, side).unwrap().count, n);
            }
        }
    }
}

#[test]
fn cg_max_ratio_fixture() {
    let fixture = include_str!("data/cg_max.txt");
    let mut seen = 0;
    for line in fixture.lines().filter(|l| !l.starts_with('#')) {
        let mut it = line.split_whitespace().map(|t| t.parse::<u64>().unwrap());
        let (p, want) = (it.next().unwrap(), it.next().unwrap());
        let m = PrimeModulus::new(p).unwrap();
        let side = p.isqrt();
        let reports: Vec<_> = (1..p).map(|s0| cg_count(&m, s0, side, side).unwrap()).collect();
        assert_eq!(reports.iter().map(|r| r.count).max().unwrap(), want, "p={p}");
        let worst = reports.iter().map(|r| r.ratio).fold(0.0, f64::max);
        assert!(worst <= want as f64 / (1.0 + (side * side) as f64 / p as f64) + 1e-12);
        seen += 1;
    }
    assert_eq!(seen, primes_in(5, 2000).count());
}

#[test]
fn exhaustive_never_loses_to_greedy() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let m = PrimeModulus::new(101).unwrap();
    for _ in 0..30 {
        let mut draw = |n: usize| {
            let mut s = ResidueSet::from_residues(m, []);
            while s.len() < n {
                s.insert(rng.random_range(1..101));
            }
            s
        };
        let x = draw(8);
        let bs = [draw(4), draw(4)];
        let ex = katz_shen_ratio(&x, &bs, SubsetStrategy::Exhaustive).unwrap();
        let gr = katz_shen_ratio(&x, &bs, SubsetStrategy::Greedy).unwrap();
        assert!(ex.ratio <= gr.ratio);
        assert!(ex.subset.len() * 2 > 8 && gr.subset.len() * 2 > 8);
    }
}

#[test]
fn erdos_fraction_near_one_over_e() {
    let m = PrimeModulus::new(10007).unwrap();
    let s = erdos_stats(&m, 1 << 20).unwrap();
    assert!((0.33..=0.41).contains(&s.missing_fraction()), "{}", s.missing_fraction());
}

fn grid() -> Vec<BoundProfile> {
    let mut out = Vec::new();
    for kind in BoundKind::ALL {
        for p in [10_007u64, 1_000_003, 1_000_000_007, 10_000_000_000_037] {
            for e in 1..40 {
                let n = ((p as f64).powf(e as f64 / 40.0)) as u64;
                let mut pr = BoundProfile::new(kind, p, n.max(2));
                pr.m = Some((n / 3).max(1));
                pr.ell = Some(2);
                pr.set_len = Some(n.max(1));
                out.push(pr);
            }
        }
    }
    out
}

#[test]
fn bounds_monotone_in_constant() {
    for pr in grid() {
        let mut hi = pr;
        hi.constant = 2.5;
        match (bound_curves(&pr), bound_curves(&hi)) {
            (BoundOutcome::Value(a), BoundOutcome::Value(b)) => {
                assert!(b.value >= a.value);
                assert_eq!(a.case, b.case);
            }
            (BoundOutcome::OutOfRegime(_), BoundOutcome::OutOfRegime(_)) => {}
            other => panic!("regime changed with the constant: {other:?}"),
        }
    }
}

#[test]
fn bounds_continuous_within_a_case() {
    // with N >= 10^10 a unit step is a relative perturbation below 1e-10
    let mut checked = 0;
    for kind in BoundKind::ALL {
        for p in [10u64.pow(18) + 9, 18_446_744_073_709_551_557] {
            for e in 22..40 {
                let n = (p as f64).powf(e as f64 / 40.0) as u64;
                let mut pr = BoundProfile::new(kind, p, n);
                pr.m = Some(n / 3);
                pr.ell = Some(2);
                pr.set_len = Some(n / 2);
                let mut next = pr;
                next.n += 1;
                let (Some(a), Some(b)) = (bound_curves(&pr).value(), bound_curves(&next).value()) else {
                    continue;
                };
                if a.case != b.case {
                    continue;
                }
                let rel = (b.value - a.value).abs() / a.value;
                assert!(rel <= 1e-9, "{kind:?} p={p} N={n} rel={rel}");
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}
