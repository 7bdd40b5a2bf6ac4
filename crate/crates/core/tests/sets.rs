use std::collections::{BTreeSet, HashMap};

use faclab_core::factorial::factorial_mod;
use faclab_core::modular::{next_prime, PrimeModulus};
use faclab_core::sets::{
    build_factorial_set, estimate_product_cardinality, multiplicative_energy, product_set, quotient_set, sumset,
    EnergyLeft, Representation, ResidueSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_set(rng: &mut ChaCha8Rng, m: PrimeModulus, size: usize, repr: Representation) -> ResidueSet {
    let xs: Vec<u64> = (0..size).map(|_| rng.random_range(1..m.p())).collect();
    ResidueSet::from_residues_in(m, repr, xs)
}

#[test]
fn dense_and_sparse_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let m = PrimeModulus::new(next_prime(rng.random_range(3..20_000)).unwrap()).unwrap();
        let seed: u64 = rng.random();
        let (na, nb) = (rng.random_range(1..60), rng.random_range(1..60));
        let mut r1 = ChaCha8Rng::seed_from_u64(seed);
        let mut r2 = ChaCha8Rng::seed_from_u64(seed);
        let (ad, bd) = (
            random_set(&mut r1, m, na, Representation::Dense),
            random_set(&mut r1, m, nb, Representation::Dense),
        );
        let (as_, bs) = (
            random_set(&mut r2, m, na, Representation::Sparse),
            random_set(&mut r2, m, nb, Representation::Sparse),
        );
        assert_eq!(ad, as_);
        assert_eq!(product_set(&ad, &bd).unwrap(), product_set(&as_, &bs).unwrap());
        assert_eq!(quotient_set(&ad, &bd).unwrap(), quotient_set(&as_, &bs).unwrap());
        assert_eq!(sumset(&ad, &bd).unwrap(), sumset(&as_, &bs).unwrap());
        assert_eq!(
            multiplicative_energy(EnergyLeft::Set(&ad), &bd).unwrap().count,
            multiplicative_energy(EnergyLeft::Set(&as_), &bs).unwrap().count
        );
    }
}

#[test]
fn product_sets_match_naive_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let p = next_prime(rng.random_range(3..5000)).unwrap();
        let m = PrimeModulus::new(p).unwrap();
        let a = random_set(&mut rng, m, 40, Representation::Dense);
        let b = random_set(&mut rng, m, 40, Representation::Sparse);
        let mut prod = BTreeSet::new();
        let mut quot = BTreeSet::new();
        for x in a.iter() {
            for y in b.iter() {
                prod.insert(x * y % p);
                quot.insert(x * m.pow(y, p - 2) % p);
            }
        }
        assert_eq!(product_set(&a, &b).unwrap().to_sorted_vec(), prod.into_iter().collect::<Vec<_>>());
        assert_eq!(quotient_set(&a, &b).unwrap().to_sorted_vec(), quot.into_iter().collect::<Vec<_>>());
    }
}

fn brute_energy(s: &[u64], t: &[u64], p: u64) -> u128 {
    let mut n = 0u128;
    for &s1 in s {
        for &m1 in t {
            for &s2 in s {
                for &m2 in t {
                    n += u128::from(s1 * m1 % p == s2 * m2 % p);
                }
            }
        }
    }
    n
}

#[test]
fn energy_matches_quadruple_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let p = next_prime(rng.random_range(40..3000)).unwrap();
        let m = PrimeModulus::new(p).unwrap();
        let (ns, nt) = (rng.random_range(1..=30), rng.random_range(1..=30));
        let s = random_set(&mut rng, m, ns, Representation::Dense);
        let t = random_set(&mut rng, m, nt, Representation::Sparse);
        let got = multiplicative_energy(EnergyLeft::Set(&s), &t).unwrap();
        assert_eq!(got.count, brute_energy(&s.to_sorted_vec(), &t.to_sorted_vec(), p));

        let n = rng.random_range(1..30.min(p));
        let interval: Vec<u64> = (1..=n).collect();
        let primes: Vec<u64> = interval.iter().copied().filter(|&x| faclab_core::is_prime(x)).collect();
        let tv = t.to_sorted_vec();
        assert_eq!(multiplicative_energy(EnergyLeft::Interval(n), &t).unwrap().count, brute_energy(&interval, &tv, p));
        assert_eq!(multiplicative_energy(EnergyLeft::PrimesUpTo(n), &t).unwrap().count, brute_energy(&primes, &tv, p));
    }
}

#[test]
fn estimator_tracks_exact_cardinality() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..20 {
        let p = next_prime(rng.random_range(5000..100_000)).unwrap();
        let m = PrimeModulus::new(p).unwrap();
        let a = build_factorial_set(&m, rng.random_range(100..400), false).unwrap();
        let nb = rng.random_range(100..400);
        let b = random_set(&mut rng, m, nb, Representation::Sparse);
        let exact = product_set(&a, &b).unwrap().len() as f64;
        let est = estimate_product_cardinality(&a, &b, 4000, i).unwrap();
        assert!(!est.exact);
        assert!((est.estimate - exact).abs() <= 0.1 * exact, "p={p} est={} exact={exact}", est.estimate);
        let again = estimate_product_cardinality(&a, &b, 4000, i).unwrap();
        assert_eq!(est, again);
    }
}

#[test]
fn factorial_set_matches_definition() {
    for p in [7u64, 101, 1009] {
        let m = PrimeModulus::new(p).unwrap();
        for n in [1, 2, p / 2, p - 1] {
            let want: BTreeSet<u64> = (1..=n).map(|k| factorial_mod(k, &m)).collect();
            let got = build_factorial_set(&m, n, false).unwrap();
            assert_eq!(got.to_sorted_vec(), want.into_iter().collect::<Vec<_>>());
        }
    }
}

#[test]
fn product_multiplicities_sum_to_pairs() {
    let m = PrimeModulus::new(1009).unwrap();
    let a = build_factorial_set(&m, 200, false).unwrap();
    let mut counts: HashMap<u64, u128> = HashMap::new();
    for x in a.iter() {
        for y in a.iter() {
            *counts.entry(x * y % 1009).or_default() += 1;
        }
    }
    let energy = multiplicative_energy(EnergyLeft::Set(&a), &a).unwrap();
    assert_eq!(energy.count, counts.values().map(|c| c * c).sum::<u128>());
    assert_eq!(product_set(&a, &a).unwrap().len(), counts.len());
}

#[test]
fn estimator_on_a300_mod_10007() {
    let p = 10007u64;
    let m = PrimeModulus::new(p).unwrap();
    let a = build_factorial_set(&m, 300, false).unwrap();
    let vals = a.to_sorted_vec();
    let exact: BTreeSet<u64> = vals.iter().flat_map(|x| vals.iter().map(move |y| x * y % p)).collect();
    let exact = exact.len() as f64;
    for seed in 0..5 {
        let est = estimate_product_cardinality(&a, &a, 20_000, seed).unwrap();
        assert!((est.estimate - exact).abs() <= 0.1 * exact, "seed {seed}: {} vs {exact}", est.estimate);
        assert!(est.low <= est.estimate && est.estimate <= est.high);
    }
}
