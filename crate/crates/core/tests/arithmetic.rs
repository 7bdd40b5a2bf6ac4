use faclab_core::modular::{is_prime, PhaseTable, PrimeModulus};
use proptest::prelude::*;

const PRIMES: [u64; 6] = [7, 10007, 1_000_003, 998_244_353, 4_294_967_311, 18_446_744_073_709_551_557];

fn naive_mul(a: u64, b: u64, p: u64) -> u64 {
    (u128::from(a) * u128::from(b) % u128::from(p)) as u64
}

proptest! {
    #[test]
    fn mul_commutes_and_associates(i in 0usize..PRIMES.len(), a: u64, b: u64, c: u64) {
        let m = PrimeModulus::new(PRIMES[i]).unwrap();
        let (a, b, c) = (m.reduce(a), m.reduce(b), m.reduce(c));
        prop_assert_eq!(m.mul(a, b), m.mul(b, a));
        prop_assert_eq!(m.mul(m.mul(a, b), c), m.mul(a, m.mul(b, c)));
        prop_assert_eq!(m.mul(a, b), naive_mul(a, b, m.p()));
    }

    #[test]
    fn inverse_roundtrip(i in 0usize..PRIMES.len(), a in 1u64..) {
        let m = PrimeModulus::new(PRIMES[i]).unwrap();
        let a = m.reduce(a);
        prop_assume!(a != 0);
        prop_assert_eq!(m.mul(a, m.inv(a).unwrap()), 1);
    }

    #[test]
    fn phase_is_a_character(i in 0usize..3, a: u64, b: u64) {
        let m = PrimeModulus::new(PRIMES[i]).unwrap();
        let (a, b) = (m.reduce(a), m.reduce(b));
        let lhs = m.unit_phase(m.add(a, b));
        let rhs = m.unit_phase(a) * m.unit_phase(b);
        prop_assert!((lhs - rhs).norm() < 1e-10);
        let t = PhaseTable::new(m);
        prop_assert_eq!(t.get(a), m.unit_phase(a));
    }

    #[test]
    fn pow_matches_repeated_mul(a in 1u64..10007, e in 0u64..200) {
        let m = PrimeModulus::new(10007).unwrap();
        let mut acc = 1;
        for _ in 0..e {
            acc = m.mul(acc, a);
        }
        prop_assert_eq!(m.pow(a, e), acc);
    }
}

#[test]
fn composite_moduli_are_rejected() {
    for n in [0, 1, 4, 561, 1_000_001, 3_215_031_751, u64::MAX] {
        assert!(!is_prime(n));
        assert!(PrimeModulus::new(n).is_err());
    }
}
