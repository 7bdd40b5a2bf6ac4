use faclab_core::factorial::{factorial_range, factorial_range_sequential, WindowOptions};
use faclab_core::modular::{next_prime, PrimeModulus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn blocked_matches_sequential_on_random_windows() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let p = next_prime(rng.random_range(3..200_000)).unwrap();
        let m = PrimeModulus::new(p).unwrap();
        let start = rng.random_range(0..p - 1);
        let len = rng.random_range(1..=(p - 1 - start).min(5000));
        let opts = WindowOptions {
            blocks: rng.random_range(1..40),
            checkpoint_stride: rng.random_range(1..600),
            ..Default::default()
        };
        let w = factorial_range(start, len, &m, None, &opts).unwrap();
        assert_eq!(w.values(), factorial_range_sequential(start, len, &m).as_slice(), "p={p} L={start} N={len}");
        assert_eq!(w.recurrence_violation(), None);
    }
}

#[test]
fn resume_from_every_checkpoint() {
    let m = PrimeModulus::new(7919).unwrap();
    let opts = WindowOptions {
        checkpoint_stride: 500,
        ..Default::default()
    };
    let full = factorial_range(0, 7918, &m, None, &opts).unwrap();
    for cp in full.checkpoints() {
        let rest = 7918 - cp.n;
        if rest == 0 {
            continue;
        }
        let tail = factorial_range(cp.n, rest, &m, Some(cp), &opts).unwrap();
        assert_eq!(tail.values(), &full.values()[cp.n as usize..]);
    }
}

#[test]
fn zero_tail_only_on_request() {
    let m = PrimeModulus::new(101).unwrap();
    assert!(factorial_range(90, 20, &m, None, &WindowOptions::default()).is_err());
    let opts = WindowOptions {
        allow_zero_tail: true,
        ..Default::default()
    };
    let w = factorial_range(90, 20, &m, None, &opts).unwrap();
    assert!(w.values()[10..].iter().all(|&v| v == 0));
    assert_ne!(w.values()[9], 0);
}
