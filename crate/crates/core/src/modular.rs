//! Residue arithmetic modulo a verified prime.
//!
//! Residues are plain `u64` values in `[0, p)`. All products go through a
//! double-width intermediate, so every operation is exact on the whole 64-bit
//! range; moduli below 2^32 take a single-width fast path instead.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::{Error, Result};

/// A residue modulo some [`PrimeModulus`], always reduced into `[0, p)`.
pub type Residue = u64;

/// Largest modulus for which [`PhaseTable`] materialises the p-th roots.
pub const PHASE_TABLE_MAX: u64 = 1 << 20;

/// A prime `p` together with cached reduction data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeModulus {
    p: u64,
    narrow: bool,
}

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self {
            p,
            narrow: p <= u64::from(u32::MAX),
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> Residue {
        x % self.p
    }

    #[inline]
    pub fn add(&self, a: Residue, b: Residue) -> Residue {
        let (s, carry) = a.overflowing_add(b);
        if carry || s >= self.p {
            s.wrapping_sub(self.p)
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: Residue, b: Residue) -> Residue {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    #[inline]
    pub fn neg(&self, a: Residue) -> Residue {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// `a·b mod p`.
    #[inline]
    pub fn mul(&self, a: Residue, b: Residue) -> Residue {
        if self.narrow {
            (a * b) % self.p
        } else {
            ((u128::from(a) * u128::from(b)) % u128::from(self.p)) as u64
        }
    }

    pub fn pow(&self, base: Residue, mut exp: u64) -> Residue {
        let mut acc = 1 % self.p;
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: Residue) -> Result<Residue> {
        let a = self.reduce(a);
        if a == 0 {
            return Err(Error::NotInvertible);
        }
        let (mut r0, mut r1) = (i128::from(self.p), i128::from(a));
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(t0.rem_euclid(i128::from(self.p)) as u64)
    }

    /// `exp(2πi·t/p)` evaluated directly.
    pub fn unit_phase(&self, t: Residue) -> Complex64 {
        phase_of(self.reduce(t), self.p)
    }
}

fn phase_of(t: u64, p: u64) -> Complex64 {
    // Fold into (-p/2, p/2] so the angle stays small and symmetric.
    let signed = if t > p / 2 {
        -((p - t) as f64)
    } else {
        t as f64
    };
    let theta = TAU * (signed / p as f64);
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

/// Unit phases `e_p(t)` for one modulus, tabulated when `p` is small enough.
///
/// Table entries are produced by the same routine as direct evaluation, so
/// tabulated and untabulated lookups agree bit for bit.
#[derive(Debug, Clone)]
pub struct PhaseTable {
    modulus: PrimeModulus,
    table: Option<Vec<Complex64>>,
}

impl PhaseTable {
    pub fn new(modulus: PrimeModulus) -> Self {
        let table = (modulus.p() <= PHASE_TABLE_MAX)
            .then(|| (0..modulus.p()).map(|t| phase_of(t, modulus.p())).collect());
        Self { modulus, table }
    }

    /// A table-free evaluator, mainly for cross-checks.
    pub fn direct(modulus: PrimeModulus) -> Self {
        Self {
            modulus,
            table: None,
        }
    }

    pub fn is_tabulated(&self) -> bool {
        self.table.is_some()
    }

    #[inline]
    pub fn get(&self, t: Residue) -> Complex64 {
        match &self.table {
            Some(tab) => tab[t as usize],
            None => phase_of(t, self.modulus.p()),
        }
    }
}

fn mul_mod_wide(a: u64, b: u64, n: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(n)) as u64
}

fn pow_mod_wide(mut b: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    b %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_wide(acc, b, n);
        }
        b = mul_mod_wide(b, b, n);
        e >>= 1;
    }
    acc
}

// Strong-probable-prime bases that certify every n < 2^64.
const MR_BASES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];
const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test, exact on the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &SMALL_PRIMES {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    if n < 37 * 37 {
        return true;
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for &base in &MR_BASES {
        let a = base % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod_wide(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_wide(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`, or `None` past the largest 64-bit prime.
pub fn next_prime(n: u64) -> Option<u64> {
    let mut c = n.max(2);
    loop {
        if is_prime(c) {
            return Some(c);
        }
        c = c.checked_add(1)?;
    }
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    let mut next = next_prime(lo);
    core::iter::from_fn(move || {
        let p = next.filter(|&p| p <= hi)?;
        next = p.checked_add(1).and_then(next_prime);
        Some(p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn mul_examples() {
        let seven = m(7);
        assert_eq!(seven.mul(0, 5), 0);
        assert_eq!(seven.mul(3, 5), 1);
        assert_eq!(seven.mul(6, 6), 1);
        let big = m(18446744073709551557); // largest 64-bit prime
        assert_eq!(big.mul(big.p() - 1, big.p() - 1), 1);
    }

    #[test]
    fn inv_examples() {
        assert_eq!(m(7).inv(1).unwrap(), 1);
        assert_eq!(m(7).inv(2).unwrap(), 4);
        assert_eq!(m(101).inv(100).unwrap(), 100);
        assert_eq!(m(7).inv(0), Err(Error::NotInvertible));
        assert_eq!(m(7).inv(14), Err(Error::NotInvertible));
    }

    #[test]
    fn inverse_exhaustive_small_primes() {
        for p in primes_in(2, 10_000) {
            let md = m(p);
            for a in 1..p {
                assert_eq!(md.mul(a, md.inv(a).unwrap()), 1, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(2));
        assert!(!is_prime(561));
        assert!(is_prime(1_000_003));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        // strong pseudoprime to bases 2..=37
        assert!(!is_prime(3_825_123_056_546_413_051));
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(u64::MAX));
        assert_eq!(PrimeModulus::new(561), Err(Error::NotPrime(561)));
    }

    #[test]
    fn primality_matches_trial_division_to_a_million() {
        let mut sieve = alloc::vec![true; 1_000_001];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= 1_000_000 {
            if sieve[i] {
                let mut j = i * i;
                while j <= 1_000_000 {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        for n in 0..=1_000_000u64 {
            assert_eq!(is_prime(n), sieve[n as usize], "n={n}");
        }
        for n in [999_983u64, 1_000_003, 1_000_033, 104_723 * 104_729] {
            assert_eq!(is_prime(n), trial_division(n));
        }
    }

    #[test]
    fn prime_iteration() {
        let v: Vec<u64> = primes_in(10, 30).collect();
        assert_eq!(v, [11, 13, 17, 19, 23, 29]);
        assert_eq!(next_prime(0), Some(2));
        assert_eq!(next_prime(u64::MAX - 81), Some(u64::MAX - 58));
        assert_eq!(next_prime(u64::MAX - 57), None);
    }

    #[test]
    fn phase_examples() {
        let seven = m(7);
        assert_eq!(seven.unit_phase(0), Complex64::new(1.0, 0.0));
        assert_eq!(seven.unit_phase(3), seven.unit_phase(10));
        let two = m(2).unit_phase(1);
        assert!((two.re + 1.0).abs() < 1e-15 && two.im.abs() < 1e-15);
    }

    #[test]
    fn table_and_direct_agree_bitwise() {
        let md = m(1009);
        let (tab, direct) = (PhaseTable::new(md), PhaseTable::direct(md));
        assert!(tab.is_tabulated());
        for t in 0..md.p() {
            assert_eq!(tab.get(t), direct.get(t));
            assert!((tab.get(t).norm() - 1.0).abs() < 1e-12);
        }
    }
}
