//! Exponential sums over factorials: `S(a) = Σ_{n=L+1}^{L+N} e_p(a·n!)`.
//!
//! The even moments `(1/p) Σ_a |S(a)|^{2ℓ}` equal the number `J_ℓ(L, N)` of
//! solutions to `n_1! + … + n_ℓ! ≡ n_{ℓ+1}! + … + n_{2ℓ}!`. That count is
//! computed exactly by bucketing ℓ-fold factorial sums, independently of any
//! floating-point evaluation, so the two sides check each other.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxBuildHasher;

use crate::factorial::{factorial_range, FactorialWindow, WindowOptions};
use crate::modular::{PhaseTable, PrimeModulus, Residue};
use crate::sets::{ResidueSet, DENSE_MODULUS_MAX};
use crate::sum::{ComplexSum, KahanSum};
use crate::{par, Error, Result, DEFAULT_PAIR_BUDGET};

/// Largest modulus for which a scan over every frequency is attempted.
pub const DEFAULT_SCAN_CAP: u64 = 1 << 22;

const FREQ_CHUNK: u64 = 1 << 12;

/// One evaluated sum at frequency `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumValue {
    pub a: Residue,
    pub value: Complex64,
    /// Number of unit terms summed.
    pub terms: u64,
}

impl SumValue {
    pub fn magnitude(&self) -> f64 {
        self.value.norm()
    }
}

/// Factorial window with its distinct values, multiplicities and phases.
#[derive(Debug, Clone)]
pub struct WindowSums {
    window: FactorialWindow,
    /// `(value, multiplicity)` sorted by value.
    histogram: Vec<(Residue, u64)>,
    phases: PhaseTable,
}

impl WindowSums {
    /// Window `n = L+1 ..= L+N`, which must stay below `p`.
    pub fn new(start: u64, len: u64, m: &PrimeModulus) -> Result<Self> {
        let window = factorial_range(start, len, m, None, &WindowOptions::default())?;
        let mut values = window.values().to_vec();
        values.sort_unstable();
        let mut histogram: Vec<(Residue, u64)> = Vec::new();
        for v in values {
            match histogram.last_mut() {
                Some((last, c)) if *last == v => *c += 1,
                _ => histogram.push((v, 1)),
            }
        }
        Ok(Self {
            window,
            histogram,
            phases: PhaseTable::new(*m),
        })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.window.modulus()
    }

    pub fn window(&self) -> &FactorialWindow {
        &self.window
    }

    pub fn len(&self) -> u64 {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    /// Distinct factorial values and their multiplicities in the window.
    pub fn histogram(&self) -> &[(Residue, u64)] {
        &self.histogram
    }

    fn raw_single(&self, a: Residue) -> Complex64 {
        let m = self.modulus();
        let mut acc = ComplexSum::default();
        for &(v, mult) in &self.histogram {
            acc.add_scaled(self.phases.get(m.mul(a, v)), mult as f64);
        }
        acc.value()
    }

    /// `Σ_n e_p(a·n!)`.
    pub fn single(&self, a: Residue) -> SumValue {
        let a = self.modulus().reduce(a);
        SumValue {
            a,
            value: self.raw_single(a),
            terms: self.len(),
        }
    }

    /// `Σ_n Σ_{x∈A} e_p(a·n!·x)`.
    pub fn double(&self, a: Residue, set: &ResidueSet) -> Result<SumValue> {
        let m = self.modulus();
        if set.modulus() != m {
            return Err(Error::ModulusMismatch {
                left: m.p(),
                right: set.modulus().p(),
            });
        }
        if set.is_empty() {
            return Err(Error::InvalidParameter {
                name: "A",
                reason: "set must be nonempty",
            });
        }
        let a = m.reduce(a);
        let xs = set.to_sorted_vec();
        let mut acc = ComplexSum::default();
        for &(v, mult) in &self.histogram {
            let t = m.mul(a, v);
            let mut inner = ComplexSum::default();
            for &x in &xs {
                inner.add(self.phases.get(m.mul(t, x)));
            }
            acc.add_scaled(inner.value(), mult as f64);
        }
        Ok(SumValue {
            a,
            value: acc.value(),
            terms: self.len() * xs.len() as u64,
        })
    }

    fn check_cap(&self, cap: u64, what: &'static str) -> Result<()> {
        let p = self.modulus().p();
        if p > cap {
            return Err(Error::CapExceeded { what, p, cap });
        }
        Ok(())
    }

    /// Largest `|S(a)|` over nonzero frequencies.
    pub fn max_single(&self, strategy: MaxStrategy, cap: u64) -> Result<SumValue> {
        let p = self.modulus().p();
        if p == 2 {
            return Ok(self.single(1));
        }
        let best_of = |cands: &mut dyn Iterator<Item = Residue>| {
            let mut best: Option<(f64, SumValue)> = None;
            for a in cands {
                let s = self.single(a);
                let mag = s.value.norm_sqr();
                if best.is_none_or(|(b, _)| mag > b) {
                    best = Some((mag, s));
                }
            }
            best
        };
        match strategy {
            MaxStrategy::Full => {
                self.check_cap(cap, "full frequency scan")?;
                let parts = par::chunks(1..p, FREQ_CHUNK);
                let bests = par::map_ordered(parts, |r| best_of(&mut r.into_iter()));
                let mut best: Option<(f64, SumValue)> = None;
                for (mag, s) in bests.into_iter().flatten() {
                    if best.is_none_or(|(b, _)| mag > b) {
                        best = Some((mag, s));
                    }
                }
                Ok(best.unwrap().1)
            }
            MaxStrategy::Sampled { count, seed } => {
                if count == 0 {
                    return Err(Error::InvalidParameter {
                        name: "k",
                        reason: "sampled maximum needs at least one frequency",
                    });
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let freqs: Vec<Residue> = (0..count).map(|_| rng.random_range(1..p)).collect();
                Ok(best_of(&mut freqs.into_iter()).unwrap().1)
            }
        }
    }

    /// `(1/p) Σ_{a=0}^{p-1} |S(a)|^k` for each requested `k`, with
    /// compensated accumulation merged in frequency order.
    pub fn power_moments(&self, exponents: &[u32], cap: u64) -> Result<Vec<f64>> {
        self.check_cap(cap, "moment scan")?;
        let p = self.modulus().p();
        let parts = par::chunks(0..p, FREQ_CHUNK);
        let partial = par::map_ordered(parts, |r| {
            let mut sums = vec![KahanSum::default(); exponents.len()];
            for a in r {
                let sq = self.raw_single(a).norm_sqr();
                let norm = libm::sqrt(sq);
                for (acc, &k) in sums.iter_mut().zip(exponents) {
                    let even = powi(sq, k / 2);
                    acc.add(if k % 2 == 1 { even * norm } else { even });
                }
            }
            sums
        });
        let mut totals = vec![KahanSum::default(); exponents.len()];
        for chunk in &partial {
            for (t, c) in totals.iter_mut().zip(chunk) {
                t.merge(c);
            }
        }
        Ok(totals.iter().map(|t| t.value() / p as f64).collect())
    }

    /// Exact `J_ℓ` for this window under the default budget.
    pub fn moment_count(&self, ell: u32) -> Result<MomentCount> {
        self.moment_count_within(ell, DEFAULT_PAIR_BUDGET)
    }

    /// Exact `J_ℓ = Σ_s c(s)²`, where `c(s)` counts ℓ-tuples of window indices
    /// whose factorial sum is `s`. `c` is built by ℓ-1 rounds of convolution
    /// with the value histogram.
    pub fn moment_count_within(&self, ell: u32, budget: u128) -> Result<MomentCount> {
        if ell == 0 {
            return Err(Error::InvalidParameter {
                name: "ell",
                reason: "half-degree must be at least 1",
            });
        }
        let m = self.modulus();
        let p = u128::from(m.p());
        let distinct = self.histogram.len() as u128;
        let mut required: u128 = 0;
        let mut support: u128 = distinct;
        for _ in 1..ell {
            required = required.saturating_add(support.saturating_mul(distinct));
            support = support.saturating_mul(distinct).min(p);
        }
        required = required.saturating_add(support);
        if required > budget {
            return Err(Error::BudgetExceeded {
                what: "moment count",
                required,
                budget,
            });
        }
        let n = u128::from(self.len());
        if n.checked_pow(ell).is_none_or(|t| t > u128::from(u64::MAX)) {
            return Err(Error::InvalidParameter {
                name: "ell",
                reason: "N^ell exceeds the 64-bit tuple counter",
            });
        }

        let count = if m.p() <= DENSE_MODULUS_MAX {
            let mut c = vec![0u64; m.p() as usize];
            for &(v, mult) in &self.histogram {
                c[v as usize] = mult;
            }
            for _ in 1..ell {
                let mut next = vec![0u64; m.p() as usize];
                for (s, &cs) in c.iter().enumerate().filter(|(_, &cs)| cs != 0) {
                    for &(v, mult) in &self.histogram {
                        next[m.add(s as u64, v) as usize] += cs * mult;
                    }
                }
                c = next;
            }
            c.iter().map(|&x| u128::from(x) * u128::from(x)).sum()
        } else {
            let mut c: HashMap<u64, u64, FxBuildHasher> =
                self.histogram.iter().copied().collect();
            for _ in 1..ell {
                let mut next: HashMap<u64, u64, FxBuildHasher> = HashMap::default();
                for (&s, &cs) in &c {
                    for &(v, mult) in &self.histogram {
                        *next.entry(m.add(s, v)).or_insert(0) += cs * mult;
                    }
                }
                c = next;
            }
            c.values().map(|&x| u128::from(x) * u128::from(x)).sum()
        };
        Ok(MomentCount {
            ell,
            start: self.window.start(),
            len: self.len(),
            count,
        })
    }

    /// Exact counts next to the frequency-side moments for half-degree `ℓ`.
    pub fn moment_report(&self, ell: u32, cap: u64) -> Result<MomentReport> {
        let exact = self.moment_count(ell)?.count;
        let exact_next = self.moment_count(ell + 1)?.count;
        let scanned = self.power_moments(&[2 * ell, 2 * ell + 1], cap)?;
        Ok(MomentReport {
            ell,
            exact,
            exact_next,
            even_moment: scanned[0],
            odd_moment: scanned[1],
        })
    }
}

fn powi(x: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..k {
        acc *= x;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaxStrategy {
    /// Every frequency `a ∈ [1, p-1]`; exact maximum.
    Full,
    /// Best of `count` uniform frequencies; a lower bound on the maximum.
    Sampled { count: u64, seed: u64 },
}

/// Exact `J_ℓ(L, N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MomentCount {
    pub ell: u32,
    pub start: u64,
    pub len: u64,
    pub count: u128,
}

impl MomentCount {
    /// The trivial upper bound `N^{2ℓ}`.
    pub fn trivial_upper(&self) -> u128 {
        u128::from(self.len).saturating_pow(2 * self.ell)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub ell: u32,
    /// `J_ℓ`.
    pub exact: u128,
    /// `J_{ℓ+1}`.
    pub exact_next: u128,
    /// `(1/p) Σ_a |S(a)|^{2ℓ}`.
    pub even_moment: f64,
    /// `(1/p) Σ_a |S(a)|^{2ℓ+1}`.
    pub odd_moment: f64,
}

impl MomentReport {
    pub fn relative_error(&self) -> f64 {
        let j = self.exact as f64;
        (self.even_moment - j).abs() / j
    }

    /// `sqrt(J_ℓ·J_{ℓ+1})`, the Cauchy–Schwarz ceiling on the odd moment.
    pub fn holder_ceiling(&self) -> f64 {
        libm::sqrt(self.exact as f64 * self.exact_next as f64)
    }
}

pub fn single_sum(a: Residue, start: u64, len: u64, m: &PrimeModulus) -> Result<SumValue> {
    Ok(WindowSums::new(start, len, m)?.single(a))
}

pub fn double_sum(a: Residue, start: u64, len: u64, set: &ResidueSet) -> Result<SumValue> {
    WindowSums::new(start, len, &set.modulus())?.double(a, set)
}

pub fn max_single(start: u64, len: u64, m: &PrimeModulus, strategy: MaxStrategy) -> Result<SumValue> {
    WindowSums::new(start, len, m)?.max_single(strategy, DEFAULT_SCAN_CAP)
}

pub fn moment_count(start: u64, len: u64, m: &PrimeModulus, ell: u32) -> Result<MomentCount> {
    WindowSums::new(start, len, m)?.moment_count(ell)
}

/// `|(1/p) Σ_a |S(a)|^{2ℓ} - J_ℓ| / J_ℓ`.
pub fn moment_identity_check(start: u64, len: u64, m: &PrimeModulus, ell: u32) -> Result<f64> {
    let ws = WindowSums::new(start, len, m)?;
    let exact = ws.moment_count(ell)?.count as f64;
    let scanned = ws.power_moments(&[2 * ell], DEFAULT_SCAN_CAP)?[0];
    Ok((scanned - exact).abs() / exact)
}
