//! Exact checkers for the additive-combinatorics inequalities used around
//! factorial product sets, and evaluators for the asymptotic bound curves.
//!
//! Bound curves carry a caller-supplied constant (default 1) in place of the
//! unknown implied constant. Exponents written `o(1)` are evaluated at zero
//! and flagged with `asymptotic_placeholder`. `log` is the natural logarithm.

use alloc::vec::Vec;

use crate::bitset::Bitset;
use crate::factorial::{factorial_range, WindowOptions};
use crate::modular::{PrimeModulus, Residue};
use crate::sets::{product_set, quotient_set, ResidueSet};
use crate::{Error, Result};

fn nonzero(sets: &[&ResidueSet], what: &'static str) -> Result<()> {
    let m = sets[0].modulus();
    for s in sets {
        if s.modulus() != m {
            return Err(Error::ModulusMismatch {
                left: m.p(),
                right: s.modulus().p(),
            });
        }
        if s.contains_zero() {
            return Err(Error::ZeroElement(what));
        }
        if s.is_empty() {
            return Err(Error::InvalidParameter {
                name: "set",
                reason: "sets must be nonempty",
            });
        }
    }
    Ok(())
}

/// Both sides of `|X/Y|·|Z| <= |XZ|·|ZY|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuzsaCheck {
    pub quotient: usize,
    pub xz: usize,
    pub zy: usize,
    pub z: usize,
    pub holds: bool,
}

impl RuzsaCheck {
    pub fn rhs(&self) -> f64 {
        self.xz as f64 * self.zy as f64 / self.z as f64
    }
}

pub fn ruzsa_check(x: &ResidueSet, y: &ResidueSet, z: &ResidueSet) -> Result<RuzsaCheck> {
    nonzero(&[x, y, z], "the Ruzsa triangle check")?;
    let quotient = quotient_set(x, y)?.len();
    let xz = product_set(x, z)?.len();
    let zy = product_set(z, y)?.len();
    let holds = quotient as u128 * z.len() as u128 <= xz as u128 * zy as u128;
    Ok(RuzsaCheck {
        quotient,
        xz,
        zy,
        z: z.len(),
        holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubsetStrategy {
    Exhaustive,
    Greedy,
}

/// Largest `|X|` the exhaustive subset search accepts.
pub const KATZ_SHEN_EXHAUSTIVE_MAX: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct KatzShen {
    /// The chosen `X'`, ascending.
    pub subset: Vec<Residue>,
    /// `|X'·B_1⋯B_k|`.
    pub product_len: usize,
    /// `|X'B_1⋯B_k|·|X|^{k-1} / (|XB_1|⋯|XB_k|)`.
    pub ratio: f64,
}

fn chain_len(m: PrimeModulus, xs: &[Residue], bs: &[ResidueSet]) -> Result<usize> {
    let mut acc = ResidueSet::from_residues(m, xs.iter().copied());
    for b in bs {
        acc = product_set(&acc, b)?;
    }
    Ok(acc.len())
}

/// Smallest admissible size: `|X'| > |X|/2`.
fn admissible_min(n: usize) -> usize {
    n / 2 + 1
}

/// Searches subsets `X' ⊂ X` with `|X'| > |X|/2` for a small `|X'B_1⋯B_k|`.
///
/// The product set only grows with `X'`, so the minimum over admissible
/// subsets is attained at the smallest admissible size; the exhaustive
/// strategy enumerates every subset of that size in lexicographic order and
/// keeps the first minimiser. The greedy strategy repeatedly drops the element
/// whose removal shrinks the product set most (ties to the smaller residue).
pub fn katz_shen_ratio(x: &ResidueSet, bs: &[ResidueSet], strategy: SubsetStrategy) -> Result<KatzShen> {
    if bs.is_empty() {
        return Err(Error::InvalidParameter {
            name: "B",
            reason: "need at least one set B_i",
        });
    }
    let mut all: Vec<&ResidueSet> = alloc::vec![x];
    all.extend(bs.iter());
    nonzero(&all, "the Katz-Shen search")?;
    let m = x.modulus();
    let xs = x.to_sorted_vec();
    let n = xs.len();
    let k = bs.len() as i32;
    let mut denom = 1.0f64;
    for b in bs {
        denom *= product_set(x, b)?.len() as f64;
    }
    let ratio_of = |len: usize| len as f64 * libm::pow(n as f64, f64::from(k - 1)) / denom;
    let target = admissible_min(n);

    let (subset, product_len) = match strategy {
        SubsetStrategy::Exhaustive => {
            if n > KATZ_SHEN_EXHAUSTIVE_MAX {
                return Err(Error::InvalidParameter {
                    name: "X",
                    reason: "exhaustive search is limited to |X| <= 20",
                });
            }
            let mut best: Option<(Vec<Residue>, usize)> = None;
            let mut idx: Vec<usize> = (0..target).collect();
            loop {
                let cand: Vec<Residue> = idx.iter().map(|&i| xs[i]).collect();
                let len = chain_len(m, &cand, bs)?;
                if best.as_ref().is_none_or(|(_, b)| len < *b) {
                    best = Some((cand, len));
                }
                if !next_combination(&mut idx, n) {
                    break;
                }
            }
            best.unwrap()
        }
        SubsetStrategy::Greedy => {
            let mut cur = xs.clone();
            let mut cur_len = chain_len(m, &cur, bs)?;
            while cur.len() > target {
                let mut best: Option<(usize, usize)> = None;
                for i in 0..cur.len() {
                    let mut cand = cur.clone();
                    cand.remove(i);
                    let len = chain_len(m, &cand, bs)?;
                    if best.is_none_or(|(_, b)| len < b) {
                        best = Some((i, len));
                    }
                }
                let (i, len) = best.unwrap();
                cur.remove(i);
                cur_len = len;
            }
            (cur, cur_len)
        }
    };
    Ok(KatzShen {
        ratio: ratio_of(product_len),
        subset,
        product_len,
    })
}

/// Advances `idx` to the next `idx.len()`-combination of `0..n`.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let r = idx.len();
    let Some(i) = (0..r).rev().find(|&i| idx[i] != i + n - r) else {
        return false;
    };
    idx[i] += 1;
    for j in i + 1..r {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

/// Coprime solutions of `x ≡ s0·y (mod p)` in a box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgCountReport {
    pub p: u64,
    pub s0: Residue,
    pub x_max: u64,
    pub y_max: u64,
    pub count: u64,
    /// `count / (1 + XY/p)`.
    pub ratio: f64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Counts `(x, y)` with `1 <= x <= X`, `1 <= y <= Y`, `gcd(x, y) = 1` and
/// `x ≡ s0·y`. Since `X < p`, each `y` admits at most one `x`.
pub fn cg_count(m: &PrimeModulus, s0: Residue, x_max: u64, y_max: u64) -> Result<CgCountReport> {
    if x_max == 0 || y_max == 0 || x_max >= m.p() || y_max >= m.p() {
        return Err(Error::InvalidParameter {
            name: "X/Y",
            reason: "box sides must satisfy 1 <= X, Y < p",
        });
    }
    let s0 = m.reduce(s0);
    let count = (1..=y_max)
        .filter(|&y| {
            let x = m.mul(s0, y);
            (1..=x_max).contains(&x) && gcd(x, y) == 1
        })
        .count() as u64;
    let expected = 1.0 + x_max as f64 * y_max as f64 / m.p() as f64;
    Ok(CgCountReport {
        p: m.p(),
        s0,
        x_max,
        y_max,
        count,
        ratio: count as f64 / expected,
    })
}

/// How many residues `n! mod p`, `1 <= n <= p`, hits and misses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErdosStats {
    pub p: u64,
    /// Distinct values, `0` (from `n = p`) included.
    pub distinct: u64,
    pub missing: u64,
}

impl ErdosStats {
    pub fn missing_fraction(&self) -> f64 {
        self.missing as f64 / self.p as f64
    }

    pub fn distinct_fraction(&self) -> f64 {
        self.distinct as f64 / self.p as f64
    }
}

pub fn erdos_stats(m: &PrimeModulus, cap: u64) -> Result<ErdosStats> {
    if m.p() > cap {
        return Err(Error::CapExceeded {
            what: "factorial residue scan",
            p: m.p(),
            cap,
        });
    }
    let opts = WindowOptions {
        allow_zero_tail: true,
        ..Default::default()
    };
    let window = factorial_range(0, m.p(), m, None, &opts)?;
    let hit = Bitset::from_indices(m.p() as usize, window.values().iter().map(|&v| v as usize));
    let distinct = hit.count_ones() as u64;
    Ok(ErdosStats {
        p: m.p(),
        distinct,
        missing: m.p() - distinct,
    })
}

/// Which published inequality a profile evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// Lower bound on `|A_N/A_N|` (four ranges of `N`).
    QuotientSet,
    /// Lower bound on `|A_N·A_N|` for `p^{1/2} <= N <= p^{7/8} log p`.
    ProductSet,
    /// Lower bound `N^{1-o(1)}` on `|A_N·A_N|` for `N < p^{3/5}`.
    ProductSetSmall,
    /// Lower bound on `|I·M|` through prime products.
    IntervalProduct,
    /// Lower bound on `|I·M|` through the energy estimate.
    IntervalProductEnergy,
    /// Upper bound on the energy `J(N, M)`.
    Energy,
    /// Upper bound `N^{2ℓ-1+1/(ℓ+1)}` on `J_ℓ(L, N)`.
    Moment,
    /// Upper bound `|A|^{5/6} N^{7/8} p^{1/6}` on the double sum.
    DoubleSum,
}

impl BoundKind {
    pub const ALL: [BoundKind; 8] = [
        BoundKind::QuotientSet,
        BoundKind::ProductSet,
        BoundKind::ProductSetSmall,
        BoundKind::IntervalProduct,
        BoundKind::IntervalProductEnergy,
        BoundKind::Energy,
        BoundKind::Moment,
        BoundKind::DoubleSum,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::QuotientSet => "quotient_set",
            BoundKind::ProductSet => "product_set",
            BoundKind::ProductSetSmall => "product_set_small",
            BoundKind::IntervalProduct => "interval_product",
            BoundKind::IntervalProductEnergy => "interval_product_energy",
            BoundKind::Energy => "energy",
            BoundKind::Moment => "moment",
            BoundKind::DoubleSum => "double_sum",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Whether the curve is a lower bound (as opposed to an upper bound).
    pub fn is_lower(&self) -> bool {
        !matches!(self, BoundKind::Energy | BoundKind::Moment | BoundKind::DoubleSum)
    }
}

/// Parameters for one bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundProfile {
    pub kind: BoundKind,
    pub p: u64,
    pub n: u64,
    /// `|M|` for the interval-product and energy curves.
    pub m: Option<u64>,
    /// Half-degree for the moment curve.
    pub ell: Option<u32>,
    /// `|A|` for the double-sum curve.
    pub set_len: Option<u64>,
    /// Stand-in for the implied constant.
    pub constant: f64,
    /// The lower cutoff constant of the smallest quotient-set range.
    pub cutoff: f64,
}

impl BoundProfile {
    pub fn new(kind: BoundKind, p: u64, n: u64) -> Self {
        Self {
            kind,
            p,
            n,
            m: None,
            ell: None,
            set_len: None,
            constant: 1.0,
            cutoff: 1.0,
        }
    }

    /// `K = p/N` as a reduced fraction `(num, den)`.
    pub fn k_ratio(&self) -> (u64, u64) {
        let g = gcd(self.p, self.n).max(1);
        (self.p / g, self.n / g)
    }

    pub fn k(&self) -> f64 {
        self.p as f64 / self.n as f64
    }

    /// `Q = N / (p^{1/2} (log p)^2)`.
    pub fn q(&self) -> f64 {
        let lp = libm::log(self.p as f64);
        self.n as f64 / (libm::sqrt(self.p as f64) * lp * lp)
    }

    /// False when `N <= p^{1/2} (log p)^2`, where `log Q <= 0`.
    pub fn q_exceeds_one(&self) -> bool {
        self.q() > 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundValue {
    pub value: f64,
    pub case: &'static str,
    pub asymptotic_placeholder: bool,
}

impl BoundValue {
    /// `observed / value`.
    pub fn ratio(&self, observed: f64) -> f64 {
        observed / self.value
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundOutcome {
    Value(BoundValue),
    OutOfRegime(&'static str),
}

impl BoundOutcome {
    pub fn value(&self) -> Option<BoundValue> {
        match self {
            BoundOutcome::Value(v) => Some(*v),
            BoundOutcome::OutOfRegime(_) => None,
        }
    }
}

fn val(value: f64, case: &'static str, placeholder: bool) -> BoundOutcome {
    BoundOutcome::Value(BoundValue {
        value,
        case,
        asymptotic_placeholder: placeholder,
    })
}

fn min_labelled(options: &[(f64, &'static str)]) -> (f64, &'static str) {
    options
        .iter()
        .copied()
        .fold((f64::INFINITY, ""), |a, b| if b.0 < a.0 { b } else { a })
}

fn need<T>(x: Option<T>, what: &'static str) -> core::result::Result<T, BoundOutcome> {
    x.ok_or(BoundOutcome::OutOfRegime(what))
}

/// Evaluates the profile's curve in whichever range of `N` applies.
pub fn bound_curves(profile: &BoundProfile) -> BoundOutcome {
    match eval(profile) {
        Ok(BoundOutcome::Value(mut v)) => {
            v.value *= profile.constant;
            BoundOutcome::Value(v)
        }
        Ok(other) | Err(other) => other,
    }
}

fn eval(pr: &BoundProfile) -> core::result::Result<BoundOutcome, BoundOutcome> {
    use libm::{log, pow, sqrt};
    if pr.p < 2 || pr.n == 0 {
        return Ok(BoundOutcome::OutOfRegime("p >= 2 and N >= 1 required"));
    }
    let p = pr.p as f64;
    let n = pr.n as f64;
    let lp = log(p);
    Ok(match pr.kind {
        BoundKind::QuotientSet => {
            if pr.n > pr.p {
                BoundOutcome::OutOfRegime("N > p")
            } else if n >= pow(p, 7.0 / 8.0) * lp {
                val(p, "n_ge_p^(7/8)logp", false)
            } else if n >= pow(p, 0.8) * pow(lp, 1.6) {
                let q = pr.q();
                if q <= 1.0 {
                    BoundOutcome::OutOfRegime("log Q <= 0")
                } else {
                    val(n * pow(q, 1.0 / 3.0) * pow(log(q), -2.0 / 3.0), "p^(4/5)logp^(8/5)_to_p^(7/8)logp", false)
                }
            } else if n >= pow(p, 0.8) * pow(lp, 0.8) {
                val(n * sqrt(pr.k()), "p^(4/5)logp^(4/5)_to_p^(4/5)logp^(8/5)", false)
            } else if n >= pr.cutoff * sqrt(p) * lp * lp {
                val(n * pow(pr.q(), 1.0 / 3.0), "cp^(1/2)logp^2_to_p^(4/5)logp^(4/5)", false)
            } else {
                BoundOutcome::OutOfRegime("N below c p^(1/2) (log p)^2")
            }
        }
        BoundKind::ProductSet => {
            let top = pow(p, 7.0 / 8.0) * lp;
            let mid = pow(p, 29.0 / 40.0) * lp;
            if n > top {
                BoundOutcome::OutOfRegime("N above p^(7/8) log p")
            } else if n >= mid {
                val(n / (pow(p, 1.0 / 8.0) * lp), "p^(29/40)logp_to_p^(7/8)logp", false)
            } else if n >= sqrt(p) {
                let v = pow(p, 0.6).min(pow(n, 2.0 / 3.0) * pow(p, 1.0 / 6.0));
                val(v, "p^(1/2)_to_p^(29/40)logp", true)
            } else {
                BoundOutcome::OutOfRegime("N below p^(1/2)")
            }
        }
        BoundKind::ProductSetSmall => {
            if n < pow(p, 0.6) {
                val(n, "n_lt_p^(3/5)", true)
            } else {
                BoundOutcome::OutOfRegime("N >= p^(3/5)")
            }
        }
        BoundKind::IntervalProduct => {
            let mm = need(pr.m, "|M| required")? as f64;
            if pr.n >= pr.p || pr.n < 2 {
                BoundOutcome::OutOfRegime("need 2 <= N < p")
            } else {
                let ln = log(n);
                let (v, case) = min_labelled(&[
                    (p / (ln * ln), "p/log^2N"),
                    (n * n / (ln * ln), "N^2/log^2N"),
                    (n * mm / ln, "NM/logN"),
                ]);
                val(v, case, false)
            }
        }
        BoundKind::IntervalProductEnergy => {
            let mm = need(pr.m, "|M| required")? as f64;
            if pr.n >= pr.p {
                BoundOutcome::OutOfRegime("N >= p")
            } else if n >= pow(p, 2.0 / 3.0) {
                val(p.min(n * mm), "n_ge_p^(2/3)", true)
            } else if n >= sqrt(p) {
                let v = p.min(n * pow(mm, 0.25) * pow(p, 0.25)).min(n * mm);
                val(v, "p^(1/2)_to_p^(2/3)", true)
            } else {
                BoundOutcome::OutOfRegime("N below p^(1/2)")
            }
        }
        BoundKind::Energy => {
            let mm = need(pr.m, "|M| required")? as f64;
            if n >= pow(p, 2.0 / 3.0) {
                val(n * n * mm * mm / p + n * mm, "n_ge_p^(2/3)", true)
            } else if mm >= pow(p, 1.0 / 3.0) {
                val(
                    n * n * mm * mm / p + n * pow(mm, 1.75) * pow(p, -0.25) + mm * mm,
                    "n_lt_p^(2/3)_m_ge_p^(1/3)",
                    true,
                )
            } else {
                val(n * mm + mm * mm, "n_lt_p^(2/3)_m_lt_p^(1/3)", true)
            }
        }
        BoundKind::Moment => {
            let ell = f64::from(need(pr.ell, "ell required")?);
            val(pow(n, 2.0 * ell - 1.0 + 1.0 / (ell + 1.0)), "all", false)
        }
        BoundKind::DoubleSum => {
            let a = need(pr.set_len, "|A| required")? as f64;
            val(pow(a, 5.0 / 6.0) * pow(n, 7.0 / 8.0) * pow(p, 1.0 / 6.0), "all", false)
        }
    })
}
