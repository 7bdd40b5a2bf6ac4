//! Residue sets and their pairwise compositions.
//!
//! A [`ResidueSet`] stores its elements either as a bit array over `[0, p)` or
//! as a hashed set, picked by modulus size and expected density. Every
//! operation answers identically for both layouts.

use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxBuildHasher;

use crate::bitset::Bitset;
use crate::factorial::{factorial_range, WindowOptions};
use crate::modular::{is_prime, PrimeModulus, Residue};
use crate::{par, Error, Result, DEFAULT_PAIR_BUDGET};

/// Moduli up to this size always use the dense layout.
pub const DENSE_MODULUS_MAX: u64 = 1 << 27;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Representation {
    Dense,
    Sparse,
}

impl Representation {
    /// Dense when `p <= 2^27` or the expected density exceeds 1/64.
    pub fn choose(p: u64, expected_len: u128) -> Self {
        if p <= DENSE_MODULUS_MAX || expected_len.saturating_mul(64) > u128::from(p) {
            Self::Dense
        } else {
            Self::Sparse
        }
    }
}

#[derive(Debug, Clone)]
enum Storage {
    Dense(Bitset),
    Sparse(HashSet<u64, FxBuildHasher>),
}

/// A finite set of residues modulo one prime, with exact cardinality.
#[derive(Debug, Clone)]
pub struct ResidueSet {
    modulus: PrimeModulus,
    storage: Storage,
    len: usize,
}

impl PartialEq for ResidueSet {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
            && self.len == other.len
            && self.iter().all(|x| other.contains(x))
    }
}

impl Eq for ResidueSet {}

impl ResidueSet {
    pub fn empty(modulus: PrimeModulus, repr: Representation) -> Self {
        let storage = match repr {
            Representation::Dense => Storage::Dense(Bitset::new(modulus.p() as usize)),
            Representation::Sparse => Storage::Sparse(HashSet::default()),
        };
        Self {
            modulus,
            storage,
            len: 0,
        }
    }

    /// Collects residues (reduced mod p), choosing the layout automatically.
    pub fn from_residues(modulus: PrimeModulus, items: impl IntoIterator<Item = u64>) -> Self {
        let items: Vec<u64> = items.into_iter().collect();
        let repr = Representation::choose(modulus.p(), items.len() as u128);
        Self::from_residues_in(modulus, repr, items)
    }

    pub fn from_residues_in(
        modulus: PrimeModulus,
        repr: Representation,
        items: impl IntoIterator<Item = u64>,
    ) -> Self {
        let mut s = Self::empty(modulus, repr);
        for x in items {
            s.insert(x);
        }
        s
    }

    /// The interval `{1, ..., n}` as a materialised set (`n < p`).
    pub fn interval(modulus: PrimeModulus, n: u64) -> Result<Self> {
        if n == 0 || n >= modulus.p() {
            return Err(Error::InvalidParameter {
                name: "N",
                reason: "interval length must satisfy 1 <= N < p",
            });
        }
        Ok(Self::from_residues(modulus, 1..=n))
    }

    pub fn insert(&mut self, x: u64) -> bool {
        let x = self.modulus.reduce(x);
        let fresh = match &mut self.storage {
            Storage::Dense(b) => b.insert(x as usize),
            Storage::Sparse(h) => h.insert(x),
        };
        self.len += usize::from(fresh);
        fresh
    }

    pub fn contains(&self, x: Residue) -> bool {
        match &self.storage {
            Storage::Dense(b) => b.contains(x as usize),
            Storage::Sparse(h) => h.contains(&x),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn representation(&self) -> Representation {
        match self.storage {
            Storage::Dense(_) => Representation::Dense,
            Storage::Sparse(_) => Representation::Sparse,
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0)
    }

    /// Elements in storage order (ascending for the dense layout).
    pub fn iter(&self) -> impl Iterator<Item = Residue> + '_ {
        let (dense, sparse) = match &self.storage {
            Storage::Dense(b) => (Some(b.iter().map(|i| i as u64)), None),
            Storage::Sparse(h) => (None, Some(h.iter().copied())),
        };
        dense.into_iter().flatten().chain(sparse.into_iter().flatten())
    }

    pub fn to_sorted_vec(&self) -> Vec<Residue> {
        let mut v: Vec<_> = self.iter().collect();
        if self.representation() == Representation::Sparse {
            v.sort_unstable();
        }
        v
    }

    pub fn to_representation(&self, repr: Representation) -> Self {
        if repr == self.representation() {
            return self.clone();
        }
        Self::from_residues_in(self.modulus, repr, self.iter())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.p(),
                right: other.modulus.p(),
            });
        }
        Ok(())
    }

    fn union_with(&mut self, other: &Self) {
        match (&mut self.storage, &other.storage) {
            (Storage::Dense(a), Storage::Dense(b)) => {
                a.union_with(b);
                self.len = a.count_ones();
            }
            _ => {
                for x in other.iter() {
                    self.insert(x);
                }
            }
        }
    }
}

/// `A_N = {n! mod p : 1 <= n <= N}`.
///
/// `N >= p` is accepted only with `allow_zero_tail`, in which case `0` joins
/// the set.
pub fn build_factorial_set(m: &PrimeModulus, n: u64, allow_zero_tail: bool) -> Result<ResidueSet> {
    let opts = WindowOptions {
        allow_zero_tail,
        ..Default::default()
    };
    let window = factorial_range(0, n, m, None, &opts)?;
    Ok(ResidueSet::from_residues(*m, window.values().iter().copied()))
}

#[derive(Clone, Copy)]
enum Compose {
    Mul,
    Add,
}

fn check_budget(what: &'static str, a: usize, b: usize, budget: u128) -> Result<()> {
    let required = a as u128 * b as u128;
    if required > budget {
        return Err(Error::BudgetExceeded {
            what,
            required,
            budget,
        });
    }
    Ok(())
}

/// `{x ∘ y : x ∈ xs, y ∈ ys}`, stopping early once every attainable residue
/// (`limit` of them) has appeared.
fn compose(
    m: PrimeModulus,
    xs: &[Residue],
    ys: &[Residue],
    op: Compose,
    limit: usize,
) -> ResidueSet {
    let (outer, inner) = if xs.len() <= ys.len() { (xs, ys) } else { (ys, xs) };
    let repr = Representation::choose(m.p(), outer.len() as u128 * inner.len() as u128);
    let apply = |x: Residue, y: Residue| match op {
        Compose::Mul => m.mul(x, y),
        Compose::Add => m.add(x, y),
    };
    let fill = |rows: &[Residue]| {
        let mut out = ResidueSet::empty(m, repr);
        for &x in rows {
            for &y in inner {
                out.insert(apply(x, y));
            }
            if out.len() >= limit {
                break;
            }
        }
        out
    };
    let workers = if cfg!(feature = "parallel") && outer.len() * inner.len() >= 1 << 20 {
        8
    } else {
        1
    };
    let parts = par::chunks(0..outer.len() as u64, (outer.len() as u64).div_ceil(workers));
    let mut pieces = par::map_ordered(parts, |r| fill(&outer[r.start as usize..r.end as usize]));
    let mut acc = pieces.remove(0);
    for piece in &pieces {
        acc.union_with(piece);
    }
    acc
}

fn product_limit(a: &ResidueSet, b: &ResidueSet) -> usize {
    let p = a.modulus.p() as usize;
    if a.contains_zero() || b.contains_zero() {
        p
    } else {
        p - 1
    }
}

/// `A·B = {ab mod p}` under the default pair budget.
pub fn product_set(a: &ResidueSet, b: &ResidueSet) -> Result<ResidueSet> {
    product_set_within(a, b, DEFAULT_PAIR_BUDGET)
}

pub fn product_set_within(a: &ResidueSet, b: &ResidueSet, budget: u128) -> Result<ResidueSet> {
    a.check_same(b)?;
    check_budget("product set", a.len(), b.len(), budget)?;
    if a.is_empty() || b.is_empty() {
        return Ok(ResidueSet::empty(a.modulus, Representation::choose(a.modulus.p(), 0)));
    }
    let (xs, ys) = (a.to_sorted_vec(), b.to_sorted_vec());
    Ok(compose(a.modulus, &xs, &ys, Compose::Mul, product_limit(a, b)))
}

/// `A/B = {a·b⁻¹ mod p}` under the default pair budget.
pub fn quotient_set(a: &ResidueSet, b: &ResidueSet) -> Result<ResidueSet> {
    quotient_set_within(a, b, DEFAULT_PAIR_BUDGET)
}

pub fn quotient_set_within(a: &ResidueSet, b: &ResidueSet, budget: u128) -> Result<ResidueSet> {
    a.check_same(b)?;
    if b.contains_zero() {
        return Err(Error::ZeroElement("a quotient denominator"));
    }
    check_budget("quotient set", a.len(), b.len(), budget)?;
    if a.is_empty() || b.is_empty() {
        return Ok(ResidueSet::empty(a.modulus, Representation::choose(a.modulus.p(), 0)));
    }
    let m = a.modulus;
    let xs = a.to_sorted_vec();
    let inv: Vec<Residue> = b.to_sorted_vec().into_iter().map(|y| m.inv(y).unwrap()).collect();
    let limit = if a.contains_zero() { m.p() as usize } else { m.p() as usize - 1 };
    Ok(compose(m, &xs, &inv, Compose::Mul, limit))
}

/// `A+B = {a+b mod p}` under the default pair budget.
pub fn sumset(a: &ResidueSet, b: &ResidueSet) -> Result<ResidueSet> {
    sumset_within(a, b, DEFAULT_PAIR_BUDGET)
}

pub fn sumset_within(a: &ResidueSet, b: &ResidueSet, budget: u128) -> Result<ResidueSet> {
    a.check_same(b)?;
    check_budget("sumset", a.len(), b.len(), budget)?;
    if a.is_empty() || b.is_empty() {
        return Ok(ResidueSet::empty(a.modulus, Representation::choose(a.modulus.p(), 0)));
    }
    let (xs, ys) = (a.to_sorted_vec(), b.to_sorted_vec());
    Ok(compose(a.modulus, &xs, &ys, Compose::Add, a.modulus.p() as usize))
}

/// Left factor of a multiplicative energy count. Intervals and prime sets are
/// generated on the fly rather than stored.
#[derive(Debug, Clone, Copy)]
pub enum EnergyLeft<'a> {
    Set(&'a ResidueSet),
    /// `{1, ..., N}`.
    Interval(u64),
    /// Primes not exceeding `N`.
    PrimesUpTo(u64),
}

/// Which left set an [`EnergyCount`] was taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetDescriptor {
    Set { len: usize },
    Interval { n: u64 },
    PrimesUpTo { n: u64 },
}

impl SetDescriptor {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Set { .. } => "set",
            Self::Interval { .. } => "interval",
            Self::PrimesUpTo { .. } => "primes",
        }
    }
}

impl EnergyLeft<'_> {
    fn validate(&self, m: &PrimeModulus) -> Result<()> {
        match *self {
            Self::Set(s) if s.contains_zero() => Err(Error::ZeroElement("multiplicative energy")),
            Self::Set(s) if s.modulus != *m => Err(Error::ModulusMismatch {
                left: s.modulus.p(),
                right: m.p(),
            }),
            Self::Interval(n) | Self::PrimesUpTo(n) if n >= m.p() => Err(Error::InvalidParameter {
                name: "N",
                reason: "virtual left sets need N < p",
            }),
            _ => Ok(()),
        }
    }

    fn for_each_in(&self, range: core::ops::Range<u64>, sorted: &[Residue], mut f: impl FnMut(Residue)) {
        match *self {
            Self::Set(_) => sorted[range.start as usize..range.end as usize].iter().for_each(|&x| f(x)),
            Self::Interval(_) => range.for_each(|x| f(x + 1)),
            Self::PrimesUpTo(_) => range.map(|x| x + 1).filter(|&x| is_prime(x)).for_each(f),
        }
    }

    /// Upper end of the index space walked by `for_each_in`.
    fn span(&self) -> u64 {
        match *self {
            Self::Set(s) => s.len() as u64,
            Self::Interval(n) | Self::PrimesUpTo(n) => n,
        }
    }

    fn cardinality(&self) -> u64 {
        match *self {
            Self::Set(s) => s.len() as u64,
            Self::Interval(n) => n,
            Self::PrimesUpTo(n) => (1..=n).filter(|&x| is_prime(x)).count() as u64,
        }
    }

    fn descriptor(&self) -> SetDescriptor {
        match *self {
            Self::Set(s) => SetDescriptor::Set { len: s.len() },
            Self::Interval(n) => SetDescriptor::Interval { n },
            Self::PrimesUpTo(n) => SetDescriptor::PrimesUpTo { n },
        }
    }
}

/// Number of ordered quadruples `(s1, m1, s2, m2)` with `s1·m1 ≡ s2·m2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnergyCount {
    pub count: u128,
    pub left: SetDescriptor,
    pub left_len: u64,
    pub right_len: u64,
    pub p: u64,
}

impl EnergyCount {
    /// Size of the trivial family `s1 = s2, m1 = m2`.
    pub fn diagonal(&self) -> u128 {
        u128::from(self.left_len) * u128::from(self.right_len)
    }

    /// The Cauchy–Schwarz lower bound `|S|²|M|²/J` on `|S·M|`.
    pub fn product_set_lower_bound(&self) -> f64 {
        let d = self.diagonal() as f64;
        if self.count == 0 {
            0.0
        } else {
            d * d / self.count as f64
        }
    }
}

enum Buckets {
    Dense(Vec<u32>),
    Hashed(HashMap<u64, u64, FxBuildHasher>),
}

impl Buckets {
    fn bump(&mut self, v: u64) {
        match self {
            Self::Dense(d) => d[v as usize] += 1,
            Self::Hashed(h) => *h.entry(v).or_insert(0) += 1,
        }
    }
}

pub fn multiplicative_energy(left: EnergyLeft<'_>, right: &ResidueSet) -> Result<EnergyCount> {
    multiplicative_energy_within(left, right, DEFAULT_PAIR_BUDGET)
}

/// Exact energy by bucketing products and summing squared multiplicities.
pub fn multiplicative_energy_within(
    left: EnergyLeft<'_>,
    right: &ResidueSet,
    budget: u128,
) -> Result<EnergyCount> {
    let m = right.modulus;
    left.validate(&m)?;
    if right.contains_zero() {
        return Err(Error::ZeroElement("multiplicative energy"));
    }
    check_budget("multiplicative energy", left.span() as usize, right.len(), budget)?;

    let sorted_left = match left {
        EnergyLeft::Set(s) => s.to_sorted_vec(),
        _ => Vec::new(),
    };
    let rights = right.to_sorted_vec();
    let pairs = u128::from(left.span()) * rights.len() as u128;
    let dense = m.p() <= DENSE_MODULUS_MAX && u128::from(m.p()) <= pairs.saturating_mul(64);
    let workers = if cfg!(feature = "parallel") && pairs >= 1 << 22 && m.p() <= 1 << 22 {
        8
    } else {
        1
    };
    let parts = par::chunks(0..left.span(), left.span().div_ceil(workers).max(1));
    let tables = par::map_ordered(parts, |r| {
        let mut b = if dense {
            Buckets::Dense(alloc::vec![0u32; m.p() as usize])
        } else {
            Buckets::Hashed(HashMap::default())
        };
        left.for_each_in(r, &sorted_left, |s| {
            for &x in &rights {
                b.bump(m.mul(s, x));
            }
        });
        b
    });
    // additive merge, then Σ c²
    let count = match merge_buckets(tables) {
        Buckets::Dense(d) => d.iter().map(|&c| u128::from(c) * u128::from(c)).sum(),
        Buckets::Hashed(h) => h.values().map(|&c| u128::from(c) * u128::from(c)).sum(),
    };
    Ok(EnergyCount {
        count,
        left: left.descriptor(),
        left_len: left.cardinality(),
        right_len: rights.len() as u64,
        p: m.p(),
    })
}

fn merge_buckets(mut tables: Vec<Buckets>) -> Buckets {
    let mut acc = tables.remove(0);
    for t in tables {
        match (&mut acc, t) {
            (Buckets::Dense(a), Buckets::Dense(b)) => {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            }
            (Buckets::Hashed(a), Buckets::Hashed(b)) => {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
            }
            _ => unreachable!("all chunks share one bucket layout"),
        }
    }
    acc
}

/// Estimated `|A·B|` with a 95% normal-approximation interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CardinalityEstimate {
    pub estimate: f64,
    pub low: f64,
    pub high: f64,
    /// True when the value came from full enumeration.
    pub exact: bool,
    pub samples: u64,
}

/// Estimates `|A·B|` from `budget` uniformly sampled pairs.
///
/// Each sampled product `v` contributes `1/r(v)`, where `r(v)` is its exact
/// number of representations `v = ab`, found by probing `B` for `v/a` over
/// the elements of `A`. Since `Σ_pairs 1/r(ab) = |A·B|`, the scaled mean is
/// unbiased. When `budget >= |A|·|B|` the product set is enumerated instead.
pub fn estimate_product_cardinality(
    a: &ResidueSet,
    b: &ResidueSet,
    budget: u64,
    seed: u64,
) -> Result<CardinalityEstimate> {
    a.check_same(b)?;
    let total = a.len() as u128 * b.len() as u128;
    if u128::from(budget) >= total || a.is_empty() || b.is_empty() {
        let exact = product_set_within(a, b, u128::MAX)?.len() as f64;
        return Ok(CardinalityEstimate {
            estimate: exact,
            low: exact,
            high: exact,
            exact: true,
            samples: 0,
        });
    }
    let m = a.modulus;
    let (xs, ys) = (a.to_sorted_vec(), b.to_sorted_vec());
    // probe over the smaller side
    let (probe, other) = if xs.len() <= ys.len() { (&xs, b) } else { (&ys, a) };
    let probe_inv: Vec<Option<Residue>> = probe.iter().map(|&x| m.inv(x).ok()).collect();
    let zeros_a = u64::from(a.contains_zero());
    let zeros_b = u64::from(b.contains_zero());
    let zero_reps = zeros_a * ys.len() as u64 + xs.len() as u64 * zeros_b - zeros_a * zeros_b;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    let mut seen: HashSet<u64, FxBuildHasher> = HashSet::default();
    for _ in 0..budget {
        let x = xs[rng.random_range(0..xs.len())];
        let y = ys[rng.random_range(0..ys.len())];
        let v = m.mul(x, y);
        let reps = if v == 0 {
            zero_reps
        } else {
            probe_inv
                .iter()
                .filter_map(|inv| *inv)
                .filter(|&inv| other.contains(m.mul(v, inv)))
                .count() as u64
        };
        let w = 1.0 / reps as f64;
        sum += w;
        sum_sq += w * w;
        seen.insert(v);
    }
    let k = budget as f64;
    let scale = total as f64;
    let mean = sum / k;
    let var = ((sum_sq / k) - mean * mean).max(0.0) * k / (k - 1.0).max(1.0);
    let half = 1.96 * scale * libm::sqrt(var / k);
    let estimate = scale * mean;
    let ceiling = (total as f64).min(product_limit(a, b) as f64);
    Ok(CardinalityEstimate {
        estimate,
        low: (estimate - half).max(seen.len() as f64),
        high: (estimate + half).min(ceiling),
        exact: false,
        samples: budget,
    })
}
