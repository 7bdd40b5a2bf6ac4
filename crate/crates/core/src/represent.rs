//! Constructive search for factorial representations of residues, with
//! certificates that can be re-checked by direct arithmetic.
//!
//! Sum-type searches run as layered reachability over `Z/pZ`: layer 0 is a
//! base set, and layer `j+1` is layer `j` plus a step set. Each residue newly
//! reached in a layer records the step element that reached it first, under
//! ascending step order, so a witness is recovered by walking back one layer
//! at a time.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::bitset::Bitset;
use crate::factorial::{factorial_range, WindowOptions};
use crate::modular::{PrimeModulus, Residue};
use crate::sets::{product_set_within, sumset, ResidueSet};
use crate::{Error, Result};

/// Default cap on bitset word operations for one reachability build.
pub const DEFAULT_SEARCH_BUDGET: u128 = 1 << 34;

/// Largest modulus the reachability solvers and coverage scans accept.
pub const DEFAULT_SOLVER_CAP: u64 = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    /// `m!·n! ≡ λ`.
    WilsonPair,
    /// `m1!n1! + m2!n2! ≡ λ` from two Wilson pairs.
    TwoProduct,
    /// `Σ_{i≤k} m_i!n_i! ≡ λ`.
    KTermProduct,
    /// `m!n! + Σ_{i≤k} n_i! ≡ λ`.
    ProductPlusFactorials,
    /// `x! + y! + c·z! + c·t! ≡ λ`.
    CpForm,
}

impl Shape {
    pub const ALL: [Shape; 5] = [
        Shape::WilsonPair,
        Shape::TwoProduct,
        Shape::KTermProduct,
        Shape::ProductPlusFactorials,
        Shape::CpForm,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Shape::WilsonPair => "wilson_pair",
            Shape::TwoProduct => "two_product",
            Shape::KTermProduct => "k_term_product",
            Shape::ProductPlusFactorials => "product_plus_factorials",
            Shape::CpForm => "cp_form",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Shape::ALL
            .into_iter()
            .find(|sh| sh.name() == s)
            .ok_or_else(|| Error::MalformedCertificate(format!("unknown shape {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Witness {
    /// Indices `(m, n)` of a factorial product `m!·n!`.
    Pair(u64, u64),
    /// Index `n` of a lone factorial `n!`.
    Single(u64),
}

impl Witness {
    fn indices(&self) -> impl Iterator<Item = u64> {
        let (a, b) = match *self {
            Witness::Pair(m, n) => (m, Some(n)),
            Witness::Single(n) => (n, None),
        };
        core::iter::once(a).chain(b)
    }
}

/// A claimed representation of `lambda` modulo `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Certificate {
    pub shape: Shape,
    pub p: u64,
    pub lambda: Residue,
    /// Index bound `M`: every witness index must lie in `[1, M]`.
    pub bound: u64,
    /// Coefficient for [`Shape::CpForm`].
    pub c: Option<u64>,
    pub witnesses: Vec<Witness>,
}

/// Result of re-evaluating a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    /// The shape's expression reproduces `lambda`.
    pub expression_holds: bool,
    /// No witness index exceeds the bound.
    pub within_bound: bool,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.expression_holds && self.within_bound
    }
}

impl Certificate {
    fn max_index(&self) -> u64 {
        self.witnesses.iter().flat_map(Witness::indices).max().unwrap_or(0)
    }

    fn check_layout(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::MalformedCertificate(msg.into()));
        let pairs = self.witnesses.iter().filter(|w| matches!(w, Witness::Pair(..))).count();
        let singles = self.witnesses.len() - pairs;
        if self.witnesses.iter().flat_map(Witness::indices).any(|i| i == 0) {
            return bad("witness index 0");
        }
        if self.shape == Shape::CpForm && self.c.is_none() {
            return bad("cp_form needs a coefficient c");
        }
        if self.shape != Shape::CpForm && self.c.is_some() {
            return bad("only cp_form carries a coefficient c");
        }
        let ok = match self.shape {
            Shape::WilsonPair => pairs == 1 && singles == 0,
            Shape::TwoProduct | Shape::CpForm => pairs == 2 && singles == 0,
            Shape::KTermProduct => pairs >= 1 && singles == 0,
            Shape::ProductPlusFactorials => {
                matches!(self.witnesses.first(), Some(Witness::Pair(..))) && pairs == 1 && singles >= 1
            }
        };
        if !ok {
            return bad(&format!("witness layout does not fit shape {}", self.shape));
        }
        Ok(())
    }
}

/// Re-evaluates the certificate's expression by direct modular arithmetic.
pub fn verify_certificate(cert: &Certificate) -> Result<Verdict> {
    let m = PrimeModulus::new(cert.p)
        .map_err(|_| Error::MalformedCertificate(format!("p={} is not prime", cert.p)))?;
    if cert.lambda >= cert.p {
        return Err(Error::MalformedCertificate("lambda is not reduced".into()));
    }
    cert.check_layout()?;

    // one ascending pass computes every needed factorial
    let mut wanted: Vec<u64> = cert.witnesses.iter().flat_map(Witness::indices).collect();
    wanted.sort_unstable();
    wanted.dedup();
    let mut facts = Vec::with_capacity(wanted.len());
    let (mut k, mut acc) = (0u64, 1 % m.p());
    for &n in &wanted {
        if n >= m.p() {
            acc = 0;
        }
        while k < n && acc != 0 {
            k += 1;
            acc = m.mul(acc, m.reduce(k));
        }
        k = n;
        facts.push((n, acc));
    }
    let fact = |n: u64| facts.iter().find(|(i, _)| *i == n).unwrap().1;
    let term = |w: &Witness| match *w {
        Witness::Pair(a, b) => m.mul(fact(a), fact(b)),
        Witness::Single(a) => fact(a),
    };

    let value = match cert.shape {
        Shape::CpForm => {
            let c = m.reduce(cert.c.unwrap());
            let (first, second) = match (&cert.witnesses[0], &cert.witnesses[1]) {
                (Witness::Pair(x, y), Witness::Pair(z, t)) => {
                    (m.add(fact(*x), fact(*y)), m.add(fact(*z), fact(*t)))
                }
                _ => unreachable!("layout checked"),
            };
            m.add(first, m.mul(c, second))
        }
        _ => cert.witnesses.iter().fold(0, |s, w| m.add(s, term(w))),
    };
    Ok(Verdict {
        expression_holds: value == cert.lambda,
        within_bound: cert.max_index() <= cert.bound,
    })
}

/// Why a search produced no certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NotFound {
    /// The whole search space at this bound was explored: no representation.
    Exhausted,
    /// The operation budget ran out first; nothing can be concluded.
    BudgetTruncated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Found(Certificate),
    NotFound(NotFound),
}

impl Outcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Outcome::Found(c) => Some(c),
            Outcome::NotFound(_) => None,
        }
    }
}

/// `λ!·(p-λ)! ≡ λ` for even `λ`. For `λ = 0` the pair `(1, p)` is returned,
/// since `0! = 1!` and index 0 is not a positive integer.
pub fn wilson_pair(m: &PrimeModulus, lambda: Residue) -> Result<Certificate> {
    if lambda >= m.p() {
        return Err(Error::InvalidParameter {
            name: "lambda",
            reason: "target must be reduced mod p",
        });
    }
    if lambda % 2 == 1 {
        return Err(Error::OddWilsonTarget(lambda));
    }
    let (a, b) = if lambda == 0 { (1, m.p()) } else { (lambda, m.p() - lambda) };
    Ok(Certificate {
        shape: Shape::WilsonPair,
        p: m.p(),
        lambda,
        bound: a.max(b),
        c: None,
        witnesses: vec![Witness::Pair(a, b)],
    })
}

/// Even targets `λ` in `[0, p-1]` for which `λ!·(p-λ)! ≢ λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WilsonCheck {
    pub p: u64,
    pub checked: u64,
    pub failures: Vec<Residue>,
}

/// Checks every even `λ` against one table of `n!`, `n = 0..=p`.
pub fn wilson_check(m: &PrimeModulus) -> Result<WilsonCheck> {
    let opts = WindowOptions {
        allow_zero_tail: true,
        ..Default::default()
    };
    let window = factorial_range(0, m.p(), m, None, &opts)?;
    let fact = |n: u64| if n == 0 { 1 } else { window.values()[n as usize - 1] };
    let failures: Vec<Residue> = (0..m.p())
        .step_by(2)
        .filter(|&l| m.mul(fact(l), fact(m.p() - l)) != l)
        .collect();
    Ok(WilsonCheck {
        p: m.p(),
        checked: m.p().div_ceil(2),
        failures,
    })
}

/// The values reachable by a single Wilson pair: the even residues.
pub fn wilson_set(m: &PrimeModulus) -> ResidueSet {
    ResidueSet::from_residues(*m, (0..m.p()).step_by(2))
}

/// `λ ≡ w1 + w2` with both `w_i` Wilson values, scanning `w1` upward.
pub fn two_product_rep(m: &PrimeModulus, lambda: Residue) -> Result<Certificate> {
    if m.p() < 3 {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: "two-product covers need p >= 3",
        });
    }
    let lambda = m.reduce(lambda);
    let w = wilson_set(m);
    let first = w
        .iter()
        .find(|&w1| w.contains(m.sub(lambda, w1)))
        .expect("more than p/2 Wilson values always cover Z/pZ");
    let (c1, c2) = (wilson_pair(m, first)?, wilson_pair(m, m.sub(lambda, first))?);
    let witnesses = vec![c1.witnesses[0], c2.witnesses[0]];
    Ok(Certificate {
        shape: Shape::TwoProduct,
        p: m.p(),
        lambda,
        bound: c1.bound.max(c2.bound),
        c: None,
        witnesses,
    })
}

/// Factorial values `n!` for `1 <= n <= M` with the smallest index of each.
#[derive(Debug, Clone)]
struct FactorialIndex {
    modulus: PrimeModulus,
    set: ResidueSet,
    first: Vec<u64>,
}

impl FactorialIndex {
    fn new(m: &PrimeModulus, bound: u64) -> Result<Self> {
        let opts = WindowOptions {
            allow_zero_tail: true,
            ..Default::default()
        };
        let window = factorial_range(0, bound, m, None, &opts)?;
        let mut first = vec![u64::MAX; m.p() as usize];
        for (n, v) in window.iter() {
            if first[v as usize] == u64::MAX {
                first[v as usize] = n;
            }
        }
        Ok(Self {
            modulus: *m,
            set: ResidueSet::from_residues(*m, window.values().iter().copied()),
            first,
        })
    }

    fn index_of(&self, v: Residue) -> u64 {
        self.first[v as usize]
    }

    /// `(m, n)` with `m!·n! ≡ v ≠ 0`, scanning `m!` upward.
    fn split_product(&self, v: Residue) -> Option<(u64, u64)> {
        let md = self.modulus;
        self.set.to_sorted_vec().into_iter().find_map(|a| {
            let b = md.mul(v, md.inv(a).ok()?);
            self.set.contains(b).then(|| (self.index_of(a), self.index_of(b)))
        })
    }

    /// `(x, y)` with `x! + y! ≡ v`, scanning `x!` upward.
    fn split_sum(&self, v: Residue) -> Option<(u64, u64)> {
        let md = self.modulus;
        self.set.to_sorted_vec().into_iter().find_map(|a| {
            let b = md.sub(v, a);
            self.set.contains(b).then(|| (self.index_of(a), self.index_of(b)))
        })
    }
}

fn check_solver_params(m: &PrimeModulus, k: u32, bound: u64, cap: u64) -> Result<()> {
    if m.p() > cap {
        return Err(Error::CapExceeded {
            what: "reachability search",
            p: m.p(),
            cap,
        });
    }
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: "term count must be at least 1",
        });
    }
    if bound == 0 || bound >= m.p() {
        return Err(Error::InvalidParameter {
            name: "M",
            reason: "index bound must satisfy 1 <= M < p",
        });
    }
    Ok(())
}

const UNREACHED: u32 = u32::MAX;

/// Layered sumset reachability with first-writer predecessors.
#[derive(Debug, Clone)]
pub struct Reachability {
    p: u64,
    step: Vec<Residue>,
    layers: Vec<Bitset>,
    preds: Vec<Vec<u32>>,
    rounds: usize,
    truncated: bool,
}

impl Reachability {
    /// Builds layers `0 ..= rounds` from `base`, adding `step` each round.
    /// Stops early, marked truncated, once `budget` word operations are spent.
    pub fn build(base: &ResidueSet, step: &ResidueSet, rounds: usize, budget: u128) -> Self {
        let p = base.modulus().p();
        let step_vals = step.to_sorted_vec();
        let first = Bitset::from_indices(p as usize, base.iter().map(|x| x as usize));
        let mut this = Self {
            p,
            step: step_vals,
            layers: vec![first],
            preds: Vec::new(),
            rounds,
            truncated: false,
        };
        let mut remaining = budget;
        for _ in 0..rounds {
            let (next, pred, cut) = this.grow(this.layers.last().unwrap(), &mut remaining);
            this.layers.push(next);
            this.preds.push(pred);
            if cut {
                this.truncated = true;
                break;
            }
        }
        this
    }

    fn grow(&self, prev: &Bitset, remaining: &mut u128) -> (Bitset, Vec<u32>, bool) {
        let p = self.p as usize;
        let mut next = Bitset::new(p);
        let mut pred = vec![UNREACHED; p];
        let nwords = prev.words().len();
        let mut count = 0usize;
        for (i, &x) in self.step.iter().enumerate() {
            if count == p {
                break;
            }
            if *remaining < nwords as u128 {
                return (next, pred, true);
            }
            *remaining -= nwords as u128;
            for k in 0..nwords {
                let rot = prev.rotated_word(x as usize, k);
                let fresh = rot & !next.words()[k];
                if fresh == 0 {
                    continue;
                }
                next.words_mut()[k] |= fresh;
                count += fresh.count_ones() as usize;
                let mut bits = fresh;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    pred[(k << 6) | b] = i as u32;
                }
            }
        }
        (next, pred, false)
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// Residues reached after all rounds (partial if truncated).
    pub fn reached(&self) -> Option<ResidueSet> {
        let m = PrimeModulus::new(self.p).ok()?;
        (self.layers.len() == self.rounds + 1)
            .then(|| ResidueSet::from_residues(m, self.layers[self.rounds].iter().map(|x| x as u64)))
    }

    pub fn contains(&self, target: Residue) -> bool {
        self.layers.len() == self.rounds + 1 && self.layers[self.rounds].contains(target as usize)
    }

    /// Decomposes `target` into one base value followed by `rounds` step
    /// values, in the order they were added.
    pub fn trace(&self, target: Residue) -> Option<Vec<Residue>> {
        if !self.contains(target) {
            return None;
        }
        let mut terms = Vec::with_capacity(self.rounds + 1);
        let mut r = target;
        for pred in self.preds.iter().rev() {
            let x = self.step[pred[r as usize] as usize];
            terms.push(x);
            r = (r + self.p - x) % self.p;
        }
        debug_assert!(self.layers[0].contains(r as usize));
        terms.push(r);
        terms.reverse();
        Some(terms)
    }
}

/// Solver for `Σ_{i=1}^{k} m_i!·n_i! ≡ λ` with all indices `<= M`.
#[derive(Debug, Clone)]
pub struct KTermSolver {
    modulus: PrimeModulus,
    bound: u64,
    index: FactorialIndex,
    reach: Reachability,
}

impl KTermSolver {
    pub fn new(m: &PrimeModulus, k: u32, bound: u64, budget: u128) -> Result<Self> {
        Self::with_cap(m, k, bound, budget, DEFAULT_SOLVER_CAP)
    }

    pub fn with_cap(m: &PrimeModulus, k: u32, bound: u64, budget: u128, cap: u64) -> Result<Self> {
        check_solver_params(m, k, bound, cap)?;
        let index = FactorialIndex::new(m, bound)?;
        let products = product_set_within(&index.set, &index.set, u128::MAX)?;
        let reach = Reachability::build(&products, &products, k as usize - 1, budget);
        Ok(Self {
            modulus: *m,
            bound,
            index,
            reach,
        })
    }

    pub fn reachability(&self) -> &Reachability {
        &self.reach
    }

    pub fn solve(&self, lambda: Residue) -> Outcome {
        let lambda = self.modulus.reduce(lambda);
        let Some(terms) = self.reach.trace(lambda) else {
            return Outcome::NotFound(if self.reach.is_truncated() {
                NotFound::BudgetTruncated
            } else {
                NotFound::Exhausted
            });
        };
        let witnesses = terms
            .iter()
            .map(|&v| {
                let (a, b) = self.index.split_product(v).expect("product values split");
                Witness::Pair(a, b)
            })
            .collect();
        Outcome::Found(Certificate {
            shape: Shape::KTermProduct,
            p: self.modulus.p(),
            lambda,
            bound: self.bound,
            c: None,
            witnesses,
        })
    }
}

/// Solver for `m!·n! + Σ_{i=1}^{k} n_i! ≡ λ` with all indices `<= M`: the
/// k-fold factorial sumset is met against the product set.
#[derive(Debug, Clone)]
pub struct ProductPlusFactorialsSolver {
    modulus: PrimeModulus,
    bound: u64,
    index: FactorialIndex,
    products: Vec<Residue>,
    reach: Reachability,
}

impl ProductPlusFactorialsSolver {
    pub fn new(m: &PrimeModulus, k: u32, bound: u64, budget: u128) -> Result<Self> {
        Self::with_cap(m, k, bound, budget, DEFAULT_SOLVER_CAP)
    }

    pub fn with_cap(m: &PrimeModulus, k: u32, bound: u64, budget: u128, cap: u64) -> Result<Self> {
        check_solver_params(m, k, bound, cap)?;
        let index = FactorialIndex::new(m, bound)?;
        let products = product_set_within(&index.set, &index.set, u128::MAX)?.to_sorted_vec();
        let reach = Reachability::build(&index.set, &index.set, k as usize - 1, budget);
        Ok(Self {
            modulus: *m,
            bound,
            index,
            products,
            reach,
        })
    }

    pub fn reachability(&self) -> &Reachability {
        &self.reach
    }

    pub fn solve(&self, lambda: Residue) -> Outcome {
        let md = self.modulus;
        let lambda = md.reduce(lambda);
        let hit = self
            .products
            .iter()
            .find_map(|&x| self.reach.trace(md.sub(lambda, x)).map(|terms| (x, terms)));
        let Some((x, terms)) = hit else {
            return Outcome::NotFound(if self.reach.is_truncated() {
                NotFound::BudgetTruncated
            } else {
                NotFound::Exhausted
            });
        };
        let (a, b) = self.index.split_product(x).expect("product values split");
        let mut witnesses = vec![Witness::Pair(a, b)];
        witnesses.extend(terms.iter().map(|&v| Witness::Single(self.index.index_of(v))));
        Outcome::Found(Certificate {
            shape: Shape::ProductPlusFactorials,
            p: md.p(),
            lambda,
            bound: self.bound,
            c: None,
            witnesses,
        })
    }
}

/// One-shot k-term product search.
pub fn k_term_product_rep(
    m: &PrimeModulus,
    lambda: Residue,
    k: u32,
    bound: u64,
    budget: u128,
) -> Result<Outcome> {
    Ok(KTermSolver::new(m, k, bound, budget)?.solve(lambda))
}

/// One-shot product-plus-factorials search.
pub fn product_plus_factorials_rep(
    m: &PrimeModulus,
    lambda: Residue,
    k: u32,
    bound: u64,
    budget: u128,
) -> Result<Outcome> {
    Ok(ProductPlusFactorialsSolver::new(m, k, bound, budget)?.solve(lambda))
}

/// Outcome of scanning coefficients for the `x!+y!+c·z!+c·t!` cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpSearch {
    pub bound: u64,
    /// Smallest covering coefficient, if one was found in range.
    pub c: Option<u64>,
    /// `(c, missed residues)` for every coefficient tried, ascending.
    pub misses: Vec<(u64, usize)>,
}

fn factorial_values(m: &PrimeModulus, bound: u64) -> Result<ResidueSet> {
    Ok(FactorialIndex::new(m, bound)?.set)
}

fn scaled(set: &ResidueSet, c: u64) -> ResidueSet {
    let m = set.modulus();
    ResidueSet::from_residues(m, set.iter().map(|x| m.mul(x, m.reduce(c))))
}

fn check_cp_bound(m: &PrimeModulus, bound: u64) -> Result<()> {
    if bound == 0 || bound > m.p() {
        return Err(Error::InvalidParameter {
            name: "M",
            reason: "index bound must satisfy 1 <= M <= p",
        });
    }
    Ok(())
}

/// Scans `c = 1, 2, …, max_c` for the first coefficient whose
/// `(F+F) + c·(F+F)` covers every residue, `F` the factorial values up to `M`.
pub fn cp_search(m: &PrimeModulus, bound: u64, max_c: u64) -> Result<CpSearch> {
    check_cp_bound(m, bound)?;
    let f = factorial_values(m, bound)?;
    let g = sumset(&f, &f)?;
    let mut misses = Vec::new();
    for c in 1..=max_c {
        let covered = sumset(&g, &scaled(&g, c))?.len();
        let miss = m.p() as usize - covered;
        misses.push((c, miss));
        if miss == 0 {
            return Ok(CpSearch {
                bound,
                c: Some(c),
                misses,
            });
        }
    }
    Ok(CpSearch {
        bound,
        c: None,
        misses,
    })
}

/// Finds `x, y, z, t <= M` with `x!+y!+c(z!+t!) ≡ λ` for a fixed `c`.
#[derive(Debug, Clone)]
pub struct CpSolver {
    modulus: PrimeModulus,
    bound: u64,
    c: u64,
    index: FactorialIndex,
    pair_sums: Vec<Residue>,
    pair_set: ResidueSet,
}

impl CpSolver {
    pub fn new(m: &PrimeModulus, bound: u64, c: u64) -> Result<Self> {
        check_cp_bound(m, bound)?;
        let index = FactorialIndex::new(m, bound)?;
        let pair_set = sumset(&index.set, &index.set)?;
        Ok(Self {
            modulus: *m,
            bound,
            c,
            pair_sums: pair_set.to_sorted_vec(),
            pair_set,
            index,
        })
    }

    pub fn solve(&self, lambda: Residue) -> Option<Certificate> {
        let m = &self.modulus;
        let lambda = m.reduce(lambda);
        let cc = m.reduce(self.c);
        let (first, second) = self.pair_sums.iter().find_map(|&second| {
            let first = m.sub(lambda, m.mul(cc, second));
            self.pair_set.contains(first).then_some((first, second))
        })?;
        let (x, y) = self.index.split_sum(first)?;
        let (z, t) = self.index.split_sum(second)?;
        Some(Certificate {
            shape: Shape::CpForm,
            p: m.p(),
            lambda,
            bound: self.bound,
            c: Some(self.c),
            witnesses: vec![Witness::Pair(x, y), Witness::Pair(z, t)],
        })
    }
}

/// One-shot [`CpSolver`] query.
pub fn cp_certificate(m: &PrimeModulus, bound: u64, c: u64, lambda: Residue) -> Result<Option<Certificate>> {
    Ok(CpSolver::new(m, bound, c)?.solve(lambda))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoverageShape {
    TwoProduct,
    KTermProduct { k: u32, bound: u64 },
    ProductPlusFactorials { k: u32, bound: u64 },
    CpForm { c: u64, bound: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coverage {
    pub p: u64,
    pub covered: usize,
    pub misses: Vec<Residue>,
}

impl Coverage {
    pub fn fraction(&self) -> f64 {
        self.covered as f64 / self.p as f64
    }

    pub fn is_complete(&self) -> bool {
        self.misses.is_empty()
    }
}

/// The full set of residues a shape reaches, by plain iterated sumsets.
/// Shares no code with [`Reachability`].
pub fn reachable_set(m: &PrimeModulus, shape: CoverageShape) -> Result<ResidueSet> {
    let iterate = |base: ResidueSet, step: &ResidueSet, rounds: u32| -> Result<ResidueSet> {
        let mut acc = base;
        for _ in 0..rounds {
            acc = sumset(&acc, step)?;
        }
        Ok(acc)
    };
    match shape {
        CoverageShape::TwoProduct => {
            if m.p() < 3 {
                return Err(Error::InvalidParameter {
                    name: "p",
                    reason: "two-product covers need p >= 3",
                });
            }
            let w = wilson_set(m);
            sumset(&w, &w)
        }
        CoverageShape::KTermProduct { k, bound } => {
            check_solver_params(m, k, bound, u64::MAX)?;
            let f = factorial_values(m, bound)?;
            let prod = product_set_within(&f, &f, u128::MAX)?;
            iterate(prod.clone(), &prod, k - 1)
        }
        CoverageShape::ProductPlusFactorials { k, bound } => {
            check_solver_params(m, k, bound, u64::MAX)?;
            let f = factorial_values(m, bound)?;
            let prod = product_set_within(&f, &f, u128::MAX)?;
            iterate(prod, &f, k)
        }
        CoverageShape::CpForm { c, bound } => {
            check_cp_bound(m, bound)?;
            let f = factorial_values(m, bound)?;
            let g = sumset(&f, &f)?;
            sumset(&g, &scaled(&g, c))
        }
    }
}

/// Fraction of residues a shape represents, plus the residues it misses.
pub fn coverage_report(m: &PrimeModulus, shape: CoverageShape, cap: u64) -> Result<Coverage> {
    if m.p() > cap {
        return Err(Error::CapExceeded {
            what: "coverage scan",
            p: m.p(),
            cap,
        });
    }
    let reached = reachable_set(m, shape)?;
    Ok(Coverage {
        p: m.p(),
        covered: reached.len(),
        misses: (0..m.p()).filter(|&x| !reached.contains(x)).collect(),
    })
}
