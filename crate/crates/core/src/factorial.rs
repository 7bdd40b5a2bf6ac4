//! `n! mod p` over index windows.
//!
//! A window covers indices `L+1 ..= L+N`. Values are produced by the
//! three-phase block scheme: block products, a sequential scan over the block
//! boundaries, then an independent fill of every block. Modular products are
//! exact, so any block count gives bit-identical output.

use alloc::vec::Vec;

use crate::modular::{PrimeModulus, Residue};
use crate::par;
use crate::{Error, Result};

/// Default checkpoint stride in indices.
pub const DEFAULT_STRIDE: u64 = 1 << 20;

/// Checkpoints whose index lies within this distance of `0` or `p-1` are
/// recomputed in full when used to resume.
pub const DEFAULT_SPOT_CHECK: u64 = 1 << 20;

const BLOCK_MIN: u64 = 1 << 14;

/// `(n, n! mod p)` plus an integrity word over `(p, n, value)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FactorialCheckpoint {
    pub p: u64,
    pub n: u64,
    pub value: Residue,
    checksum: u64,
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn checksum_of(p: u64, n: u64, value: u64) -> u64 {
    mix(p ^ mix(n ^ mix(value ^ 0x6661_636c_6162)))
}

impl FactorialCheckpoint {
    pub fn new(p: u64, n: u64, value: Residue) -> Self {
        Self {
            p,
            n,
            value,
            checksum: checksum_of(p, n, value),
        }
    }

    /// Rebuilds a checkpoint read from storage, rejecting a bad integrity word.
    pub fn from_parts(p: u64, n: u64, value: Residue, checksum: u64) -> Result<Self> {
        let cp = Self::new(p, n, value);
        if cp.checksum != checksum {
            return Err(Error::CorruptCheckpoint {
                n,
                reason: "checksum mismatch",
            });
        }
        Ok(cp)
    }

    pub fn checksum(&self) -> u64 {
        self.checksum
    }

    /// Cheap consistency test against the modulus. Recomputes the value when
    /// `n` or `p-1-n` is at most `limit`, using `n!·(p-1-n)! ≡ (-1)^(p-n)` on
    /// the far side.
    pub fn spot_check(&self, m: &PrimeModulus, limit: u64) -> Result<()> {
        let bad = |reason| Err(Error::CorruptCheckpoint { n: self.n, reason });
        if self.p != m.p() {
            return bad("checkpoint belongs to a different modulus");
        }
        if self.checksum != checksum_of(self.p, self.n, self.value) {
            return bad("checksum mismatch");
        }
        if self.value >= m.p() {
            return bad("value is not reduced");
        }
        if self.n >= m.p() {
            return if self.value == 0 {
                Ok(())
            } else {
                bad("n >= p but value is nonzero")
            };
        }
        if self.value == 0 {
            return bad("n < p but value is zero");
        }
        let far = m.p() - 1 - self.n;
        if self.n <= limit {
            if factorial_mod(self.n, m) != self.value {
                return bad("value differs from recomputation");
            }
        } else if far <= limit {
            let sign = if (m.p() - self.n).is_multiple_of(2) { 1 } else { m.p() - 1 };
            if m.mul(self.value, factorial_mod(far, m)) != sign % m.p() {
                return bad("value fails the Wilson reflection check");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowOptions {
    /// Permit windows reaching `n >= p`, whose values are all zero there.
    pub allow_zero_tail: bool,
    pub checkpoint_stride: u64,
    /// Number of blocks for the three-phase evaluation; 0 picks by size.
    pub blocks: usize,
    pub spot_check_limit: u64,
}

impl Default for WindowOptions {
    fn default() -> Self {
        Self {
            allow_zero_tail: false,
            checkpoint_stride: DEFAULT_STRIDE,
            blocks: 0,
            spot_check_limit: DEFAULT_SPOT_CHECK,
        }
    }
}

/// The values `n! mod p` for `n = L+1 ..= L+N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorialWindow {
    modulus: PrimeModulus,
    start: u64,
    values: Vec<Residue>,
    checkpoints: Vec<FactorialCheckpoint>,
}

impl FactorialWindow {
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    /// The offset `L`; the first index is `L+1`.
    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Residue] {
        &self.values
    }

    /// `n! mod p` for an index inside the window.
    pub fn get(&self, n: u64) -> Option<Residue> {
        let i = n.checked_sub(self.start + 1)?;
        self.values.get(usize::try_from(i).ok()?).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Residue)> + '_ {
        (self.start + 1..).zip(self.values.iter().copied())
    }

    pub fn checkpoints(&self) -> &[FactorialCheckpoint] {
        &self.checkpoints
    }

    /// Checkpoint at the last index, suitable for resuming the next window.
    pub fn end_checkpoint(&self) -> FactorialCheckpoint {
        let n = self.start + self.len();
        FactorialCheckpoint::new(self.modulus.p(), n, *self.values.last().unwrap())
    }

    /// Index of the first adjacent pair violating `v(n+1) = v(n)·(n+1)`.
    pub fn recurrence_violation(&self) -> Option<u64> {
        let m = self.modulus;
        self.iter()
            .zip(self.iter().skip(1))
            .find(|((_, a), (n1, b))| m.mul(*a, m.reduce(*n1)) != *b)
            .map(|((n, _), _)| n)
    }
}

/// Product of `k mod p` over `k ∈ [lo, hi)`.
fn range_product(m: &PrimeModulus, lo: u64, hi: u64) -> Residue {
    if lo >= hi {
        return 1 % m.p();
    }
    if lo.div_ceil(m.p()).saturating_mul(m.p()) < hi {
        // some factor is a multiple of p
        return 0;
    }
    (lo..hi).fold(1 % m.p(), |acc, k| m.mul(acc, m.reduce(k)))
}

fn block_count(len: u64, requested: usize) -> u64 {
    if requested > 0 {
        return (requested as u64).clamp(1, len.max(1));
    }
    (len / BLOCK_MIN).clamp(1, 256)
}

/// Product of `k mod p` over `[lo, hi)` using block reduction.
fn blocked_product(m: &PrimeModulus, lo: u64, hi: u64, blocks: usize) -> Residue {
    let len = hi.saturating_sub(lo);
    let parts = par::chunks(lo..hi, len.div_ceil(block_count(len, blocks)));
    par::map_ordered(parts, |r| range_product(m, r.start, r.end))
        .into_iter()
        .fold(1 % m.p(), |acc, x| m.mul(acc, x))
}

/// `n! mod p`; `0! = 1` and the value is 0 for every `n >= p`.
pub fn factorial_mod(n: u64, m: &PrimeModulus) -> Residue {
    if n >= m.p() {
        return 0;
    }
    blocked_product(m, 1, n + 1, 0)
}

/// `n! mod p` for `n = L+1 ..= L+N`, optionally resuming from a checkpoint.
pub fn factorial_range(
    start: u64,
    len: u64,
    m: &PrimeModulus,
    resume: Option<&FactorialCheckpoint>,
    opts: &WindowOptions,
) -> Result<FactorialWindow> {
    if len == 0 {
        return Err(Error::InvalidParameter {
            name: "N",
            reason: "window length must be at least 1",
        });
    }
    let end = start.checked_add(len).ok_or(Error::InvalidParameter {
        name: "L",
        reason: "window end overflows",
    })?;
    if !opts.allow_zero_tail && end >= m.p() {
        return Err(Error::WindowCrossesModulus {
            start,
            len,
            p: m.p(),
        });
    }
    if opts.checkpoint_stride == 0 {
        return Err(Error::InvalidParameter {
            name: "stride",
            reason: "checkpoint stride must be positive",
        });
    }

    // start! from the checkpoint (or 0! = 1)
    let (from, from_value) = match resume {
        Some(cp) => {
            if cp.n > start {
                return Err(Error::InvalidParameter {
                    name: "resume",
                    reason: "checkpoint index lies past the window start",
                });
            }
            cp.spot_check(m, opts.spot_check_limit)?;
            (cp.n, cp.value)
        }
        None => (0, 1 % m.p()),
    };
    let prefix = m.mul(from_value, blocked_product(m, from + 1, start + 1, opts.blocks));

    let values = fill_window(m, prefix, start + 1, len, opts.blocks);

    let mut checkpoints = Vec::new();
    let first_multiple = (start + 1).div_ceil(opts.checkpoint_stride) * opts.checkpoint_stride;
    let mut n = first_multiple;
    while n <= end {
        checkpoints.push(FactorialCheckpoint::new(
            m.p(),
            n,
            values[(n - start - 1) as usize],
        ));
        n = match n.checked_add(opts.checkpoint_stride) {
            Some(v) => v,
            None => break,
        };
    }

    let window = FactorialWindow {
        modulus: *m,
        start,
        values,
        checkpoints,
    };
    if let Some(v) = window.get(m.p() - 1) {
        if v != m.p() - 1 {
            return Err(Error::CorruptCheckpoint {
                n: m.p() - 1,
                reason: "Wilson check failed: (p-1)! is not -1",
            });
        }
    }
    Ok(window)
}

/// Values `prefix·first·(first+1)⋯k` for `k = first .. first+len`.
fn fill_window(m: &PrimeModulus, prefix: Residue, first: u64, len: u64, blocks: usize) -> Vec<Residue> {
    let parts = par::chunks(first..first + len, len.div_ceil(block_count(len, blocks)));
    // phase 1: block products
    let block_products = par::map_ordered(parts.clone(), |r| range_product(m, r.start, r.end));
    // phase 2: sequential scan over the block boundaries
    let mut boundary = Vec::with_capacity(parts.len());
    let mut acc = prefix;
    for bp in &block_products {
        boundary.push(acc);
        acc = m.mul(acc, *bp);
    }
    // phase 3: every block fills from its own boundary value
    let jobs: Vec<_> = parts.into_iter().zip(boundary).collect();
    par::map_ordered(jobs, |(r, mut acc)| {
        r.map(|k| {
            acc = m.mul(acc, m.reduce(k));
            acc
        })
        .collect::<Vec<_>>()
    })
    .concat()
}

/// Plain left-to-right evaluation of the same window, used as the reference
/// for the block scheme.
pub fn factorial_range_sequential(start: u64, len: u64, m: &PrimeModulus) -> Vec<Residue> {
    let mut acc = 1 % m.p();
    for k in 1..=start {
        acc = m.mul(acc, m.reduce(k));
    }
    (start + 1..=start + len)
        .map(|k| {
            acc = m.mul(acc, m.reduce(k));
            acc
        })
        .collect()
}
