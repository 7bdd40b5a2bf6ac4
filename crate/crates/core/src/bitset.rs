//! Fixed-length bit array over `[0, len)`, sized for residue domains.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bitset {
    words: Vec<u64>,
    len: usize,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    /// Sets bit `i`, returning whether it was previously clear.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        let w = &mut self.words[i >> 6];
        let mask = 1u64 << (i & 63);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i >> 6] &= !(1u64 << (i & 63));
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_full(&self) -> bool {
        self.count_ones() == self.len
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn union_with(&mut self, other: &Bitset) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            core::iter::from_fn(move || {
                (rest != 0).then(|| {
                    let bit = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    (wi << 6) | bit
                })
            })
        })
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    /// Word `k` of this set cyclically rotated up by `shift`, i.e. the word of
    /// `{(i + shift) mod len : i ∈ self}` covering bits `64k .. 64k+63`.
    pub(crate) fn rotated_word(&self, shift: usize, k: usize) -> u64 {
        let mut out = 0u64;
        let lo = k << 6;
        let hi = (lo + 64).min(self.len);
        // source range for target bits [lo, hi) is [lo - shift, hi - shift) mod len,
        // copied in at most two contiguous runs.
        let mut t = lo;
        while t < hi {
            let src = (t + self.len - shift) % self.len;
            let run = (hi - t).min(self.len - src);
            out |= self.extract(src, run) << (t - lo);
            t += run;
        }
        out
    }

    /// Bits `[start, start + n)` as the low bits of a word (`n <= 64`).
    fn extract(&self, start: usize, n: usize) -> u64 {
        if n == 0 {
            return 0;
        }
        let (wi, off) = (start >> 6, start & 63);
        let mut v = self.words[wi] >> off;
        if off != 0 && off + n > 64 {
            v |= self.words[wi + 1] << (64 - off);
        }
        if n < 64 {
            v &= (1u64 << n) - 1;
        }
        v
    }
}

impl Bitset {
    pub fn from_indices(len: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Self::new(len);
        for i in items {
            b.insert(i);
        }
        b
    }
}
