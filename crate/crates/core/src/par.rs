//! Chunked map helpers. With the `parallel` feature the chunks run on the rayon
//! pool; results always come back in chunk order so merges are reproducible.

use alloc::vec::Vec;
use core::ops::Range;

pub(crate) fn chunks(range: Range<u64>, chunk: u64) -> Vec<Range<u64>> {
    let chunk = chunk.max(1);
    let mut out = Vec::new();
    let mut lo = range.start;
    while lo < range.end {
        let hi = lo.saturating_add(chunk).min(range.end);
        out.push(lo..hi);
        lo = hi;
    }
    out
}

#[cfg(feature = "parallel")]
pub(crate) fn map_ordered<I, T, F>(parts: Vec<I>, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Sync + Send,
{
    use rayon::prelude::*;
    parts.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_ordered<I, T, F>(parts: Vec<I>, f: F) -> Vec<T>
where
    F: Fn(I) -> T,
{
    parts.into_iter().map(f).collect()
}
