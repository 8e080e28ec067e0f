//! Chunked map over index ranges, parallel when the `parallel` feature is on.
//!
//! Results are concatenated in chunk order, so the parallel and sequential
//! paths return bit-identical output for the same closure. Callers must keep
//! the closure pure (no RNG, no shared state) for that guarantee to mean
//! anything; every scan in this crate draws its randomness before entering
//! the loop.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

fn chunk_bounds(total: u64, chunk: u64) -> Vec<(u64, u64)> {
    assert!(chunk > 0);
    let mut out = vec![];
    let mut start = 0;
    while start < total {
        let end = (start + chunk).min(total);
        out.push((start, end));
        start = end;
    }
    out
}

/// Applies `f` to [start, end) ranges covering 0..total and concatenates the
/// per-chunk results in order.
pub fn map_ranges<T, F>(total: u64, chunk: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> Vec<T> + Sync,
{
    let bounds = chunk_bounds(total, chunk);
    #[cfg(feature = "parallel")]
    {
        bounds
            .into_par_iter()
            .map(|(s, e)| f(s, e))
            .collect::<Vec<Vec<T>>>()
            .into_iter()
            .flatten()
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_ranges_sequential(total, chunk, f)
    }
}

/// Always-sequential variant, kept callable regardless of features so the two
/// paths can be benchmarked against each other.
pub fn map_ranges_sequential<T, F>(total: u64, chunk: u64, f: F) -> Vec<T>
where
    F: Fn(u64, u64) -> Vec<T>,
{
    chunk_bounds(total, chunk)
        .into_iter()
        .flat_map(|(s, e)| f(s, e))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_equals_sequential() {
        let f = |s: u64, e: u64| (s..e).map(|i| i * i % 97).collect::<Vec<u64>>();
        let a = map_ranges(10_000, 301, f);
        let b = map_ranges_sequential(10_000, 301, f);
        assert_eq!(a, b);
        assert_eq!(a.len(), 10_000);
        assert_eq!(a[5000], 5000 * 5000 % 97);
    }

    #[test]
    fn empty_and_single_chunk() {
        let f = |s: u64, e: u64| (s..e).collect::<Vec<u64>>();
        assert!(map_ranges(0, 10, f).is_empty());
        let one = map_ranges(7, 100, f);
        assert_eq!(one, (0..7).collect::<Vec<u64>>());
    }
}
