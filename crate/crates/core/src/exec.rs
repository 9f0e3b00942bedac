//! Execution strategy: data-parallel map with a sequential fallback.
//!
//! Every parallelizable loop in the crate funnels through [`map_indexed`],
//! which uses a rayon pool when the `parallel` feature (default) is enabled
//! and plain iteration otherwise. Output order always matches index order, so
//! downstream reductions are strategy-independent. [`map_indexed_seq`] is
//! available unconditionally for benchmarking the two paths against each
//! other.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n` preserving index order, in parallel when the
/// `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Maps `f` over `0..n` preserving index order (sequential build).
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_indexed_seq(n, f)
}

/// Sequential counterpart of [`map_indexed`]; always available so callers can
/// benchmark or cross-check the parallel path.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Whether [`map_indexed`] dispatches to the rayon pool in this build.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_in_order() {
        let f = |i: usize| (i * i) as u64;
        assert_eq!(map_indexed(1000, f), map_indexed_seq(1000, f));
    }

    #[test]
    fn empty_map_is_empty() {
        let v: Vec<u8> = map_indexed(0, |_| 0);
        assert!(v.is_empty());
    }
}
