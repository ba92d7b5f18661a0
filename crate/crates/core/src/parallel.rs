//! Data-parallel helpers.
//!
//! With the `parallel` feature these run on the rayon pool; without it they
//! fall back to plain iterators. Both paths visit items in index order when
//! collecting, so outputs do not depend on the feature.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `op` over `0..n` and collects the results in index order.
pub fn map_indexed<R, F>(n: usize, op: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(op).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(op).collect()
    }
}

/// Maps `op` over a slice and collects the results in order.
pub fn map_slice<T, R, F>(items: &[T], op: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(op).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(op).collect()
    }
}

/// Serial counterpart of [`map_indexed`], always available. Used by tests and
/// benches that compare the two execution paths.
pub fn map_indexed_serial<R, F>(n: usize, op: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..n).map(op).collect()
}

/// True when the crate was built with the rayon backend.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
