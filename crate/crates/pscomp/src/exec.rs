//! Batch execution helpers.
//!
//! With the `parallel` feature enabled, `par_map` fans out over rayon's pool;
//! without it the loop runs sequentially. Results are collected in index
//! order either way, so callers see identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
