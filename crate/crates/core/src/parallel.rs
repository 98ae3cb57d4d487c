//! Order-preserving data parallelism over index ranges.
//!
//! With the `parallel` feature these run on rayon; without it, or with
//! `jobs == Some(1)`, they run sequentially in index order. Results are
//! identical either way.

/// `(0..n).map(f).collect()`, possibly in parallel, always in index order.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sequential reference for [`map_range`].
pub fn map_range_sequential<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..n).map(f).collect()
}

/// Runs `op` with at most `jobs` worker threads. `None` keeps the global
/// pool; `Some(1)` forces the sequential path.
pub fn with_jobs<R, F>(jobs: Option<usize>, op: F) -> R
where
    R: Send,
    F: FnOnce(bool) -> R + Send,
{
    match jobs {
        Some(1) => op(false),
        #[cfg(feature = "parallel")]
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| op(true)),
            Err(e) => {
                log::warn!("could not build a {k}-thread pool ({e}); running on the global pool");
                op(true)
            }
        },
        #[cfg(not(feature = "parallel"))]
        Some(_) => op(false),
        None => op(cfg!(feature = "parallel")),
    }
}

/// [`map_range`] when `parallel` is set, [`map_range_sequential`] otherwise.
pub fn map_range_with<R, F>(parallel: bool, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    if parallel {
        map_range(n, f)
    } else {
        map_range_sequential(n, f)
    }
}
