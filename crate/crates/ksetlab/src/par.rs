//! Thin switch between rayon and sequential execution.
//!
//! With the default `parallel` feature the hot loops fan out over a
//! rayon pool; without it the same code runs sequentially. Results are
//! identical either way because every caller reduces with an order-
//! independent rule (min/max with a canonical tie-break, or a plain
//! index-aligned map).

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// True when the crate was built with the `parallel` feature.
#[must_use]
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

/// Cap the global pool. A no-op for `jobs == 0` (library default) and
/// for builds without the `parallel` feature. Later calls after the
/// pool exists are ignored, which suits a CLI that configures once.
pub fn configure_jobs(jobs: usize) {
    #[cfg(feature = "parallel")]
    {
        if jobs > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
    }
}

/// Run `f` inside a dedicated pool of `threads` workers. Benches use
/// this to compare pool sizes within one process.
#[cfg(feature = "parallel")]
pub fn with_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("pool construction")
        .install(f)
}

pub(crate) fn par_map<T: Sync, R: Send>(
    items: &[T],
    f: impl Fn(&T) -> R + Sync + Send,
) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

pub(crate) fn par_map_range<R: Send>(
    count: usize,
    f: impl Fn(usize) -> R + Sync + Send,
) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}
