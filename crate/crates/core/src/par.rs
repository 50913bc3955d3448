//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) the order-preserving `map`
//! runs on rayon; without it the same API runs sequentially. `map_seq` is
//! always sequential, so benchmarks can compare both code paths in one
//! build. Results are collected in input order either way, keeping every
//! sweep deterministic and independent of the thread count.

/// Order-preserving map over a slice, parallel when the `parallel`
/// feature is enabled.
#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Always-sequential variant of [`map`], used as the benchmark baseline.
pub fn map_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Runs `f` in a rayon pool with the given thread count. `None` keeps the
/// global default; without the `parallel` feature the closure just runs.
#[cfg(feature = "parallel")]
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R>(_threads: Option<usize>, f: impl FnOnce() -> R) -> R {
    f()
}
