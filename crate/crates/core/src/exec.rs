//! Data-parallel execution over independent work items (typically bidegrees).
//!
//! With the `parallel` feature the work is spread over a rayon pool; without
//! it every call runs sequentially and [`Parallelism::Parallel`] is accepted
//! but ignored.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

impl Parallelism {
    /// Whether this build can actually run work in parallel.
    pub fn available() -> bool {
        cfg!(feature = "parallel")
    }

    pub fn effective(self) -> Parallelism {
        if Self::available() {
            self
        } else {
            Parallelism::Sequential
        }
    }
}

/// Maps `f` over `items`, preserving order.
pub fn par_map<T, U, F>(mode: Parallelism, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match mode.effective() {
        Parallelism::Sequential => items.iter().map(f).collect(),
        Parallelism::Parallel => parallel_map(items, f),
    }
}

/// Like [`par_map`] but stops at the first error (in item order).
pub fn try_par_map<T, U, E, F>(mode: Parallelism, items: &[T], f: F) -> Result<Vec<U>, E>
where
    T: Sync,
    U: Send,
    E: Send,
    F: Fn(&T) -> Result<U, E> + Sync + Send,
{
    par_map(mode, items, f).into_iter().collect()
}

#[cfg(feature = "parallel")]
fn parallel_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Sizes the global worker pool. Returns `false` when the pool was already
/// initialised or the build is sequential.
pub fn configure_threads(jobs: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        let items: Vec<u64> = (0..200).collect();
        let a = par_map(Parallelism::Sequential, &items, |x| x * x + 1);
        let b = par_map(Parallelism::Parallel, &items, |x| x * x + 1);
        assert_eq!(a, b);
    }

    #[test]
    fn first_error_wins() {
        let items: Vec<i32> = (0..50).collect();
        let r: Result<Vec<i32>, i32> = try_par_map(Parallelism::Parallel, &items, |&x| {
            if x % 7 == 6 {
                Err(x)
            } else {
                Ok(x)
            }
        });
        assert_eq!(r, Err(6));
    }
}
