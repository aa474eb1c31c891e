//! Execution mode for data-parallel loops.
//!
//! `Parallel` uses the rayon global pool (or whichever pool the caller
//! installed). Built without the `parallel` feature it runs sequentially.
//! Results never depend on the mode: every index is computed independently
//! and reductions are order-insensitive integer sums or ordered collects.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// `f(i)` for i in 0..n, in index order.
    pub fn map_range<T, F>(self, n: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    /// Number of i in 0..n with `f(i)` true.
    pub fn count_range<F>(self, n: u64, f: F) -> u64
    where
        F: Fn(u64) -> bool + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().filter(|&i| f(i)).count() as u64
            }
            _ => (0..n).filter(|&i| f(i)).count() as u64,
        }
    }

    /// `f` over a slice, preserving order.
    pub fn map_items<I, T, F>(self, items: &[I], f: F) -> Vec<T>
    where
        I: Sync,
        T: Send,
        F: Fn(&I) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }
}
