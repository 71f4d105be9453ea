//! Execution strategy for data-parallel loops.
//!
//! Two kinds of loop go through here: per-amplitude kernels inside the state
//! algebra, and per-trial maps in sweeps and branch enumeration. With the
//! `parallel` feature both run on rayon; without it everything is sequential.
//! [`Exec`] lets callers pick the trial-level strategy at runtime so the two
//! can be compared in one build.

use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many amplitudes a kernel always runs sequentially.
pub const PAR_KERNEL_THRESHOLD: usize = 1 << 14;

/// Trial-level execution strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential when the crate is built without `parallel`.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Maps `f` over `0..n`, returning results in index order regardless of
    /// completion order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Builds an amplitude vector of length `len` from an index function.
pub(crate) fn build_amplitudes<F>(len: usize, f: F) -> Vec<Complex64>
where
    F: Fn(usize) -> Complex64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if len >= PAR_KERNEL_THRESHOLD {
        return (0..len).into_par_iter().map(f).collect();
    }
    (0..len).map(f).collect()
}

/// Sum of `f(i)` over `0..len`.
pub(crate) fn sum_indexed<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if len >= PAR_KERNEL_THRESHOLD {
        return (0..len).into_par_iter().map(f).sum();
    }
    (0..len).map(f).sum()
}
