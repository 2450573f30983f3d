//! Data-parallel execution of independent trials.
//!
//! With the `parallel` feature (on by default) trials are spread over the
//! rayon pool; without it, or with [`Execution::Sequential`], they run in
//! order on the calling thread. Accumulators are merged by an associative,
//! commutative reduction so both paths give identical results.

use std::ops::Range;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run trials in parallel.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Folds `fold` over every index in `range` and merges the partial results.
pub fn fold_range<A, I, F, R>(exec: Execution, range: Range<u64>, identity: I, fold: F, reduce: R) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, u64) -> A + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            range
                .into_par_iter()
                .fold(&identity, &fold)
                .reduce(&identity, &reduce)
        }
        _ => reduce(identity(), range.fold(identity(), fold)),
    }
}
