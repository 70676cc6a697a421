//! Data-parallel map/reduce over index ranges.
//!
//! With the `parallel` feature the work is spread over the rayon pool;
//! without it every call runs sequentially. Callers must supply an
//! associative `reduce` so results do not depend on how indices are split.

/// How a batch of independent work items is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

pub(crate) fn map_reduce<R, M, I, F>(len: usize, exec: Execution, map: M, identity: I, reduce: F) -> R
where
    R: Send,
    M: Fn(usize) -> R + Sync + Send,
    I: Fn() -> R + Sync + Send,
    F: Fn(R, R) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..len).into_par_iter().map(map).reduce(identity, reduce)
        }
        _ => (0..len).map(map).fold(identity(), reduce),
    }
}
