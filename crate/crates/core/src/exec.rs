//! Execution strategy for independent tasks (points of a configuration, replicates).

use alloc::vec::Vec;

/// Runs `f(0), …, f(n-1)` and returns the results in index order.
///
/// Implementations may run tasks concurrently; callers rely only on the
/// returned order, so results never depend on the number of workers.
pub trait Executor: Sync {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;

    fn workers(&self) -> usize {
        1
    }
}

/// Runs everything on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}
