//! Thread-pool executor.

use psi_growth_core::exec::Executor;
use rayon::prelude::*;

/// Runs tasks on a dedicated rayon pool; results come back in index order.
pub struct Parallel {
    pool: rayon::ThreadPool,
}

impl Parallel {
    /// A pool of `workers` threads, or one per available core when `None`.
    pub fn new(workers: Option<usize>) -> Result<Self, rayon::ThreadPoolBuildError> {
        let n = workers.unwrap_or_else(default_workers);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build()?;
        Ok(Self { pool })
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

impl Executor for Parallel {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }

    fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_index_order() {
        let exec = Parallel::new(Some(4)).unwrap();
        assert_eq!(exec.workers(), 4);
        let out = exec.map_indexed(1000, |i| i * i);
        assert!(out.iter().enumerate().all(|(i, v)| *v == i * i));
    }
}
