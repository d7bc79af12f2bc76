use qpa_core::Executor;
use rayon::prelude::*;

use crate::error::CliError;

/// Work-stealing executor; results come back in index order, so output never depends on
/// the thread count.
pub struct RayonExecutor {
    pool: rayon::ThreadPool,
}

impl RayonExecutor {
    /// `0` lets rayon pick the number of threads.
    pub fn with_threads(threads: usize) -> Result<Self, CliError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Io(format!("cannot start worker threads: {e}")))?;
        Ok(Self { pool })
    }

    /// Honors `QPA_THREADS` (unset or `0` = automatic).
    pub fn from_env() -> Result<Self, CliError> {
        let threads = match std::env::var("QPA_THREADS") {
            Ok(v) if !v.trim().is_empty() => v
                .trim()
                .parse::<usize>()
                .map_err(|_| CliError::Parse(format!("QPA_THREADS must be a non-negative integer, got `{v}`")))?,
            _ => 0,
        };
        Self::with_threads(threads)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for RayonExecutor {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}
