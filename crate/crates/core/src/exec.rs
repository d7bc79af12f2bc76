//! Pluggable execution of independent, indexed jobs.
//!
//! Ensemble averages over hash-family members and exponent-curve rows are embarrassingly
//! parallel. The core crate only ships [`Sequential`]; the CLI provides a thread-pool
//! executor. Results always come back in index order and are reduced with
//! [`crate::sum::pairwise_sum`], so the executor never changes a reported value.

use alloc::vec::Vec;

pub trait Executor: Sync {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

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
