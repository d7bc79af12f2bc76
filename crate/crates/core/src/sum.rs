//! Order-fixed summation.
//!
//! Every reduction in the crate goes through [`pairwise_sum`] so that results do not depend
//! on how the summands were produced (sequentially or by a parallel executor).

const BASE: usize = 8;

/// Pairwise (cascade) summation with a fixed split: left half first, then right half.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= BASE {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Mean via [`pairwise_sum`]; `0.0` for an empty slice.
pub fn pairwise_mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        pairwise_sum(xs) / xs.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn matches_naive_for_exact_values() {
        let xs: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 5050.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
        assert_eq!(pairwise_mean(&[1.0, 2.0, 3.0]), 2.0);
    }

    #[test]
    fn better_than_naive_on_small_increments() {
        let xs: Vec<f64> = core::iter::once(1.0).chain(core::iter::repeat_n(1e-16, 10_000)).collect();
        let s = pairwise_sum(&xs);
        assert!((s - (1.0 + 1e-12)).abs() < 1e-15);
    }
}
