//! One-dimensional maximization on a closed interval.

use alloc::vec::Vec;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// A maximizer and the value attained there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub value: f64,
    pub argmax: f64,
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
///
/// The endpoints are compared against the interior optimum, so monotone objectives
/// return the correct boundary.
pub fn golden_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Optimum {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc >= fd {
        Optimum { value: fc, argmax: c }
    } else {
        Optimum { value: fd, argmax: d }
    };
    for x in [lo, hi] {
        let v = f(x);
        if v > best.value {
            best = Optimum { value: v, argmax: x };
        }
    }
    best
}

/// Uniform grid of `n ≥ 2` points from `lo` to `hi` inclusive.
pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect()
}

/// Maximum of precomputed grid values, refined by golden section in the neighbouring cells.
///
/// `values[i]` must equal `f(xs[i])`; refinement only replaces the grid optimum when it
/// improves on it, so the result is never worse than the best grid point.
pub fn grid_then_refine(xs: &[f64], values: &[f64], f: impl FnMut(f64) -> f64, tol: f64) -> Optimum {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    let grid_opt = Optimum {
        value: values[best],
        argmax: xs[best],
    };
    let lo = xs[best.saturating_sub(1)];
    let hi = xs[(best + 1).min(xs.len() - 1)];
    if hi <= lo {
        return grid_opt;
    }
    let refined = golden_max(f, lo, hi, tol);
    if refined.value > grid_opt.value {
        refined
    } else {
        grid_opt
    }
}

/// Golden-section minimum of a unimodal `f` on `[lo, hi]`.
pub fn golden_min(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Optimum {
    let o = golden_max(|x| -f(x), lo, hi, tol);
    Optimum {
        value: -o.value,
        argmax: o.argmax,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_maximum() {
        let o = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-10);
        assert!((o.argmax - 0.3).abs() < 1e-8);
        assert!(o.value.abs() < 1e-15);
    }

    #[test]
    fn monotone_objective_hits_endpoint() {
        let o = golden_max(|x| x, 0.0, 1.0, 1e-10);
        assert_eq!(o.argmax, 1.0);
        assert_eq!(o.value, 1.0);
        let o = golden_max(|x| -x, 0.0, 1.0, 1e-10);
        assert_eq!(o.argmax, 0.0);
    }

    #[test]
    fn grid_has_exact_endpoints() {
        let g = grid(0.0, 0.7, 8);
        assert_eq!(g.len(), 8);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[7], 0.7);
    }

    #[test]
    fn refinement_never_loses_to_grid() {
        let f = |x: f64| libm::sin(7.0 * x) - x;
        let xs = grid(0.0, 1.0, 11);
        let vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let o = grid_then_refine(&xs, &vs, f, 1e-12);
        assert!(vs.iter().all(|&v| v <= o.value));
        let dense = grid(0.0, 1.0, 100_001);
        let best = dense.iter().map(|&x| f(x)).fold(f64::NEG_INFINITY, f64::max);
        assert!((o.value - best).abs() < 1e-9);
    }

    #[test]
    fn golden_min_mirrors_max() {
        let o = golden_min(|x| (x - 2.0) * (x - 2.0) + 1.0, 0.0, 5.0, 1e-10);
        assert!((o.argmax - 2.0).abs() < 1e-6);
        assert!((o.value - 1.0).abs() < 1e-14);
    }
}
