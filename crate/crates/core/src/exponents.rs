//! Security exponents of universal₂ hashing and the equivocation rate.
//!
//! * `e_H(R) = max_{0≤s≤1} s (H_{1+s}(A|E) − R)`
//! * `e_{H,q}(R) = max_{0≤s≤1} s/(2−s) (H_{1+s}(A|E) − R)`
//! * `e_{φ,q}(R) = max_{0≤t≤1/2} (−φ(t) − tR) / (2(1−t))`
//! * `e_H(R)/2`, a lower bound on the exponent of `d1'`
//!
//! All exponents are clamped at 0. `R` is in nats per symbol.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exec::{Executor, Sequential};
use crate::optimize::{golden_max, grid, grid_then_refine};
use crate::quantities::PreparedState;
use crate::state::CQState;

pub use crate::optimize::Optimum;

/// Points of the `s`/`t` grids for the non-concave objectives.
pub const GRID_POINTS: usize = 1001;
/// Tolerance of the golden-section refinement in `s`/`t`.
pub const REFINE_TOL: f64 = 1e-10;

pub const CSV_HEADER: &str = "R,e_H,s_star_H,e_H_q,s_star_Hq,e_phi_q,t_star,e_d_lower";

fn clamp(o: Optimum) -> Optimum {
    if o.value > 0.0 {
        o
    } else {
        Optimum { value: 0.0, argmax: 0.0 }
    }
}

fn check_rate(r: f64) -> Result<f64> {
    if r >= 0.0 && r.is_finite() {
        Ok(r)
    } else {
        Err(Error::Domain(format!("rate R = {r} must be finite and ≥ 0")))
    }
}

/// A state with `s·H_{1+s}` and `φ(t)` tabulated once; these do not depend on `R`.
#[derive(Debug, Clone)]
pub struct ExponentSolver<'a> {
    prep: PreparedState<'a>,
    s_grid: Vec<f64>,
    scaled_h: Vec<f64>,
    t_grid: Vec<f64>,
    phi: Vec<f64>,
}

impl<'a> ExponentSolver<'a> {
    pub fn new(state: &'a CQState) -> Result<Self> {
        let prep = PreparedState::new(state)?;
        let s_grid = grid(0.0, 1.0, GRID_POINTS);
        let scaled_h = s_grid.iter().map(|&s| prep.scaled_renyi(s)).collect();
        let t_grid = grid(0.0, 0.5, GRID_POINTS);
        let phi = t_grid.iter().map(|&t| prep.phi(t)).collect::<Result<Vec<f64>>>()?;
        Ok(Self {
            prep,
            s_grid,
            scaled_h,
            t_grid,
            phi,
        })
    }

    pub fn prepared(&self) -> &PreparedState<'a> {
        &self.prep
    }

    /// `e_H(R)` by golden section on the concave objective, endpoints included.
    pub fn e_h(&self, r: f64) -> Result<Optimum> {
        let r = check_rate(r)?;
        Ok(clamp(golden_max(|s| self.prep.scaled_renyi(s) - s * r, 0.0, 1.0, REFINE_TOL)))
    }

    /// `e_{H,q}(R)` by grid search and golden refinement.
    pub fn e_h_q(&self, r: f64) -> Result<Optimum> {
        let r = check_rate(r)?;
        let f = |s: f64, sh: f64| (sh - s * r) / (2.0 - s);
        let values: Vec<f64> = self.s_grid.iter().zip(&self.scaled_h).map(|(&s, &sh)| f(s, sh)).collect();
        let o = grid_then_refine(&self.s_grid, &values, |s| f(s, self.prep.scaled_renyi(s)), REFINE_TOL);
        Ok(clamp(o))
    }

    /// `e_{φ,q}(R)` by grid search over `t ∈ [0, 1/2]` and golden refinement.
    pub fn e_phi_q(&self, r: f64) -> Result<Optimum> {
        let r = check_rate(r)?;
        let f = |t: f64, phi: f64| (-phi - t * r) / (2.0 * (1.0 - t));
        let values: Vec<f64> = self.t_grid.iter().zip(&self.phi).map(|(&t, &p)| f(t, p)).collect();
        let o = grid_then_refine(
            &self.t_grid,
            &values,
            |t| match self.prep.phi(t) {
                Ok(p) => f(t, p),
                Err(_) => f64::NEG_INFINITY,
            },
            REFINE_TOL,
        );
        Ok(clamp(o))
    }

    pub fn row(&self, r: f64) -> Result<ExponentRow> {
        let e_h = self.e_h(r)?;
        Ok(ExponentRow {
            r,
            e_h,
            e_h_q: self.e_h_q(r)?,
            e_phi_q: self.e_phi_q(r)?,
            e_d_lower: e_h.value / 2.0,
        })
    }
}

pub fn exponent_e_h(state: &CQState, r: f64) -> Result<Optimum> {
    let prep = PreparedState::new(state)?;
    let r = check_rate(r)?;
    Ok(clamp(golden_max(|s| prep.scaled_renyi(s) - s * r, 0.0, 1.0, REFINE_TOL)))
}

pub fn exponent_e_h_q(state: &CQState, r: f64) -> Result<Optimum> {
    ExponentSolver::new(state)?.e_h_q(r)
}

pub fn exponent_e_phi_q(state: &CQState, r: f64) -> Result<Optimum> {
    ExponentSolver::new(state)?.e_phi_q(r)
}

/// Exponents at one rate; `argmax` holds `s*` (or `t*` for `e_phi_q`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentRow {
    pub r: f64,
    pub e_h: Optimum,
    pub e_h_q: Optimum,
    pub e_phi_q: Optimum,
    pub e_d_lower: f64,
}

impl ExponentRow {
    /// Worst slack of `e_H ≥ e_{H,q}`, `e_H ≥ e_{φ,q}` and `e_{φ,q} ≥ e_H/2`.
    pub fn comparison_slack(&self) -> f64 {
        (self.e_h.value - self.e_h_q.value)
            .min(self.e_h.value - self.e_phi_q.value)
            .min(self.e_phi_q.value - self.e_d_lower)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentCurve {
    pub rows: Vec<ExponentRow>,
}

/// `steps` uniformly spaced rates from `r_min` to `r_max` inclusive.
pub fn rate_grid(r_min: f64, r_max: f64, steps: usize) -> Result<Vec<f64>> {
    check_rate(r_min)?;
    if r_max.is_nan() || r_max <= r_min || !r_max.is_finite() {
        return Err(Error::Domain(format!("need 0 ≤ R_min < R_max, got [{r_min}, {r_max}]")));
    }
    if steps < 2 {
        return Err(Error::Domain(format!("a sweep needs at least 2 steps, got {steps}")));
    }
    Ok(grid(r_min, r_max, steps))
}

pub fn exponent_curve(state: &CQState, r_min: f64, r_max: f64, steps: usize) -> Result<ExponentCurve> {
    exponent_curve_with(&Sequential, state, r_min, r_max, steps)
}

/// Rows are computed through `exec` and returned in rate order.
pub fn exponent_curve_with<E: Executor>(
    exec: &E,
    state: &CQState,
    r_min: f64,
    r_max: f64,
    steps: usize,
) -> Result<ExponentCurve> {
    let rates = rate_grid(r_min, r_max, steps)?;
    let solver = ExponentSolver::new(state)?;
    let rows = exec
        .map_indexed(rates.len(), |i| solver.row(rates[i]))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(ExponentCurve { rows })
}

/// Decimal rendering with 12 significant digits; `-0` prints as `0`.
pub fn format_fixed(x: f64) -> String {
    if x.is_nan() {
        return String::from("nan");
    }
    if x.is_infinite() {
        return String::from(if x > 0.0 { "inf" } else { "-inf" });
    }
    // exponent after rounding to 12 significant digits, so 0.9999999999999 counts as 1
    let magnitude: i32 = if x == 0.0 {
        0
    } else {
        let sci = format!("{x:.11e}");
        sci[sci.find('e').map_or(sci.len(), |i| i + 1)..].parse().unwrap_or(0)
    };
    let precision = (11 - magnitude).clamp(0, 17) as usize;
    let s = format!("{x:.precision$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        String::from(&s[1..])
    } else {
        s
    }
}

impl ExponentCurve {
    /// CSV with [`CSV_HEADER`], one line per row, `\n` line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let fields = [
                row.r,
                row.e_h.value,
                row.e_h.argmax,
                row.e_h_q.value,
                row.e_h_q.argmax,
                row.e_phi_q.value,
                row.e_phi_q.argmax,
                row.e_d_lower,
            ];
            let line: Vec<String> = fields.iter().map(|&x| format_fixed(x)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Asymptotic rates at key rate `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub r: f64,
    /// Largest achievable `H(f_n(A)|E)/n`: `min{R, H(A|E)}`.
    pub equivocation: f64,
    /// Smallest achievable leaked-information rate: `max{R − H(A|E), 0}`.
    pub min_leak_rate: f64,
    /// Optimal key generation rate `G(ρ) = H(A|E)`.
    pub generation_rate: f64,
}

pub fn rates(state: &CQState, r: f64) -> Result<RatePoint> {
    let r = check_rate(r)?;
    let g = PreparedState::new(state)?.cond_entropy();
    Ok(rate_point(g, r))
}

/// [`rates`] given `H(A|E)`.
pub fn rate_point(cond_entropy: f64, r: f64) -> RatePoint {
    RatePoint {
        r,
        equivocation: r.min(cond_entropy),
        min_leak_rate: (r - cond_entropy).max(0.0),
        generation_rate: cond_entropy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::preset;
    use core::f64::consts::LN_2;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn copy_state_exponents_vanish() {
        let st = preset("copy").unwrap();
        let solver = ExponentSolver::new(&st).unwrap();
        for r in [0.1, 0.3, 0.6] {
            let row = solver.row(r).unwrap();
            assert_eq!(row.e_h.value, 0.0);
            assert_eq!(row.e_h.argmax, 0.0);
            assert_eq!(row.e_h_q.value, 0.0);
            assert_eq!(row.e_phi_q.value, 0.0);
        }
    }

    #[test]
    fn product_state_closed_forms() {
        let st = preset("product").unwrap();
        let solver = ExponentSolver::new(&st).unwrap();
        let row = solver.row(0.3).unwrap();
        close(row.e_h.value, LN_2 - 0.3, 1e-12);
        assert_eq!(row.e_h.argmax, 1.0);
        close(row.e_h_q.value, LN_2 - 0.3, 1e-12);
        close(row.e_h_q.argmax, 1.0, 1e-12);
        close(row.e_phi_q.value, (LN_2 - 0.3) / 2.0, 1e-12);
        close(row.e_phi_q.argmax, 0.5, 1e-12);
        close(row.e_d_lower, (LN_2 - 0.3) / 2.0, 1e-12);
    }

    #[test]
    fn above_alphabet_entropy_everything_is_zero() {
        let st = preset("tilted-qubit").unwrap();
        let row = ExponentSolver::new(&st).unwrap().row(LN_2 + 1.0).unwrap();
        assert_eq!([row.e_h.value, row.e_h_q.value, row.e_phi_q.value, row.e_d_lower], [0.0; 4]);
    }

    #[test]
    fn e_h_matches_dense_grid() {
        let st = preset("tilted-qubit").unwrap();
        let prep = PreparedState::new(&st).unwrap();
        let o = exponent_e_h(&st, 0.2).unwrap();
        let dense = (0..=10_000)
            .map(|i| {
                let s = i as f64 / 10_000.0;
                prep.scaled_renyi(s) - s * 0.2
            })
            .fold(0.0_f64, f64::max);
        assert!(o.value >= dense - 1e-12);
        close(o.value, dense, 1e-8);
    }

    #[test]
    fn product_curve_is_linear() {
        let st = preset("product").unwrap();
        let c = exponent_curve(&st, 0.0, LN_2, 5).unwrap();
        assert_eq!(c.rows.len(), 5);
        for row in &c.rows {
            close(row.e_h.value, (LN_2 - row.r).max(0.0), 1e-12);
        }
    }

    #[test]
    fn rates_examples() {
        let p = rates(&preset("product").unwrap(), 1.0).unwrap();
        close(p.equivocation, LN_2, 1e-12);
        close(p.min_leak_rate, 1.0 - LN_2, 1e-12);
        let p = rates(&preset("product").unwrap(), 0.3).unwrap();
        close(p.equivocation, 0.3, 1e-12);
        assert_eq!(p.min_leak_rate, 0.0);
        let p = rates(&preset("copy").unwrap(), 0.5).unwrap();
        close(p.equivocation, 0.0, 1e-12);
        close(p.min_leak_rate, 0.5, 1e-12);
        assert!(rates(&preset("copy").unwrap(), -1.0).is_err());
    }

    #[test]
    fn fixed_formatting() {
        assert_eq!(format_fixed(0.0), "0.00000000000");
        assert_eq!(format_fixed(-0.0), "0.00000000000");
        assert_eq!(format_fixed(LN_2), "0.693147180560");
        assert_eq!(format_fixed(1.0), "1.00000000000");
        assert_eq!(format_fixed(0.9999999999999), "1.00000000000");
        assert_eq!(format_fixed(9.9999999999996e-3), "0.0100000000000");
        assert_eq!(format_fixed(123.5), "123.500000000");
        assert_eq!(format_fixed(-2.5e-3), "-0.00250000000000");
        assert_eq!(format_fixed(-1e-300), "0.00000000000000000");
        assert_eq!(format_fixed(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_layout() {
        let st = preset("product").unwrap();
        let csv = exponent_curve(&st, 0.0, 0.5, 2).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1].split(',').count(), 8);
        assert!(csv.ends_with('\n'));
    }
}
