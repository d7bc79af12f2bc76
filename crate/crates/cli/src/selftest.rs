//! Closed-form values the library must reproduce.

use std::f64::consts::LN_2;
use std::fmt::Write as _;

use qpa_core::exponents::{exponent_e_h, rates, ExponentSolver};
use qpa_core::hash::{make_family, FamilyKind, HashFamily};
use qpa_core::quantities::{PreparedState, RenyiOrder};
use qpa_core::state::preset;
use qpa_core::verify::{finite_size_bound, matrix_lemma_check_on, pinsker_check, thm1_rhs};
use qpa_core::{ClassicalFunction, HermitianMatrix};
use serde_json::json;

use crate::args::{Format, OutputArgs};
use crate::commands::Outcome;
use crate::error::CliError;
use crate::output::{num, to_json};

pub struct Check {
    pub name: &'static str,
    pub got: f64,
    pub expected: f64,
    pub tol: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        (self.got - self.expected).abs() <= self.tol
    }
}

fn flag(name: &'static str, ok: bool) -> Check {
    Check {
        name,
        got: if ok { 1.0 } else { 0.0 },
        expected: 1.0,
        tol: 0.0,
    }
}

fn close(name: &'static str, got: f64, expected: f64) -> Check {
    Check {
        name,
        got,
        expected,
        tol: 1e-10,
    }
}

fn order(s: f64) -> RenyiOrder {
    RenyiOrder::new(s).expect("valid order")
}

/// Whether the exact worst-case collision probability is 1/2.
fn collides_half(f: &HashFamily) -> Result<bool, CliError> {
    let p = f.collision_stats()?.max_collision_prob;
    Ok(2 * p.numer() == *p.denom())
}

pub fn checks() -> Result<Vec<Check>, CliError> {
    let product = preset("product")?;
    let copy = preset("copy")?;
    let pp = PreparedState::new(&product)?;
    let cp = PreparedState::new(&copy)?;
    let mut c = vec![
        close("product: H(A|E) = log 2", pp.cond_entropy(), LN_2),
        close("product: H_{1.5}(A|E) = log 2", pp.renyi_cond(order(0.5)), LN_2),
        close("product: H̄*_{1.5}(A|E) = log 2", pp.renyi_cond_bar_star(order(0.5))?, LN_2),
        close("product: H_min(A|E) = log 2", pp.min_entropy(), LN_2),
        close("product: I'(A:E) = 0", pp.i_prime(), 0.0),
        close("product: φ(1/4) = −log 2 / 4", pp.phi(0.25)?, -LN_2 / 4.0),
        close("copy: H(A|E) = 0", cp.cond_entropy(), 0.0),
        close("copy: I'(A:E) = log 2", cp.i_prime(), LN_2),
        close("copy: d1'(A:E) = 1", cp.trace_distances().d1_prime, 1.0),
        close("copy: φ(0) = 0", cp.phi(0.0)?, 0.0),
        close("product: leak-bound rhs at M=2, s=1 is 1", thm1_rhs(&product, 2, order(1.0))?, 1.0),
        close("copy: leak-bound rhs at M=2, s=1 is 2", thm1_rhs(&copy, 2, order(1.0))?, 2.0),
        close(
            "copy: finite-size bound at M=2, s=1 is 2 log 2",
            finite_size_bound(&copy, 2, order(1.0))?,
            2.0 * LN_2,
        ),
        close(
            "product: finite-size bound at M=2, s=1 is log 2",
            finite_size_bound(&product, 2, order(1.0))?,
            LN_2,
        ),
    ];

    let t = make_family(FamilyKind::Toeplitz, 2, 2, 1)?;
    let mt = make_family(FamilyKind::ModifiedToeplitz, 2, 2, 1)?;
    c.push(close("toeplitz q=2,k=2,m=1 has 4 members", t.member_count() as f64, 4.0));
    c.push(close("modified_toeplitz q=2,k=2,m=1 has 2 members", mt.member_count() as f64, 2.0));
    c.push(close(
        "modified_toeplitz q=3,k=3,m=1 has 9 members",
        make_family(FamilyKind::ModifiedToeplitz, 3, 3, 1)?.member_count() as f64,
        9.0,
    ));
    c.push(flag("toeplitz q=2,k=2,m=1 collides with probability 1/2", collides_half(&t)?));
    c.push(flag("modified_toeplitz q=2,k=2,m=1 collides with probability 1/2", collides_half(&mt)?));
    let constant = HashFamily::explicit(vec![ClassicalFunction::constant(4, 2, 0)?])?;
    c.push(flag("a constant function is not universal2", !constant.collision_stats()?.is_universal2));

    let e = exponent_e_h(&product, 0.3)?;
    c.push(close("product: e_H(0.3) = log 2 − 0.3", e.value, LN_2 - 0.3));
    c.push(close("product: e_H(0.3) attained at s = 1", e.argmax, 1.0));
    let row = ExponentSolver::new(&product)?.row(0.3)?;
    c.push(close("product: e_H,q(0.3) = log 2 − 0.3", row.e_h_q.value, LN_2 - 0.3));
    c.push(close("product: e_φ,q(0.3) = (log 2 − 0.3)/2", row.e_phi_q.value, (LN_2 - 0.3) / 2.0));
    c.push(close("product: e_φ,q(0.3) attained at t = 1/2", row.e_phi_q.argmax, 0.5));
    c.push(close("copy: e_H(0.3) = 0", exponent_e_h(&copy, 0.3)?.value, 0.0));

    let r = rates(&product, 1.0)?;
    c.push(close("product: equivocation at R = 1 is log 2", r.equivocation, LN_2));
    c.push(close("product: leak rate at R = 1 is 1 − log 2", r.min_leak_rate, 1.0 - LN_2));
    let r = rates(&product, 0.3)?;
    c.push(close("product: equivocation at R = 0.3 is 0.3", r.equivocation, 0.3));
    let r = rates(&copy, 0.5)?;
    c.push(close("copy: equivocation at R = 0.5 is 0", r.equivocation, 0.0));
    c.push(close("copy: leak rate at R = 0.5 is 0.5", r.min_leak_rate, 0.5));

    let lemma = matrix_lemma_check_on(&HermitianMatrix::from_real_diagonal(&[1.0, 4.0])?, 0.5)?;
    c.push(close(
        "X = diag(1,4), s = 1/2: min eig of (I+X^s) − (I+X)^s is 2 − √2",
        lemma.power_gap,
        2.0 - 2f64.sqrt(),
    ));
    let zero = matrix_lemma_check_on(&HermitianMatrix::zeros(2), 0.5)?;
    c.push(close("X = 0: both lemma differences vanish", zero.power_gap.abs() + zero.log_gap.abs(), 0.0));
    let pinsker = pinsker_check(&copy)?;
    c.push(flag("copy: d1'² ≤ 2 I' holds", pinsker.factored_holds()));
    c.push(flag("copy: d1'² ≤ I' fails", !pinsker.unfactored_holds()));
    Ok(c)
}

pub fn run(out: &OutputArgs) -> Result<Outcome, CliError> {
    let checks = checks()?;
    let passed = checks.iter().all(Check::passed);
    let body = match out.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut t = String::new();
            for ch in &checks {
                if ch.passed() {
                    let _ = writeln!(t, "PASS {}", ch.name);
                } else {
                    let _ = writeln!(t, "FAIL {} (got {}, expected {})", ch.name, ch.got, ch.expected);
                }
            }
            let failed = checks.iter().filter(|c| !c.passed()).count();
            let _ = writeln!(t, "{} checks, {failed} failed", checks.len());
            t
        }
        Format::Json => to_json(&json!({
            "passed": passed,
            "checks": checks.iter().map(|ch| json!({
                "name": ch.name, "got": num(ch.got), "expected": num(ch.expected), "passed": ch.passed(),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => return Err(CliError::Parse("selftest supports --format text or json".to_string())),
    };
    Ok(Outcome { body, passed })
}
