use std::fmt::Write as _;

use qpa_core::exponents::{exponent_curve_with, format_fixed, rate_point, ExponentCurve, ExponentSolver, CSV_HEADER};
use qpa_core::hash::HashFamily;
use qpa_core::quantities::{PreparedState, QuantityReport};
use qpa_core::verify::{
    corpus_families, default_s_grid, member_values, run_suite, thm1_from_values, thm2_from_values, BoundReport,
    SuiteReport,
};
use serde_json::{json, Value};

use crate::args::{Format, LogBase, OutputArgs, StateArgs};
use crate::error::CliError;
use crate::exec::RayonExecutor;
use crate::input::{load_state, power, preset_state, NamedState};
use crate::output::{num, to_json};

/// Rendered output of a command and whether every check in it held.
pub struct Outcome {
    pub body: String,
    pub passed: bool,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self { body, passed: true }
    }
}

struct Units {
    scale: f64,
    name: &'static str,
}

fn units(out: &OutputArgs) -> Units {
    match out.log_base {
        LogBase::Nats => Units { scale: 1.0, name: "nats" },
        LogBase::Bits => Units {
            scale: 1.0 / std::f64::consts::LN_2,
            name: "bits",
        },
    }
}

fn f(x: f64) -> String {
    format_fixed(x)
}

/// Left-aligns `s` in `width` columns, not counting combining marks.
fn pad(s: &str, width: usize) -> String {
    let shown = s.chars().filter(|c| !('\u{0300}'..='\u{036f}').contains(c)).count();
    format!("{s}{}", " ".repeat(width.saturating_sub(shown)))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn resolve_state(args: &StateArgs) -> Result<NamedState, CliError> {
    let base = match (&args.preset, &args.state) {
        (Some(p), None) => preset_state(p)?,
        (None, Some(path)) => load_state(path)?,
        _ => return Err(CliError::Parse("specify exactly one of --preset or --state".to_string())),
    };
    power(base, args.power)
}

fn header(named: &NamedState, prep: &PreparedState<'_>, u: &Units) -> String {
    format!(
        "state     {}\nalphabet  {}\neve_dim   {}\nv         {}\nunits     {}\n\n",
        named.name,
        named.state.alphabet_size(),
        named.state.eve_dim(),
        prep.distinct_eigenvalue_count(),
        u.name
    )
}

/// Trace distances are not logarithmic and keep their scale in bits.
fn is_log_quantity(key: &str) -> bool {
    !key.starts_with("d1")
}

pub fn quantities(state: &StateArgs, s: &[f64], out: &OutputArgs) -> Result<Outcome, CliError> {
    let named = resolve_state(state)?;
    let prep = PreparedState::new(&named.state)?;
    let report = QuantityReport::compute(&named.state, s)?;
    let u = units(out);
    let body = match out.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut t = header(&named, &prep, &u);
            let _ = writeln!(t, "{:<18} {:<10} value", "quantity", "param");
            for q in &report.entries {
                let param = match q.param {
                    Some(p) if q.key.starts_with("phi") => format!("t={p}"),
                    Some(p) => format!("s={p}"),
                    None => String::new(),
                };
                let v = if is_log_quantity(&q.key) { q.value * u.scale } else { q.value };
                let _ = writeln!(t, "{} {:<10} {}", pad(&q.symbol, 18), param, f(v));
            }
            t
        }
        Format::Json => to_json(&json!({
            "state": named.name,
            "alphabet_size": named.state.alphabet_size(),
            "eve_dim": named.state.eve_dim(),
            "v": prep.distinct_eigenvalue_count(),
            "units": "nats",
            "quantities": report.entries.iter().map(|q| json!({
                "key": q.key,
                "symbol": q.symbol,
                "param": q.param.map_or(Value::Null, num),
                "value": num(q.value),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut t = String::from("key,symbol,param,value\n");
            for q in &report.entries {
                let _ = writeln!(
                    t,
                    "{},{},{},{}",
                    csv_field(&q.key),
                    csv_field(&q.symbol),
                    q.param.map_or(String::new(), f),
                    f(q.value)
                );
            }
            t
        }
    };
    Ok(Outcome::ok(body))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn bound_json(r: &BoundReport) -> Value {
    json!({
        "bound": r.bound,
        "state": r.state,
        "family": r.family,
        "v": r.v,
        "lhs": num(r.lhs),
        "best_s": num(r.best_s),
        "slack": num(r.slack),
        "passed": r.all_passed(),
        "rows": r.rows.iter().map(|row| json!({"s": num(row.s), "lhs": num(row.lhs), "rhs": num(row.rhs)})).collect::<Vec<_>>(),
        "side_checks": r.side_checks.iter().map(|c| json!({
            "name": c.name, "lhs": num(c.lhs), "rhs": num(c.rhs), "slack": num(c.slack), "passed": c.passed,
        })).collect::<Vec<_>>(),
    })
}

fn bound_line(t: &mut String, r: &BoundReport) {
    let _ = writeln!(
        t,
        "{} {} state={} family={} v={} lhs={} slack={} s*={}",
        verdict(r.all_passed()),
        r.bound,
        r.state,
        r.family,
        r.v,
        f(r.lhs),
        f(r.slack),
        f(r.best_s)
    );
    for c in &r.side_checks {
        let _ = writeln!(t, "    {} {}: slack={}", verdict(c.passed), c.name, f(c.slack));
    }
}

fn bound_csv(reports: &[BoundReport]) -> String {
    let mut t = String::from("bound,state,family,s,lhs,rhs,passed\n");
    for r in reports {
        for row in &r.rows {
            let _ = writeln!(
                t,
                "{},{},{},{},{},{},{}",
                r.bound,
                csv_field(&r.state),
                csv_field(&r.family),
                f(row.s),
                f(row.lhs),
                f(row.rhs),
                r.all_passed()
            );
        }
    }
    t
}

fn s_grid(s: &Option<Vec<f64>>) -> Vec<f64> {
    s.clone().unwrap_or_else(default_s_grid)
}

pub fn verify(
    state: &StateArgs,
    family: Option<&str>,
    s: &Option<Vec<f64>>,
    full_suite: bool,
    out: &OutputArgs,
    exec: &RayonExecutor,
) -> Result<Outcome, CliError> {
    let grid = s_grid(s);
    if full_suite {
        let report = run_suite(exec, &grid)?;
        return Ok(Outcome {
            passed: report.passed(),
            body: suite_body(&report, out)?,
        });
    }
    let named = resolve_state(state)?;
    let families = match family {
        Some(d) => vec![d.parse::<HashFamily>()?],
        None => corpus_families(named.state.alphabet_size()).map_err(|_| {
            CliError::Parse(format!(
                "no default families for |A| = {}; pass --family",
                named.state.alphabet_size()
            ))
        })?,
    };
    let mut reports = Vec::new();
    for fam in &families {
        let values = member_values(exec, &named.state, fam)?;
        reports.push(thm1_from_values(&named.state, fam, &values, &grid)?.labeled(&named.name));
        reports.push(thm2_from_values(&named.state, fam, &values, &grid)?.labeled(&named.name));
    }
    let passed = reports.iter().all(BoundReport::all_passed);
    let body = match out.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut t = String::new();
            for r in &reports {
                bound_line(&mut t, r);
            }
            let _ = writeln!(t, "{}", if passed { "all bounds hold" } else { "some bounds FAILED" });
            t
        }
        Format::Json => to_json(&json!({
            "units": "nats",
            "passed": passed,
            "reports": reports.iter().map(bound_json).collect::<Vec<_>>(),
        })),
        Format::Csv => bound_csv(&reports),
    };
    Ok(Outcome { body, passed })
}

fn suite_body(r: &SuiteReport, out: &OutputArgs) -> Result<String, CliError> {
    let copy_discrepancy = r
        .pinsker
        .iter()
        .find(|(n, _)| n == "copy")
        .map(|(_, p)| !p.unfactored_holds())
        .unwrap_or(false);
    Ok(match out.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut t = String::new();
            for b in r.leak_bound.iter().chain(&r.moment_bound) {
                bound_line(&mut t, b);
            }
            for p in &r.pinching {
                let _ = writeln!(
                    t,
                    "{} pinching state={} v={} slack={} min_eig(vE(rho)-rho)={}",
                    verdict(p.passed),
                    p.state,
                    p.v,
                    f(p.slack),
                    f(p.operator_min_eig)
                );
            }
            for (n, p) in &r.pinsker {
                let _ = writeln!(
                    t,
                    "{} pinsker state={} d1'^2<=2I' slack={}",
                    verdict(p.factored_holds()),
                    n,
                    f(p.factored_slack)
                );
            }
            for (n, e) in &r.entropy_orders {
                let _ = writeln!(t, "{} entropy-orders state={} worst={}", verdict(e.worst() >= -1e-8), n, f(e.worst()));
            }
            for (n, p) in &r.phi_sandwich {
                let _ = writeln!(
                    t,
                    "{} phi-sandwich state={} lower={} upper={}",
                    verdict(p.passed()),
                    n,
                    f(p.lower_slack),
                    f(p.upper_slack)
                );
            }
            let worst = r
                .matrix_lemmas
                .iter()
                .map(|c| c.power_gap.min(c.log_gap))
                .fold(f64::INFINITY, f64::min);
            let _ = writeln!(
                t,
                "{} matrix-lemmas checks={} worst_min_eig={}",
                verdict(r.matrix_lemmas.iter().all(|c| c.passed())),
                r.matrix_lemmas.len(),
                f(worst)
            );
            let _ = writeln!(
                t,
                "NOTE unfactored Pinsker form d1'^2<=I' {} on the copy state",
                if copy_discrepancy { "fails as expected" } else { "unexpectedly holds" }
            );
            t.push('\n');
            for (name, ok) in r.sections() {
                let _ = writeln!(t, "{} {name}", verdict(ok));
            }
            t
        }
        Format::Json => to_json(&json!({
            "units": "nats",
            "passed": r.passed(),
            "sections": r.sections().iter().map(|(n, ok)| json!({"name": n, "passed": ok})).collect::<Vec<_>>(),
            "leak-bound": r.leak_bound.iter().map(bound_json).collect::<Vec<_>>(),
            "moment-bound": r.moment_bound.iter().map(bound_json).collect::<Vec<_>>(),
            "pinching": r.pinching.iter().map(|p| json!({
                "state": p.state, "v": p.v, "i": num(p.i), "i_bar_pinched": num(p.i_bar_pinched),
                "slack": num(p.slack), "operator_min_eig": num(p.operator_min_eig), "passed": p.passed,
            })).collect::<Vec<_>>(),
            "pinsker": r.pinsker.iter().map(|(n, p)| json!({
                "state": n, "d1_prime": num(p.d1_prime), "i_prime": num(p.i_prime),
                "factored_slack": num(p.factored_slack), "unfactored_slack": num(p.unfactored_slack),
            })).collect::<Vec<_>>(),
            "unfactored_pinsker_fails_on_copy": copy_discrepancy,
            "matrix_lemma_checks": r.matrix_lemmas.len(),
        })),
        Format::Csv => {
            let mut all: Vec<BoundReport> = r.leak_bound.clone();
            all.extend(r.moment_bound.iter().cloned());
            bound_csv(&all)
        }
    })
}

fn exponent_table(named: &NamedState, prep: &PreparedState<'_>, curve: &ExponentCurve, out: &OutputArgs) -> String {
    let u = units(out);
    match out.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut t = header(named, prep, &u);
            let _ = writeln!(
                t,
                "{:<18} {:<18} {:<16} {:<18} {:<16} {:<18} {:<16} e_d_lower",
                "R", "e_H", "s*", "e_H_q", "s*", "e_phi_q", "t*"
            );
            for row in &curve.rows {
                let _ = writeln!(
                    t,
                    "{:<18} {:<18} {:<16} {:<18} {:<16} {:<18} {:<16} {}",
                    f(row.r * u.scale),
                    f(row.e_h.value * u.scale),
                    f(row.e_h.argmax),
                    f(row.e_h_q.value * u.scale),
                    f(row.e_h_q.argmax),
                    f(row.e_phi_q.value * u.scale),
                    f(row.e_phi_q.argmax),
                    f(row.e_d_lower * u.scale)
                );
            }
            t
        }
        Format::Csv => curve.to_csv(),
        Format::Json => to_json(&json!({
            "state": named.name,
            "units": "nats",
            "columns": CSV_HEADER.split(',').collect::<Vec<_>>(),
            "rows": curve.rows.iter().map(|row| json!({
                "R": num(row.r),
                "e_H": num(row.e_h.value),
                "s_star_H": num(row.e_h.argmax),
                "e_H_q": num(row.e_h_q.value),
                "s_star_Hq": num(row.e_h_q.argmax),
                "e_phi_q": num(row.e_phi_q.value),
                "t_star": num(row.e_phi_q.argmax),
                "e_d_lower": num(row.e_d_lower),
            })).collect::<Vec<_>>(),
        })),
    }
}

pub fn exponents(state: &StateArgs, r: &[f64], out: &OutputArgs, exec: &RayonExecutor) -> Result<Outcome, CliError> {
    use qpa_core::Executor;
    let named = resolve_state(state)?;
    let solver = ExponentSolver::new(&named.state)?;
    let rows = exec
        .map_indexed(r.len(), |i| solver.row(r[i]))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let curve = ExponentCurve { rows };
    Ok(Outcome::ok(exponent_table(&named, solver.prepared(), &curve, out)))
}

pub fn sweep(
    state: &StateArgs,
    r_min: f64,
    r_max: Option<f64>,
    steps: usize,
    out: &OutputArgs,
    exec: &RayonExecutor,
) -> Result<Outcome, CliError> {
    let named = resolve_state(state)?;
    let prep = PreparedState::new(&named.state)?;
    let r_max = r_max.unwrap_or_else(|| (named.state.alphabet_size() as f64).ln());
    let curve = exponent_curve_with(exec, &named.state, r_min, r_max, steps)?;
    let mut out = out.clone();
    out.format = Some(out.format.unwrap_or(Format::Csv));
    Ok(Outcome::ok(exponent_table(&named, &prep, &curve, &out)))
}

pub fn rates(state: &StateArgs, r: &[f64], out: &OutputArgs) -> Result<Outcome, CliError> {
    let named = resolve_state(state)?;
    let prep = PreparedState::new(&named.state)?;
    let g = prep.cond_entropy();
    if let Some(bad) = r.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
        return Err(CliError::Parse(format!("key rate R = {bad} must be finite and ≥ 0")));
    }
    let points: Vec<_> = r.iter().map(|&x| rate_point(g, x)).collect();
    let u = units(out);
    let body = match out.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut t = header(&named, &prep, &u);
            let _ = writeln!(t, "G = H(A|E)        {}\n", f(g * u.scale));
            let _ = writeln!(t, "{:<18} {:<18} min_leak_rate", "R", "equivocation");
            for p in &points {
                let _ = writeln!(
                    t,
                    "{:<18} {:<18} {}",
                    f(p.r * u.scale),
                    f(p.equivocation * u.scale),
                    f(p.min_leak_rate * u.scale)
                );
            }
            t
        }
        Format::Json => to_json(&json!({
            "state": named.name,
            "units": "nats",
            "generation_rate": num(g),
            "rows": points.iter().map(|p| json!({
                "R": num(p.r), "equivocation": num(p.equivocation), "min_leak_rate": num(p.min_leak_rate),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut t = String::from("R,equivocation,min_leak_rate,generation_rate\n");
            for p in &points {
                let _ = writeln!(
                    t,
                    "{},{},{},{}",
                    f(p.r),
                    f(p.equivocation),
                    f(p.min_leak_rate),
                    f(p.generation_rate)
                );
            }
            t
        }
    };
    Ok(Outcome::ok(body))
}
