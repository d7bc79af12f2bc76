//! Exact ensemble averages over hash families and machine checks of the leaked-information
//! bounds, the pinching inequalities, the matrix lemmas behind them and the entropy
//! orderings.
//!
//! All comparisons are in nats with an absolute slack tolerance of [`SLACK_TOL`].

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::{Executor, Sequential};
use crate::hash::{FamilyKind, HashFamily};
use crate::hermitian::{matrix_function, pinch_with, HermitianMatrix, MatrixFunction, SUPPORT_TOL};
use crate::optimize::golden_min;
use crate::quantities::{PreparedState, RenyiOrder};
use crate::state::{random, random_cq, CQState, Preset};
use crate::sum::{pairwise_mean, pairwise_sum};

pub const SLACK_TOL: f64 = 1e-9;

/// `{0.1, 0.2, …, 1.0}`.
pub fn default_s_grid() -> Vec<f64> {
    (1..=10).map(|i| i as f64 / 10.0).collect()
}

fn check_order(s: f64) -> Result<f64> {
    if s > 0.0 && s <= 1.0 {
        Ok(s)
    } else {
        Err(Error::Domain(format!("bound parameter s = {s} must lie in (0, 1]")))
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain("empty s grid".to_string()));
    }
    grid.iter().try_for_each(|&s| check_order(s).map(|_| ()))
}

fn check_alphabet(state: &CQState, family: &HashFamily) -> Result<()> {
    if family.domain_size() != state.alphabet_size() {
        return Err(Error::AlphabetMismatch {
            family: family.domain_size(),
            alphabet: state.alphabet_size(),
        });
    }
    Ok(())
}

/// Leakage quantities of `f(A)` for one family member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemberValues {
    pub i: f64,
    pub i_prime: f64,
    pub i_bar_prime: f64,
}

/// Leakage of every member, in member order.
pub fn member_values<E: Executor>(exec: &E, state: &CQState, family: &HashFamily) -> Result<Vec<MemberValues>> {
    check_alphabet(state, family)?;
    exec.map_indexed(family.member_count(), |idx| {
        let member = family.member(idx)?;
        let hashed = state.apply_function(&member.function)?;
        let mi = PreparedState::new(&hashed)?.mutual_info_variants();
        Ok(MemberValues {
            i: mi.i,
            i_prime: mi.i_prime,
            i_bar_prime: mi.i_bar_prime,
        })
    })
    .into_iter()
    .collect()
}

/// `E_X I'(f_X(A):E)`.
pub fn ensemble_avg_i_prime(state: &CQState, family: &HashFamily) -> Result<f64> {
    let values = member_values(&Sequential, state, family)?;
    Ok(pairwise_mean(&values.iter().map(|v| v.i_prime).collect::<Vec<_>>()))
}

/// `E_X e^{s Ī'(f_X(A):E)}`.
pub fn ensemble_avg_exp_s_i_bar_prime(state: &CQState, family: &HashFamily, order: RenyiOrder) -> Result<f64> {
    let s = check_order(order.s())?;
    let values = member_values(&Sequential, state, family)?;
    Ok(exp_moment(&values, s))
}

fn exp_moment(values: &[MemberValues], s: f64) -> f64 {
    pairwise_mean(&values.iter().map(|v| libm::exp(s * v.i_bar_prime)).collect::<Vec<_>>())
}

fn log_thm1_rhs(prep: &PreparedState<'_>, m: usize, s: f64) -> f64 {
    let v = prep.distinct_eigenvalue_count() as f64;
    s * libm::log(v * m as f64) - libm::log(s) - prep.scaled_renyi(s)
}

/// `v^s M^s e^{−s H_{1+s}(A|E)} / s` with `v` the number of distinct eigenvalues of `ρ^E`.
pub fn thm1_rhs(state: &CQState, m: usize, order: RenyiOrder) -> Result<f64> {
    let s = check_order(order.s())?;
    let prep = PreparedState::new(state)?;
    Ok(libm::exp(log_thm1_rhs(&prep, m, s)))
}

fn finite_size_value(prep: &PreparedState<'_>, m: usize, s: f64) -> f64 {
    let v = prep.distinct_eigenvalue_count() as f64;
    let h = prep.scaled_renyi(s) / s;
    libm::log(v) + core::f64::consts::LN_2 / s + (libm::log(m as f64) - h).max(0.0)
}

/// `log v + (log 2)/s + max{0, log M − H_{1+s}(A|E)}`.
pub fn finite_size_bound(state: &CQState, m: usize, order: RenyiOrder) -> Result<f64> {
    let s = check_order(order.s())?;
    Ok(finite_size_value(&PreparedState::new(state)?, m, s))
}

/// One row of a bound table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub s: f64,
    pub lhs: f64,
    pub rhs: f64,
}

/// An auxiliary inequality `lhs ≤ rhs` checked alongside a bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SideCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub passed: bool,
}

impl SideCheck {
    fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            slack,
            passed: !slack.is_nan() && slack >= -SLACK_TOL,
        }
    }
}

/// Both sides of a leaked-information bound over an `s` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// `leak-bound` or `moment-bound`.
    pub bound: String,
    pub state: String,
    pub family: String,
    /// Distinct eigenvalues of `ρ^E` used in the bound.
    pub v: usize,
    /// Left-hand side (at `best_s` when it depends on `s`).
    pub lhs: f64,
    pub rows: Vec<BoundRow>,
    pub best_s: f64,
    /// `min_s (rhs − lhs)`.
    pub slack: f64,
    /// `slack ≥ −SLACK_TOL`.
    pub passed: bool,
    pub side_checks: Vec<SideCheck>,
}

impl BoundReport {
    /// The bound and every side check hold.
    pub fn all_passed(&self) -> bool {
        self.passed && self.side_checks.iter().all(|c| c.passed)
    }

    pub fn labeled(mut self, state: &str) -> Self {
        self.state = state.to_string();
        self
    }
}

fn worst_side(name: &str, pairs: impl Iterator<Item = (f64, f64)>) -> SideCheck {
    let mut worst: Option<SideCheck> = None;
    for (lhs, rhs) in pairs {
        let c = SideCheck::new(name, lhs, rhs);
        let replace = match &worst {
            None => true,
            Some(w) => c.slack.is_nan() || c.slack < w.slack,
        };
        if replace {
            worst = Some(c);
        }
    }
    worst.expect("non-empty grid")
}

/// `E_X I' ≤ min_s v^s M^s e^{−sH_{1+s}}/s`, plus `E_X I ≤ E_X I'`, the existence witness
/// `min_X I' ≤ min_s rhs`, the finite-size bound and the exponential-moment bound
/// `E_X e^{sI'} ≤ v^s (1 + M^s e^{−sH_{1+s}})`.
pub fn verify_thm1(state: &CQState, family: &HashFamily, grid: &[f64]) -> Result<BoundReport> {
    let values = member_values(&Sequential, state, family)?;
    thm1_from_values(state, family, &values, grid)
}

pub fn thm1_from_values(
    state: &CQState,
    family: &HashFamily,
    values: &[MemberValues],
    grid: &[f64],
) -> Result<BoundReport> {
    check_grid(grid)?;
    let prep = PreparedState::new(state)?;
    let m = family.range_size();
    let lhs = pairwise_mean(&values.iter().map(|v| v.i_prime).collect::<Vec<_>>());
    let avg_i = pairwise_mean(&values.iter().map(|v| v.i).collect::<Vec<_>>());
    let min_member = values.iter().map(|v| v.i_prime).fold(f64::INFINITY, f64::min);

    let logs: Vec<f64> = grid.iter().map(|&s| log_thm1_rhs(&prep, m, s)).collect();
    let rows: Vec<BoundRow> = grid
        .iter()
        .zip(&logs)
        .map(|(&s, &l)| BoundRow {
            s,
            lhs,
            rhs: libm::exp(l),
        })
        .collect();
    let mut best = 0;
    for (i, &l) in logs.iter().enumerate() {
        if l < logs[best] {
            best = i;
        }
    }
    let (mut best_s, mut best_log) = (grid[best], logs[best]);
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    if hi > lo {
        let refined = golden_min(|s| log_thm1_rhs(&prep, m, s), lo, hi, 1e-6);
        if refined.value < best_log {
            best_s = refined.argmax;
            best_log = refined.value;
        }
    }
    let min_rhs = libm::exp(best_log);
    let slack = min_rhs - lhs;

    let finite = grid
        .iter()
        .map(|&s| finite_size_value(&prep, m, s))
        .fold(f64::INFINITY, f64::min);
    let v = prep.distinct_eigenvalue_count();
    let moment = worst_side(
        "E[exp(sI')] <= v^s(1 + M^s exp(-sH_1+s))",
        grid.iter().map(|&s| {
            let lhs = pairwise_mean(&values.iter().map(|x| libm::exp(s * x.i_prime)).collect::<Vec<_>>());
            let rhs = libm::pow(v as f64, s) * (1.0 + libm::exp(s * libm::log(m as f64) - prep.scaled_renyi(s)));
            (lhs, rhs)
        }),
    );

    Ok(BoundReport {
        bound: "leak-bound".to_string(),
        state: String::new(),
        family: format!("{family}"),
        v,
        lhs,
        rows,
        best_s,
        slack,
        passed: slack >= -SLACK_TOL,
        side_checks: alloc::vec![
            SideCheck::new("E[I] <= E[I']", avg_i, lhs),
            SideCheck::new("min_f I'(f) <= min_s rhs", min_member, min_rhs),
            SideCheck::new("min_f I'(f) <= finite-size bound", min_member, finite),
            moment,
        ],
    })
}

/// `E_X e^{sĪ'} ≤ 1 + M^s e^{−sH̄*_{1+s}}` at every `s` of the grid, plus
/// `s·E_X Ī' ≤ e^{s(log M − H̄*_{1+s})}`.
pub fn verify_thm2(state: &CQState, family: &HashFamily, grid: &[f64]) -> Result<BoundReport> {
    let values = member_values(&Sequential, state, family)?;
    thm2_from_values(state, family, &values, grid)
}

pub fn thm2_from_values(
    state: &CQState,
    family: &HashFamily,
    values: &[MemberValues],
    grid: &[f64],
) -> Result<BoundReport> {
    check_grid(grid)?;
    let prep = PreparedState::new(state)?;
    let m = family.range_size() as f64;
    let avg_bar = pairwise_mean(&values.iter().map(|v| v.i_bar_prime).collect::<Vec<_>>());
    let mut rows = Vec::with_capacity(grid.len());
    let mut consequences = Vec::with_capacity(grid.len());
    for &s in grid {
        // M^s e^{−sH̄*_{1+s}}
        let tail = libm::pow(m, s) * prep.bar_star_trace(s);
        rows.push(BoundRow {
            s,
            lhs: exp_moment(values, s),
            rhs: 1.0 + tail,
        });
        consequences.push((s * avg_bar, tail));
    }
    let mut best = 0;
    for (i, r) in rows.iter().enumerate() {
        if r.rhs - r.lhs < rows[best].rhs - rows[best].lhs {
            best = i;
        }
    }
    let slack = rows[best].rhs - rows[best].lhs;
    Ok(BoundReport {
        bound: "moment-bound".to_string(),
        state: String::new(),
        family: format!("{family}"),
        v: prep.distinct_eigenvalue_count(),
        lhs: rows[best].lhs,
        best_s: rows[best].s,
        slack,
        passed: slack >= -SLACK_TOL,
        rows,
        side_checks: alloc::vec![worst_side(
            "s E[I_bar'] <= exp(s(log M - H_bar*_1+s))",
            consequences.into_iter()
        )],
    })
}

/// Minimum eigenvalues of `(I + X^s) − (I + X)^s` and `X^s/s − log(I + X)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaCheck {
    pub dim: usize,
    pub s: f64,
    pub power_gap: f64,
    pub log_gap: f64,
}

impl LemmaCheck {
    pub fn passed(&self) -> bool {
        self.power_gap >= -SLACK_TOL && self.log_gap >= -SLACK_TOL
    }
}

/// Both operator inequalities for a given PSD `x`.
pub fn matrix_lemma_check_on(x: &HermitianMatrix, s: f64) -> Result<LemmaCheck> {
    let s = check_order(s)?;
    let d = x.dim();
    let id = HermitianMatrix::identity(d);
    let xs = matrix_function(x, MatrixFunction::Power(s), SUPPORT_TOL)?;
    let one_plus = id.add(x)?;
    let power_gap = id
        .add(&xs)?
        .sub(&matrix_function(&one_plus, MatrixFunction::Power(s), SUPPORT_TOL)?)?
        .min_eigenvalue()?;
    let log_gap = xs
        .scale(1.0 / s)
        .sub(&matrix_function(&one_plus, MatrixFunction::Log, SUPPORT_TOL)?)?
        .min_eigenvalue()?;
    Ok(LemmaCheck {
        dim: d,
        s,
        power_gap,
        log_gap,
    })
}

/// Operator-inequality checks on one seeded random PSD matrix over an `s` grid.
///
/// The scale of `X` is drawn log-uniformly from `[10^{-2}, 10^2]`.
pub fn matrix_lemma_checks(seed: u64, dim: usize, grid: &[f64]) -> Result<Vec<LemmaCheck>> {
    check_grid(grid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = libm::pow(10.0, rng.random_range(-2.0..=2.0));
    let x = random::psd(&mut rng, dim, scale);
    grid.iter().map(|&s| matrix_lemma_check_on(&x, s)).collect()
}

/// Pinching inequalities for one state.
#[derive(Debug, Clone, PartialEq)]
pub struct PinchingReport {
    pub state: String,
    pub v: usize,
    /// `I(A:E|ρ)`
    pub i: f64,
    /// `I(A:E|E_σ(ρ))`
    pub i_pinched: f64,
    /// `Ī(A:E|E_σ(ρ))`
    pub i_bar_pinched: f64,
    /// `Ī(A:E|E_σ(ρ)) + log v − I(A:E|ρ)`
    pub slack: f64,
    /// `min_a λ_min(v E_σ(ρ_a) − ρ_a)`
    pub operator_min_eig: f64,
    /// `|I − Ī|` on the pinched state.
    pub identity_gap: f64,
    pub passed: bool,
}

/// `ρ ≤ v E_σ(ρ)` blockwise and `I(A:E|ρ) ≤ Ī(A:E|E_σ(ρ)) + log v`, `σ = ρ^E`.
pub fn pinching_bound_check(state: &CQState) -> Result<PinchingReport> {
    let prep = PreparedState::new(state)?;
    let spec = prep.eve_spectrum();
    let v = spec.distinct_count();
    let mut pinched = Vec::with_capacity(state.alphabet_size());
    let mut min_eig = f64::INFINITY;
    for rho in state.eve_states() {
        let p = pinch_with(spec, rho)?;
        min_eig = min_eig.min(p.scale(v as f64).sub(rho)?.min_eigenvalue()?);
        pinched.push(p);
    }
    let pinched = CQState::from_parts(state.probs().to_vec(), pinched);
    let pinched_mi = PreparedState::new(&pinched)?.mutual_info_variants();
    let i = prep.mutual_info();
    let slack = pinched_mi.i_bar + libm::log(v as f64) - i;
    let identity_gap = (pinched_mi.i - pinched_mi.i_bar).abs();
    Ok(PinchingReport {
        state: String::new(),
        v,
        i,
        i_pinched: pinched_mi.i,
        i_bar_pinched: pinched_mi.i_bar,
        slack,
        operator_min_eig: min_eig,
        identity_gap,
        passed: slack >= -SLACK_TOL && min_eig >= -SLACK_TOL && identity_gap <= SLACK_TOL,
    })
}

/// Both forms of the Pinsker-type bound on `d1'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinskerReport {
    pub d1_prime: f64,
    pub i_prime: f64,
    /// `2I' − d1'²`
    pub factored_slack: f64,
    /// `I' − d1'²`
    pub unfactored_slack: f64,
}

impl PinskerReport {
    /// `d1'² ≤ 2I'`, which always holds.
    pub fn factored_holds(&self) -> bool {
        self.factored_slack >= -SLACK_TOL
    }

    /// `d1'² ≤ I'`, which fails e.g. on a perfect copy of a uniform bit.
    pub fn unfactored_holds(&self) -> bool {
        self.unfactored_slack >= -SLACK_TOL
    }
}

pub fn pinsker_check(state: &CQState) -> Result<PinskerReport> {
    let prep = PreparedState::new(state)?;
    let d = prep.trace_distances().d1_prime;
    let i = prep.i_prime();
    Ok(PinskerReport {
        d1_prime: d,
        i_prime: i,
        factored_slack: 2.0 * i - d * d,
        unfactored_slack: i - d * d,
    })
}

/// The worst violation of each ordering between conditional entropies over a grid.
///
/// Each field is `min (larger − smaller)` over the grid; all should be `≥ −tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyOrderReport {
    /// `H_{1+s}` and `H̄*_{1+s}` non-increasing in `s`.
    pub monotone: f64,
    /// `H ≥ H_{1+s}`
    pub von_neumann_above_renyi: f64,
    /// `H̄ ≥ H̄*_{1+s}`
    pub bar_above_bar_star: f64,
    /// `H̄*_{1+s} ≥ H_{1+s}`
    pub bar_star_above_renyi: f64,
    /// `H_{1+s} ≥ H_2` for `s ≤ 1`
    pub renyi_above_collision: f64,
    /// `H_2 ≥ H_min`
    pub collision_above_min: f64,
    /// `−` second difference of `s·H_{1+s}` on the (uniform) grid.
    pub concavity: f64,
}

impl EntropyOrderReport {
    pub fn worst(&self) -> f64 {
        [
            self.monotone,
            self.von_neumann_above_renyi,
            self.bar_above_bar_star,
            self.bar_star_above_renyi,
            self.renyi_above_collision,
            self.collision_above_min,
            self.concavity,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    }
}

/// `grid` must be increasing and uniformly spaced within `(0, 1]`.
pub fn entropy_order_checks(state: &CQState, grid: &[f64]) -> Result<EntropyOrderReport> {
    check_grid(grid)?;
    let prep = PreparedState::new(state)?;
    let h = prep.cond_entropy();
    let h_bar = prep.cond_entropy_bar();
    let h2 = prep.scaled_renyi(1.0);
    let h_min = prep.min_entropy();
    let renyi: Vec<f64> = grid.iter().map(|&s| prep.scaled_renyi(s) / s).collect();
    let bar_star = grid
        .iter()
        .map(|&s| prep.renyi_cond_bar_star(RenyiOrder::new(s)?))
        .collect::<Result<Vec<f64>>>()?;
    let min_of = |it: &mut dyn Iterator<Item = f64>| it.fold(f64::INFINITY, f64::min);
    let monotone = min_of(&mut renyi.windows(2).chain(bar_star.windows(2)).map(|w| w[0] - w[1]));
    let scaled: Vec<f64> = grid.iter().zip(&renyi).map(|(&s, &r)| s * r).collect();
    let concavity = min_of(&mut scaled.windows(3).map(|w| -(w[0] - 2.0 * w[1] + w[2])));
    Ok(EntropyOrderReport {
        monotone,
        von_neumann_above_renyi: min_of(&mut renyi.iter().map(|&r| h - r)),
        bar_above_bar_star: min_of(&mut bar_star.iter().map(|&b| h_bar - b)),
        bar_star_above_renyi: min_of(&mut bar_star.iter().zip(&renyi).map(|(&b, &r)| b - r)),
        renyi_above_collision: min_of(&mut renyi.iter().map(|&r| r - h2)),
        collision_above_min: h2 - h_min,
        concavity,
    })
}

/// Worst slacks of `−φ(s) ≤ s·H_{1+s} ≤ −(1+s)φ(s/(1+s))`.
///
/// `φ(1)` is a limit, so the lower inequality is evaluated for `s < 1` only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiSandwichReport {
    pub lower_slack: f64,
    pub upper_slack: f64,
}

impl PhiSandwichReport {
    pub fn passed(&self) -> bool {
        self.lower_slack >= -SLACK_TOL && self.upper_slack >= -SLACK_TOL
    }
}

pub fn phi_sandwich_check(state: &CQState, grid: &[f64]) -> Result<PhiSandwichReport> {
    check_grid(grid)?;
    let prep = PreparedState::new(state)?;
    let mut lower = f64::INFINITY;
    let mut upper = f64::INFINITY;
    for &s in grid {
        let sh = prep.scaled_renyi(s);
        if s < 1.0 {
            lower = lower.min(sh + prep.phi_extended(s)?);
        }
        upper = upper.min(-(1.0 + s) * prep.phi_extended(s / (1.0 + s))? - sh);
    }
    Ok(PhiSandwichReport {
        lower_slack: lower,
        upper_slack: upper,
    })
}

/// A named state of the verification corpus.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub state: CQState,
}

pub const RANDOM_CORPUS_SIZE: u64 = 20;

/// The presets, their 2-fold tensor powers, and 20 seeded random states with `|A| = 4`,
/// `d_E ∈ {2, 3}`.
pub fn corpus() -> Result<Vec<CorpusEntry>> {
    let presets = [
        Preset::Copy,
        Preset::Product,
        Preset::TiltedQubit,
        Preset::Bb84 {
            theta: Preset::DEFAULT_BB84_THETA,
        },
        Preset::Depolarized {
            p: Preset::DEFAULT_DEPOLARIZATION,
        },
    ];
    let mut out = Vec::new();
    for p in &presets {
        let state = p.state()?;
        out.push(CorpusEntry {
            name: format!("{p}"),
            state: state.tensor_power(2)?,
        });
        out.insert(
            out.len() - 1,
            CorpusEntry {
                name: format!("{p}"),
                state,
            },
        );
        let last = out.len() - 1;
        out[last].name = format!("{p}^2");
    }
    for seed in 0..RANDOM_CORPUS_SIZE {
        let d = 2 + (seed as usize % 2);
        out.push(CorpusEntry {
            name: format!("random(seed={seed},|A|=4,d_E={d})"),
            state: random_cq(seed, 4, d)?,
        });
    }
    Ok(out)
}

/// Toeplitz and modified-Toeplitz families over `F_2` with `M ∈ {2, 4}`, `M ≤ |A|`.
pub fn corpus_families(alphabet: usize) -> Result<Vec<HashFamily>> {
    if !alphabet.is_power_of_two() || alphabet < 2 {
        return Err(Error::InvalidFamily(format!("alphabet {alphabet} is not a power of 2")));
    }
    let k = alphabet.trailing_zeros();
    let mut out = Vec::new();
    for m in 1..=k.min(2) {
        for kind in [FamilyKind::Toeplitz, FamilyKind::ModifiedToeplitz] {
            out.push(HashFamily::new(kind, 2, k, m)?);
        }
    }
    Ok(out)
}

/// Result of the whole verification corpus.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub leak_bound: Vec<BoundReport>,
    pub moment_bound: Vec<BoundReport>,
    pub pinching: Vec<PinchingReport>,
    pub pinsker: Vec<(String, PinskerReport)>,
    pub entropy_orders: Vec<(String, EntropyOrderReport)>,
    pub phi_sandwich: Vec<(String, PhiSandwichReport)>,
    pub matrix_lemmas: Vec<LemmaCheck>,
}

impl SuiteReport {
    /// Each section with its pass flag.
    pub fn sections(&self) -> Vec<(&'static str, bool)> {
        alloc::vec![
            ("leak-bound", self.leak_bound.iter().all(BoundReport::all_passed)),
            ("moment-bound", self.moment_bound.iter().all(BoundReport::all_passed)),
            ("pinching", self.pinching.iter().all(|p| p.passed)),
            ("pinsker", self.pinsker.iter().all(|(_, p)| p.factored_holds())),
            (
                "entropy-orders",
                self.entropy_orders.iter().all(|(_, e)| e.worst() >= -1e-8)
            ),
            ("phi-sandwich", self.phi_sandwich.iter().all(|(_, p)| p.passed())),
            ("matrix-lemmas", self.matrix_lemmas.iter().all(LemmaCheck::passed)),
        ]
    }

    pub fn passed(&self) -> bool {
        self.sections().iter().all(|&(_, ok)| ok)
    }
}

/// Number of seeded matrices in the operator-lemma check.
pub const LEMMA_SAMPLES: u64 = 200;

/// Runs every check over the corpus. Member-level work goes through `exec`.
pub fn run_suite<E: Executor>(exec: &E, grid: &[f64]) -> Result<SuiteReport> {
    check_grid(grid)?;
    let mut report = SuiteReport {
        leak_bound: Vec::new(),
        moment_bound: Vec::new(),
        pinching: Vec::new(),
        pinsker: Vec::new(),
        entropy_orders: Vec::new(),
        phi_sandwich: Vec::new(),
        matrix_lemmas: Vec::new(),
    };
    for entry in corpus()? {
        for family in corpus_families(entry.state.alphabet_size())? {
            let values = member_values(exec, &entry.state, &family)?;
            report
                .leak_bound
                .push(thm1_from_values(&entry.state, &family, &values, grid)?.labeled(&entry.name));
            report
                .moment_bound
                .push(thm2_from_values(&entry.state, &family, &values, grid)?.labeled(&entry.name));
        }
        let mut pinching = pinching_bound_check(&entry.state)?;
        pinching.state = entry.name.clone();
        report.pinching.push(pinching);
        report.pinsker.push((entry.name.clone(), pinsker_check(&entry.state)?));
        report
            .entropy_orders
            .push((entry.name.clone(), entropy_order_checks(&entry.state, grid)?));
        report
            .phi_sandwich
            .push((entry.name.clone(), phi_sandwich_check(&entry.state, grid)?));
    }
    let lemmas = exec.map_indexed(LEMMA_SAMPLES as usize, |i| {
        matrix_lemma_checks(i as u64, 2 + i % 5, grid)
    });
    for l in lemmas {
        report.matrix_lemmas.extend(l?);
    }
    Ok(report)
}

/// `pairwise_sum` re-exported for report consumers that aggregate slacks.
pub fn total(xs: &[f64]) -> f64 {
    pairwise_sum(xs)
}
