//! Entropies, conditional Rényi entropies, mutual-information variants, trace distances
//! and the `φ` quantity of a cq-state.
//!
//! Every quantity decomposes over the classical blocks: one `d_E × d_E` problem per symbol
//! plus one shared eigendecomposition of `ρ^E`. [`PreparedState`] does that decomposition
//! once and then evaluates the `s`-dependent quantities from scalars, which is what the
//! exponent optimizers hammer on. The [`joint`] module keeps the direct `|A|·d_E`
//! dimensional evaluation as an independent cross-check.
//!
//! Conventions: natural logarithms; inverse powers and logs of `ρ^E` act on its support.
//! `H̄`, `Ī` and `Ī'` are `±∞` when `ρ_a` has weight outside the support of
//! `(ρ^E)^{-1/2} ρ_a (ρ^E)^{-1/2}` (e.g. pure probe states not diagonal in the eigenbasis
//! of `ρ^E`); that is the value of the defining trace, not a numerical failure.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hermitian::{trace_norm, HermitianMatrix, Spectrum, SUPPORT_TOL};
use crate::state::CQState;
use crate::sum::pairwise_sum;

/// Largest Rényi parameter accepted.
pub const S_MAX: f64 = 4.0;
/// Weight of `ρ_a` outside a support above which a log-trace is declared infinite.
pub const KERNEL_WEIGHT_TOL: f64 = 1e-9;

/// The parameter `s` of an order-`1+s` Rényi quantity.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RenyiOrder(f64);

impl RenyiOrder {
    /// `s ∈ [0, 4]`; `s = 0` stands for the von Neumann limit.
    pub fn new(s: f64) -> Result<Self> {
        if !(0.0..=S_MAX).contains(&s) {
            return Err(Error::Domain(format!("Rényi parameter s = {s} outside [0, {S_MAX}]")));
        }
        Ok(Self(s))
    }

    pub fn s(self) -> f64 {
        self.0
    }
}

fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * libm::log(x)
    } else {
        0.0
    }
}

/// Per-symbol spectral data.
#[derive(Debug, Clone)]
struct Block {
    p: f64,
    /// Eigenvalues of `ρ_a`, negatives clamped to zero.
    rho_eigs: Vec<f64>,
    /// `|⟨u_i|w_j⟩|²` for eigenvectors `u_i` of `ρ_a` and `w_j` of `ρ^E`.
    overlaps: Vec<Vec<f64>>,
    /// Eigenvalues `ξ_k` of `X_a = (ρ^E)^{-1/2} ρ_a (ρ^E)^{-1/2}` on its support.
    sandwich_eigs: Vec<f64>,
    /// `⟨x_k|ρ_a|x_k⟩` matching `sandwich_eigs`.
    sandwich_weights: Vec<f64>,
    /// Weight of `ρ_a` on the kernel of `X_a`.
    kernel_weight: f64,
    sandwich_norm: f64,
    /// `‖ρ_a − ρ^E‖₁`
    dist_to_marginal: f64,
    /// `‖P(a)ρ_a − ρ^E/|A|‖₁`
    dist_to_mixed: f64,
}

/// A cq-state with its block spectra precomputed.
#[derive(Debug, Clone)]
pub struct PreparedState<'a> {
    state: &'a CQState,
    sigma: &'a Spectrum,
    blocks: Vec<Block>,
    log_alphabet: f64,
    classical_entropy: f64,
}

impl<'a> PreparedState<'a> {
    pub fn new(state: &'a CQState) -> Result<Self> {
        let marginal = state.eve_marginal();
        let sigma = marginal.spectrum()?;
        let sigma_thresh = sigma.zero_threshold(SUPPORT_TOL);
        let inv_sqrt = sigma.map(|m| if m > sigma_thresh { 1.0 / libm::sqrt(m) } else { 0.0 });
        let alphabet = state.alphabet_size() as f64;
        let mixed_marginal = marginal.scale(1.0 / alphabet);

        let mut blocks = Vec::with_capacity(state.alphabet_size());
        for (&p, rho) in state.probs().iter().zip(state.eve_states()) {
            let dist_to_mixed = trace_norm(&rho.scale(p).sub(&mixed_marginal)?)?;
            if p <= 0.0 {
                blocks.push(Block {
                    p: 0.0,
                    rho_eigs: Vec::new(),
                    overlaps: Vec::new(),
                    sandwich_eigs: Vec::new(),
                    sandwich_weights: Vec::new(),
                    kernel_weight: 0.0,
                    sandwich_norm: 0.0,
                    dist_to_marginal: 0.0,
                    dist_to_mixed,
                });
                continue;
            }
            let rs = rho.spectrum()?;
            let rho_thresh = rs.zero_threshold(SUPPORT_TOL);
            let rho_eigs = rs
                .eigenvalues()
                .iter()
                .map(|&l| if l > rho_thresh { l } else { 0.0 })
                .collect();
            let overlaps = rs.overlaps(sigma)?;

            let x = rho.sandwich(&inv_sqrt)?;
            let xs = x.spectrum()?;
            let weights = xs.weights_of(rho)?;
            let x_thresh = xs.zero_threshold(SUPPORT_TOL);
            let mut sandwich_eigs = Vec::new();
            let mut sandwich_weights = Vec::new();
            let mut kernel = Vec::new();
            for (&xi, &w) in xs.eigenvalues().iter().zip(&weights) {
                if xi > x_thresh {
                    sandwich_eigs.push(xi);
                    sandwich_weights.push(w);
                } else {
                    kernel.push(w);
                }
            }
            blocks.push(Block {
                p,
                rho_eigs,
                overlaps,
                sandwich_norm: xs.max_abs(),
                sandwich_eigs,
                sandwich_weights,
                kernel_weight: pairwise_sum(&kernel),
                dist_to_marginal: trace_norm(&rho.sub(marginal)?)?,
                dist_to_mixed,
            });
        }
        Ok(Self {
            state,
            sigma,
            blocks,
            log_alphabet: libm::log(alphabet),
            classical_entropy: state.classical_entropy(),
        })
    }

    pub fn state(&self) -> &CQState {
        self.state
    }

    /// Spectrum of `ρ^E`.
    pub fn eve_spectrum(&self) -> &Spectrum {
        self.sigma
    }

    /// Number of distinct eigenvalues of `ρ^E`.
    pub fn distinct_eigenvalue_count(&self) -> usize {
        self.sigma.distinct_count()
    }

    fn live(&self) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(|b| b.p > 0.0)
    }

    fn sigma_support(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let t = self.sigma.zero_threshold(SUPPORT_TOL);
        self.sigma
            .eigenvalues()
            .iter()
            .copied()
            .enumerate()
            .filter(move |&(_, m)| m > t)
    }

    /// `H(A)` of the classical marginal.
    pub fn h_a(&self) -> f64 {
        self.classical_entropy
    }

    /// `H(E) = −Tr ρ^E log ρ^E`.
    pub fn h_e(&self) -> f64 {
        let terms: Vec<f64> = self.sigma.eigenvalues().iter().map(|&m| -xlogx(m.max(0.0))).collect();
        pairwise_sum(&terms)
    }

    /// `H(A,E) = H(A) + Σ_a P(a) S(ρ_a)`.
    pub fn h_ae(&self) -> f64 {
        let terms: Vec<f64> = self
            .live()
            .map(|b| -b.p * pairwise_sum(&b.rho_eigs.iter().map(|&l| xlogx(l)).collect::<Vec<_>>()))
            .collect();
        self.classical_entropy + pairwise_sum(&terms)
    }

    /// `H(A|E) = H(A,E) − H(E)`.
    pub fn cond_entropy(&self) -> f64 {
        self.h_ae() - self.h_e()
    }

    /// `Σ_a P(a) Tr ρ_a log X_a`, or `−∞` when some `ρ_a` leaves the support of `X_a`.
    fn sandwich_log_trace(&self) -> f64 {
        let mut terms = Vec::new();
        for b in self.live() {
            if b.kernel_weight > KERNEL_WEIGHT_TOL {
                return f64::NEG_INFINITY;
            }
            let inner: Vec<f64> = b
                .sandwich_eigs
                .iter()
                .zip(&b.sandwich_weights)
                .map(|(&xi, &w)| w * libm::log(xi))
                .collect();
            terms.push(b.p * pairwise_sum(&inner));
        }
        pairwise_sum(&terms)
    }

    /// `H̄(A|E) = −Tr ρ log((I ⊗ (ρ^E)^{-1/2}) ρ (I ⊗ (ρ^E)^{-1/2}))`.
    pub fn cond_entropy_bar(&self) -> f64 {
        self.classical_entropy - self.sandwich_log_trace()
    }

    /// `Σ_a P(a)^{1+s} Tr ρ_a^{1+s} (ρ^E)^{-s}` for `s > 0`.
    pub fn renyi_trace(&self, s: f64) -> f64 {
        let support: Vec<(usize, f64)> = self.sigma_support().collect();
        let terms: Vec<f64> = self
            .live()
            .map(|b| {
                let mut inner = Vec::with_capacity(b.rho_eigs.len() * support.len());
                for (i, &l) in b.rho_eigs.iter().enumerate() {
                    if l <= 0.0 {
                        continue;
                    }
                    let lp = libm::pow(l, 1.0 + s);
                    for &(j, m) in &support {
                        inner.push(lp * libm::pow(m, -s) * b.overlaps[i][j]);
                    }
                }
                libm::pow(b.p, 1.0 + s) * pairwise_sum(&inner)
            })
            .collect();
        pairwise_sum(&terms)
    }

    /// `H_{1+s}(A|E)`; `s = 0` gives `H(A|E)`.
    pub fn renyi_cond(&self, order: RenyiOrder) -> f64 {
        let s = order.s();
        if s == 0.0 {
            return self.cond_entropy();
        }
        -libm::log(self.renyi_trace(s)) / s
    }

    /// Unchecked `s·H_{1+s}(A|E)` for `s ∈ [0, ∞)`; zero at `s = 0`.
    pub fn scaled_renyi(&self, s: f64) -> f64 {
        if s == 0.0 {
            0.0
        } else {
            -libm::log(self.renyi_trace(s))
        }
    }

    /// `Σ_a P(a)^{1+s} Tr ρ_a X_a^s`.
    pub fn bar_star_trace(&self, s: f64) -> f64 {
        let terms: Vec<f64> = self
            .live()
            .map(|b| {
                let inner: Vec<f64> = b
                    .sandwich_eigs
                    .iter()
                    .zip(&b.sandwich_weights)
                    .map(|(&xi, &w)| w * libm::pow(xi, s))
                    .collect();
                libm::pow(b.p, 1.0 + s) * pairwise_sum(&inner)
            })
            .collect();
        pairwise_sum(&terms)
    }

    /// `H̄*_{1+s}(A|E)` for `s ∈ (0, 4]`.
    pub fn renyi_cond_bar_star(&self, order: RenyiOrder) -> Result<f64> {
        let s = order.s();
        if s == 0.0 {
            return Err(Error::Domain(
                "H̄*_{1+s} at s = 0 is the limit H̄(A|E); use cond_entropy_bar".to_string(),
            ));
        }
        Ok(-libm::log(self.bar_star_trace(s)) / s)
    }

    /// `H_min(A|E) = −log max_a ‖P(a) (ρ^E)^{-1/2} ρ_a (ρ^E)^{-1/2}‖`.
    pub fn min_entropy(&self) -> f64 {
        let norm = self.live().fold(0.0_f64, |m, b| m.max(b.p * b.sandwich_norm));
        -libm::log(norm)
    }

    /// `I(A:E) = Σ_a P(a) D(ρ_a‖ρ^E)`.
    pub fn mutual_info(&self) -> f64 {
        let support: Vec<(usize, f64)> = self.sigma_support().collect();
        let terms: Vec<f64> = self
            .live()
            .map(|b| {
                let neg_entropy: Vec<f64> = b.rho_eigs.iter().map(|&l| xlogx(l)).collect();
                let mut cross = Vec::new();
                for (i, &l) in b.rho_eigs.iter().enumerate() {
                    for &(j, m) in &support {
                        cross.push(l * libm::log(m) * b.overlaps[i][j]);
                    }
                }
                b.p * (pairwise_sum(&neg_entropy) - pairwise_sum(&cross))
            })
            .collect();
        pairwise_sum(&terms)
    }

    /// Both mutual-information variants and their uniform-reference modifications.
    pub fn mutual_info_variants(&self) -> MutualInfo {
        let non_uniformity = self.log_alphabet - self.classical_entropy;
        let i = self.mutual_info();
        let i_bar = self.sandwich_log_trace();
        MutualInfo {
            i,
            i_prime: i + non_uniformity,
            i_bar,
            i_bar_prime: i_bar + non_uniformity,
        }
    }

    /// `I'(A:E) = D(ρ ‖ ρ_mix^A ⊗ ρ^E)`.
    pub fn i_prime(&self) -> f64 {
        self.mutual_info() + self.log_alphabet - self.classical_entropy
    }

    /// `Ī'(A:E)`; `−∞` outside the support condition.
    pub fn i_bar_prime(&self) -> f64 {
        self.sandwich_log_trace() + self.log_alphabet - self.classical_entropy
    }

    /// `d1 = ‖ρ − ρ^A⊗ρ^E‖₁` and `d1' = ‖ρ − ρ_mix^A⊗ρ^E‖₁`.
    pub fn trace_distances(&self) -> TraceDistances {
        let d1: Vec<f64> = self.live().map(|b| b.p * b.dist_to_marginal).collect();
        let d1p: Vec<f64> = self.blocks.iter().map(|b| b.dist_to_mixed).collect();
        TraceDistances {
            d1: pairwise_sum(&d1),
            d1_prime: pairwise_sum(&d1p),
        }
    }

    /// `φ(t|A|E) = log Tr (Σ_a (P(a)ρ_a)^{1/(1−t)})^{1−t}` for `t ∈ [0, 1)`.
    pub fn phi_extended(&self, t: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&t) {
            return Err(Error::Domain(format!("φ(t) needs t in [0, 1), got {t}")));
        }
        let r = 1.0 / (1.0 - t);
        let d = self.state.eve_dim();
        let mut acc = HermitianMatrix::zeros(d);
        for (&p, rho) in self.state.probs().iter().zip(self.state.eve_states()) {
            if p <= 0.0 {
                continue;
            }
            let rs = rho.spectrum()?;
            let thresh = rs.zero_threshold(SUPPORT_TOL);
            let powered = rs.map(|l| if l > thresh { libm::pow(p * l, r) } else { 0.0 });
            acc = acc.add(&powered)?;
        }
        let spec = acc.spectrum()?;
        let terms: Vec<f64> = spec
            .eigenvalues()
            .iter()
            .map(|&m| if m > 0.0 { libm::pow(m, 1.0 - t) } else { 0.0 })
            .collect();
        Ok(libm::log(pairwise_sum(&terms)))
    }

    /// `φ(t|A|E)` on the range `t ∈ [0, 1/2]` used by the smoothing exponents.
    pub fn phi(&self, t: f64) -> Result<f64> {
        if !(0.0..=0.5).contains(&t) {
            return Err(Error::Domain(format!("φ(t) is evaluated for t in [0, 1/2], got {t}")));
        }
        self.phi_extended(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VonNeumann {
    pub h_ae: f64,
    pub h_e: f64,
    pub h_a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutualInfo {
    pub i: f64,
    pub i_prime: f64,
    pub i_bar: f64,
    pub i_bar_prime: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceDistances {
    pub d1: f64,
    pub d1_prime: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeEntropies {
    /// `D(ρ‖σ) = Tr ρ(log ρ − log σ)`; `+∞` if `supp ρ ⊄ supp σ`.
    pub d: f64,
    /// `D̄(ρ‖σ) = Tr ρ log(σ^{-1/2} ρ σ^{-1/2})`; `±∞` on support violations.
    pub d_bar: f64,
}

pub fn von_neumann_entropies(state: &CQState) -> Result<VonNeumann> {
    let p = PreparedState::new(state)?;
    Ok(VonNeumann {
        h_ae: p.h_ae(),
        h_e: p.h_e(),
        h_a: p.h_a(),
    })
}

pub fn cond_entropy(state: &CQState) -> Result<f64> {
    Ok(PreparedState::new(state)?.cond_entropy())
}

pub fn cond_entropy_bar(state: &CQState) -> Result<f64> {
    Ok(PreparedState::new(state)?.cond_entropy_bar())
}

pub fn renyi_cond(state: &CQState, order: RenyiOrder) -> Result<f64> {
    Ok(PreparedState::new(state)?.renyi_cond(order))
}

pub fn renyi_cond_bar_star(state: &CQState, order: RenyiOrder) -> Result<f64> {
    PreparedState::new(state)?.renyi_cond_bar_star(order)
}

pub fn min_entropy(state: &CQState) -> Result<f64> {
    Ok(PreparedState::new(state)?.min_entropy())
}

pub fn mutual_info_variants(state: &CQState) -> Result<MutualInfo> {
    Ok(PreparedState::new(state)?.mutual_info_variants())
}

pub fn trace_distances(state: &CQState) -> Result<TraceDistances> {
    Ok(PreparedState::new(state)?.trace_distances())
}

pub fn phi_quantity(state: &CQState, t: f64) -> Result<f64> {
    PreparedState::new(state)?.phi(t)
}

/// `D` and `D̄` for arbitrary PSD operators of equal dimension.
pub fn relative_entropies(rho: &HermitianMatrix, sigma: &HermitianMatrix) -> Result<RelativeEntropies> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma.dim(),
            found: rho.dim(),
        });
    }
    let ss = sigma.spectrum()?;
    let rs = rho.spectrum()?;
    let s_thresh = ss.zero_threshold(SUPPORT_TOL);
    let r_thresh = rs.zero_threshold(SUPPORT_TOL);

    let sigma_weights = ss.weights_of(rho)?;
    let outside: Vec<f64> = ss
        .eigenvalues()
        .iter()
        .zip(&sigma_weights)
        .filter(|(&m, _)| m <= s_thresh)
        .map(|(_, &w)| w)
        .collect();
    if pairwise_sum(&outside) > KERNEL_WEIGHT_TOL {
        return Ok(RelativeEntropies {
            d: f64::INFINITY,
            d_bar: f64::INFINITY,
        });
    }

    let overlaps = rs.overlaps(ss)?;
    let mut terms = Vec::new();
    for (i, &l) in rs.eigenvalues().iter().enumerate() {
        if l <= r_thresh {
            continue;
        }
        terms.push(xlogx(l));
        for (j, &m) in ss.eigenvalues().iter().enumerate() {
            if m > s_thresh {
                terms.push(-l * libm::log(m) * overlaps[i][j]);
            }
        }
    }
    let d = pairwise_sum(&terms);

    let inv_sqrt = ss.map(|m| if m > s_thresh { 1.0 / libm::sqrt(m) } else { 0.0 });
    let x = rho.sandwich(&inv_sqrt)?;
    let xs = x.spectrum()?;
    let x_thresh = xs.zero_threshold(SUPPORT_TOL);
    let weights = xs.weights_of(rho)?;
    let mut kernel = Vec::new();
    let mut logs = Vec::new();
    for (&xi, &w) in xs.eigenvalues().iter().zip(&weights) {
        if xi > x_thresh {
            logs.push(w * libm::log(xi));
        } else {
            kernel.push(w);
        }
    }
    let d_bar = if pairwise_sum(&kernel) > KERNEL_WEIGHT_TOL {
        f64::NEG_INFINITY
    } else {
        pairwise_sum(&logs)
    };
    Ok(RelativeEntropies { d, d_bar })
}

/// One named value in a [`QuantityReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    /// Stable identifier, e.g. `H_renyi(0.5)`.
    pub key: String,
    /// Conventional symbol, e.g. `H_{1+s}(A|E)`.
    pub symbol: String,
    /// Parameter (`s` or `t`) when the quantity has one.
    pub param: Option<f64>,
    /// Value in nats.
    pub value: f64,
}

/// Every information quantity of a state at the requested orders, in nats.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantityReport {
    pub entries: Vec<Quantity>,
}

impl QuantityReport {
    pub fn get(&self, key: &str) -> Option<f64> {
        self.entries.iter().find(|q| q.key == key).map(|q| q.value)
    }

    /// `s_values` are Rényi parameters in `[0, 4]`; `φ(t)` is reported at those in `[0, 1/2]`.
    pub fn compute(state: &CQState, s_values: &[f64]) -> Result<Self> {
        let p = PreparedState::new(state)?;
        let mi = p.mutual_info_variants();
        let td = p.trace_distances();
        let mut entries = Vec::new();
        let mut push = |key: &str, symbol: &str, param: Option<f64>, value: f64| {
            let key = match param {
                Some(x) => format!("{key}({x})"),
                None => key.to_string(),
            };
            entries.push(Quantity {
                key,
                symbol: symbol.to_string(),
                param,
                value,
            });
        };
        push("H_AE", "H(A,E)", None, p.h_ae());
        push("H_E", "H(E)", None, p.h_e());
        push("H_A", "H(A)", None, p.h_a());
        push("H_cond", "H(A|E)", None, p.cond_entropy());
        push("H_cond_bar", "H̄(A|E)", None, p.cond_entropy_bar());
        push("H_min", "H_min(A|E)", None, p.min_entropy());
        push("I", "I(A:E)", None, mi.i);
        push("I_prime", "I'(A:E)", None, mi.i_prime);
        push("I_bar", "Ī(A:E)", None, mi.i_bar);
        push("I_bar_prime", "Ī'(A:E)", None, mi.i_bar_prime);
        push("d1", "d1(A:E)", None, td.d1);
        push("d1_prime", "d1'(A:E)", None, td.d1_prime);
        for &s in s_values {
            let order = RenyiOrder::new(s)?;
            push("H_renyi", "H_{1+s}(A|E)", Some(s), p.renyi_cond(order));
            if s > 0.0 {
                push("H_renyi_bar_star", "H̄*_{1+s}(A|E)", Some(s), p.renyi_cond_bar_star(order)?);
            }
            if s <= 0.5 {
                push("phi", "φ(t|A|E)", Some(s), p.phi(s)?);
            }
        }
        Ok(Self { entries })
    }
}

/// Direct evaluation on the `|A|·d_E`-dimensional joint operators.
///
/// Slow (`O((|A| d_E)³)`) and independent of the blockwise path above; used to
/// cross-check it.
pub mod joint {
    use super::*;
    use crate::hermitian::{matrix_function, tensor, MatrixFunction};

    /// `ρ^E` obtained by tracing `A` out of the joint matrix.
    pub fn partial_trace_a(joint: &HermitianMatrix, alphabet: usize) -> Result<HermitianMatrix> {
        let d = joint.dim() / alphabet;
        HermitianMatrix::from_fn(d, |i, j| (0..alphabet).map(|a| joint.entry(a * d + i, a * d + j)).sum())
    }

    fn diag_a(weights: &[f64]) -> Result<HermitianMatrix> {
        HermitianMatrix::from_real_diagonal(weights)
    }

    struct Parts {
        rho: HermitianMatrix,
        sigma: HermitianMatrix,
        alphabet: usize,
    }

    fn parts(state: &CQState) -> Result<Parts> {
        let rho = state.joint_density()?;
        let alphabet = state.alphabet_size();
        let sigma = partial_trace_a(&rho, alphabet)?;
        Ok(Parts { rho, sigma, alphabet })
    }

    fn entropy(m: &HermitianMatrix) -> Result<f64> {
        Ok(-m.spectrum()?.eigenvalues().iter().map(|&l| xlogx(l.max(0.0))).sum::<f64>())
    }

    /// `(I ⊗ (ρ^E)^{-1/2}) ρ (I ⊗ (ρ^E)^{-1/2})`.
    fn sandwiched(p: &Parts) -> Result<HermitianMatrix> {
        let inv_sqrt = matrix_function(&p.sigma, MatrixFunction::Power(-0.5), SUPPORT_TOL)?;
        let lifted = tensor(&HermitianMatrix::identity(p.alphabet), &inv_sqrt)?;
        p.rho.sandwich(&lifted)
    }

    pub fn cond_entropy(state: &CQState) -> Result<f64> {
        let p = parts(state)?;
        Ok(entropy(&p.rho)? - entropy(&p.sigma)?)
    }

    pub fn cond_entropy_bar(state: &CQState) -> Result<f64> {
        let p = parts(state)?;
        let log = matrix_function(&sandwiched(&p)?, MatrixFunction::Log, SUPPORT_TOL)?;
        Ok(-p.rho.trace_product(&log)?)
    }

    pub fn renyi_cond(state: &CQState, s: f64) -> Result<f64> {
        let p = parts(state)?;
        let rho_pow = matrix_function(&p.rho, MatrixFunction::Power(1.0 + s), SUPPORT_TOL)?;
        let sigma_pow = matrix_function(&p.sigma, MatrixFunction::Power(-s), SUPPORT_TOL)?;
        let lifted = tensor(&HermitianMatrix::identity(p.alphabet), &sigma_pow)?;
        Ok(-libm::log(rho_pow.trace_product(&lifted)?) / s)
    }

    pub fn renyi_cond_bar_star(state: &CQState, s: f64) -> Result<f64> {
        let p = parts(state)?;
        let x = matrix_function(&sandwiched(&p)?, MatrixFunction::Power(s), SUPPORT_TOL)?;
        Ok(-libm::log(p.rho.trace_product(&x)?) / s)
    }

    pub fn min_entropy(state: &CQState) -> Result<f64> {
        let p = parts(state)?;
        Ok(-libm::log(sandwiched(&p)?.spectrum()?.max_abs()))
    }

    pub fn mutual_info_variants(state: &CQState) -> Result<MutualInfo> {
        let p = parts(state)?;
        let marg = diag_a(state.probs())?;
        let mixed = diag_a(&alloc::vec![1.0 / p.alphabet as f64; p.alphabet])?;
        let prod = tensor(&marg, &p.sigma)?;
        let mix = tensor(&mixed, &p.sigma)?;
        let a = relative_entropies(&p.rho, &prod)?;
        let b = relative_entropies(&p.rho, &mix)?;
        Ok(MutualInfo {
            i: a.d,
            i_prime: b.d,
            i_bar: a.d_bar,
            i_bar_prime: b.d_bar,
        })
    }

    pub fn trace_distances(state: &CQState) -> Result<TraceDistances> {
        let p = parts(state)?;
        let marg = diag_a(state.probs())?;
        let mixed = diag_a(&alloc::vec![1.0 / p.alphabet as f64; p.alphabet])?;
        Ok(TraceDistances {
            d1: trace_norm(&p.rho.sub(&tensor(&marg, &p.sigma)?)?)?,
            d1_prime: trace_norm(&p.rho.sub(&tensor(&mixed, &p.sigma)?)?)?,
        })
    }

    /// `log Tr_E (Tr_A ρ^{1/(1−t)})^{1−t}`.
    pub fn phi(state: &CQState, t: f64) -> Result<f64> {
        let p = parts(state)?;
        let powered = matrix_function(&p.rho, MatrixFunction::Power(1.0 / (1.0 - t)), SUPPORT_TOL)?;
        let reduced = partial_trace_a(&powered, p.alphabet)?;
        let outer = matrix_function(&reduced, MatrixFunction::Power(1.0 - t), SUPPORT_TOL)?;
        Ok(libm::log(outer.trace()))
    }
}
