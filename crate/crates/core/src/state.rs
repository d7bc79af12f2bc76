//! Classical-quantum states `ρ = Σ_a P(a)|a⟩⟨a| ⊗ ρ_a`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use once_cell::race::OnceBox;

use crate::error::{Error, Result};
use crate::hermitian::{tensor_with_cap, HermitianMatrix, DEFAULT_DIM_CAP};
use crate::sum::pairwise_sum;

pub const PROB_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const KRAUS_TOL: f64 = 1e-10;

/// A classical register `A` with distribution `P` and one Eve density matrix per symbol.
pub struct CQState {
    probs: Vec<f64>,
    eve_states: Vec<HermitianMatrix>,
    eve_marginal: OnceBox<HermitianMatrix>,
}

impl Clone for CQState {
    fn clone(&self) -> Self {
        Self::from_parts(self.probs.clone(), self.eve_states.clone())
    }
}

impl fmt::Debug for CQState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CQState")
            .field("probs", &self.probs)
            .field("eve_states", &self.eve_states)
            .finish()
    }
}

/// Validating constructor for a cq-state.
pub fn make_cq_state(probs: Vec<f64>, rhos: Vec<HermitianMatrix>) -> Result<CQState> {
    CQState::new(probs, rhos)
}

impl CQState {
    pub fn new(mut probs: Vec<f64>, eve_states: Vec<HermitianMatrix>) -> Result<Self> {
        if probs.len() != eve_states.len() {
            return Err(Error::LengthMismatch {
                probs: probs.len(),
                states: eve_states.len(),
            });
        }
        if probs.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::NegativeProbability { index, value });
            }
        }
        let total = pairwise_sum(&probs);
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::ProbabilitySum(total));
        }
        let d = eve_states[0].dim();
        for (index, rho) in eve_states.iter().enumerate() {
            if rho.dim() != d {
                return Err(Error::EveDimensionMismatch {
                    index,
                    expected: d,
                    found: rho.dim(),
                });
            }
            let trace = rho.trace();
            if (trace - 1.0).abs() > TRACE_TOL {
                return Err(Error::TraceNotOne { index, trace });
            }
            let min_eigenvalue = rho.min_eigenvalue()?;
            if min_eigenvalue < -PSD_TOL {
                return Err(Error::NotPsd { index, min_eigenvalue });
            }
        }
        for p in probs.iter_mut() {
            *p = p.max(0.0);
        }
        Ok(Self::from_parts(probs, eve_states))
    }

    /// For states derived from valid ones; correct up to rounding by construction.
    pub(crate) fn from_parts(probs: Vec<f64>, eve_states: Vec<HermitianMatrix>) -> Self {
        Self {
            probs,
            eve_states,
            eve_marginal: OnceBox::new(),
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    pub fn eve_dim(&self) -> usize {
        self.eve_states[0].dim()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn eve_states(&self) -> &[HermitianMatrix] {
        &self.eve_states
    }

    pub fn eve_state(&self, a: usize) -> &HermitianMatrix {
        &self.eve_states[a]
    }

    /// `ρ^E = Σ_a P(a) ρ_a`, computed once.
    pub fn eve_marginal(&self) -> &HermitianMatrix {
        self.eve_marginal.get_or_init(|| {
            let d = self.eve_dim();
            let data = DMatrix::from_fn(d, d, |i, j| {
                let re: Vec<f64> = self
                    .probs
                    .iter()
                    .zip(&self.eve_states)
                    .map(|(p, r)| p * r.entry(i, j).re)
                    .collect();
                let im: Vec<f64> = self
                    .probs
                    .iter()
                    .zip(&self.eve_states)
                    .map(|(p, r)| p * r.entry(i, j).im)
                    .collect();
                Complex64::new(pairwise_sum(&re), pairwise_sum(&im))
            });
            Box::new(HermitianMatrix::symmetrized(data))
        })
    }

    /// Shannon entropy of the classical marginal `P`.
    pub fn classical_entropy(&self) -> f64 {
        let terms: Vec<f64> = self
            .probs
            .iter()
            .map(|&p| if p > 0.0 { -p * libm::log(p) } else { 0.0 })
            .collect();
        pairwise_sum(&terms)
    }

    /// Block-diagonal `Σ_a P(a)|a⟩⟨a| ⊗ ρ_a`, basis index `a·d_E + e`.
    pub fn joint_density(&self) -> Result<HermitianMatrix> {
        self.joint_density_with_cap(DEFAULT_DIM_CAP)
    }

    pub fn joint_density_with_cap(&self, cap: usize) -> Result<HermitianMatrix> {
        let d = self.eve_dim();
        let n = self.alphabet_size() * d;
        if n > cap {
            return Err(Error::SizeCap { dim: n, cap });
        }
        let mut data = DMatrix::zeros(n, n);
        for (a, (p, rho)) in self.probs.iter().zip(&self.eve_states).enumerate() {
            for i in 0..d {
                for j in 0..d {
                    data[(a * d + i, a * d + j)] = rho.entry(i, j) * *p;
                }
            }
        }
        Ok(HermitianMatrix::symmetrized(data))
    }

    /// Hashes the classical register: `P'(i) = Σ_{f(a)=i} P(a)`,
    /// `ρ'_i = Σ_{f(a)=i} P(a)ρ_a / P'(i)`. Empty preimages get `I/d` with probability 0.
    pub fn apply_function(&self, f: &ClassicalFunction) -> Result<CQState> {
        if f.domain_size() != self.alphabet_size() {
            return Err(Error::AlphabetMismatch {
                family: f.domain_size(),
                alphabet: self.alphabet_size(),
            });
        }
        let d = self.eve_dim();
        let m = f.range_size();
        let mut groups: Vec<Vec<usize>> = (0..m).map(|_| Vec::new()).collect();
        for (a, &i) in f.table().iter().enumerate() {
            groups[i].push(a);
        }
        let mut probs = Vec::with_capacity(m);
        let mut states = Vec::with_capacity(m);
        for members in &groups {
            let weights: Vec<f64> = members.iter().map(|&a| self.probs[a]).collect();
            let p = pairwise_sum(&weights);
            if p > 0.0 {
                let mut acc = DMatrix::<Complex64>::zeros(d, d);
                for &a in members {
                    acc += self.eve_states[a].matrix() * Complex64::new(self.probs[a] / p, 0.0);
                }
                states.push(HermitianMatrix::symmetrized(acc));
            } else {
                states.push(HermitianMatrix::identity(d).scale(1.0 / d as f64));
            }
            probs.push(p);
        }
        Ok(CQState::from_parts(probs, states))
    }

    /// Applies the channel `ρ_a ↦ Σ_k K ρ_a K†` on Eve's side.
    pub fn apply_eve_channel(&self, kraus: &[DMatrix<Complex64>]) -> Result<CQState> {
        let d = self.eve_dim();
        let first = kraus.first().ok_or(Error::NotTracePreserving(1.0))?;
        let d_out = first.nrows();
        let mut completeness = DMatrix::<Complex64>::zeros(d, d);
        for k in kraus {
            if k.ncols() != d || k.nrows() != d_out {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: k.ncols(),
                });
            }
            completeness += k.adjoint() * k;
        }
        let deviation = (completeness - DMatrix::identity(d, d)).norm();
        if deviation > KRAUS_TOL {
            return Err(Error::NotTracePreserving(deviation));
        }
        let mut states = Vec::with_capacity(self.alphabet_size());
        for rho in &self.eve_states {
            let mut acc = DMatrix::<Complex64>::zeros(d_out, d_out);
            for k in kraus {
                acc += k * rho.matrix() * k.adjoint();
            }
            states.push(HermitianMatrix::symmetrized(acc));
        }
        Ok(CQState::from_parts(self.probs.clone(), states))
    }

    /// `ρ^{⊗n}` with the default joint-dimension cap.
    pub fn tensor_power(&self, n: usize) -> Result<CQState> {
        self.tensor_power_with_cap(n, DEFAULT_DIM_CAP)
    }

    /// Alphabet `A^n` indexed little-endian (`index = Σ a_i |A|^i`), with
    /// `ρ_{a⃗} = ρ_{a_0} ⊗ ρ_{a_1} ⊗ …`.
    pub fn tensor_power_with_cap(&self, n: usize, cap: usize) -> Result<CQState> {
        if n == 0 {
            return Err(Error::Domain("tensor power needs n >= 1".to_string()));
        }
        let joint = (self.alphabet_size() * self.eve_dim()).checked_pow(n as u32);
        match joint {
            Some(dim) if dim <= cap => {}
            other => {
                return Err(Error::Domain(format!(
                    "joint dimension {} of the {n}-fold state exceeds the cap {cap}; use additivity (s·H_{{1+s}} scales with n) instead",
                    other.map_or("overflow".to_string(), |d| d.to_string())
                )))
            }
        }
        let size = self.alphabet_size();
        let total = size.pow(n as u32);
        let mut probs = Vec::with_capacity(total);
        let mut states = Vec::with_capacity(total);
        for index in 0..total {
            let mut rest = index;
            let mut p = 1.0;
            let mut rho: Option<HermitianMatrix> = None;
            for _ in 0..n {
                let a = rest % size;
                rest /= size;
                p *= self.probs[a];
                rho = Some(match rho {
                    None => self.eve_states[a].clone(),
                    Some(r) => tensor_with_cap(&r, &self.eve_states[a], cap)?,
                });
            }
            probs.push(p);
            states.push(rho.expect("n >= 1"));
        }
        Ok(CQState::from_parts(probs, states))
    }
}

/// A map `{0..|A|-1} → {0..M-1}` given by its table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalFunction {
    table: Vec<usize>,
    range_size: usize,
}

impl ClassicalFunction {
    pub fn new(table: Vec<usize>, range_size: usize) -> Result<Self> {
        if range_size == 0 {
            return Err(Error::InvalidFunction("empty range".to_string()));
        }
        if let Some((a, &i)) = table.iter().enumerate().find(|(_, &i)| i >= range_size) {
            return Err(Error::InvalidFunction(format!(
                "f({a}) = {i} is outside the range of size {range_size}"
            )));
        }
        Ok(Self { table, range_size })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            table: (0..n).collect(),
            range_size: n,
        }
    }

    pub fn constant(domain: usize, range_size: usize, value: usize) -> Result<Self> {
        Self::new(alloc::vec![value; domain], range_size)
    }

    pub fn domain_size(&self) -> usize {
        self.table.len()
    }

    pub fn range_size(&self) -> usize {
        self.range_size
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, a: usize) -> usize {
        self.table[a]
    }
}

/// Kraus operators of `ρ ↦ (1-p)ρ + p·Tr(ρ)·I/d`.
pub fn depolarizing_kraus(d: usize, p: f64) -> Result<Vec<DMatrix<Complex64>>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("depolarizing probability {p} outside [0, 1]")));
    }
    let mut ks = Vec::with_capacity(1 + d * d);
    ks.push(DMatrix::identity(d, d) * Complex64::new(libm::sqrt(1.0 - p), 0.0));
    let amp = Complex64::new(libm::sqrt(p / d as f64), 0.0);
    for i in 0..d {
        for j in 0..d {
            let mut k = DMatrix::zeros(d, d);
            k[(i, j)] = amp;
            ks.push(k);
        }
    }
    Ok(ks)
}

/// Named test states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// `P = (1/2, 1/2)`, `ρ_a = |a⟩⟨a|`: Eve holds a perfect copy.
    Copy,
    /// `P = (1/2, 1/2)`, `ρ_a = I/2`: Eve learns nothing.
    Product,
    /// `P = (0.6, 0.4)`, `ρ_0 = diag(0.95, 0.05)`, `ρ_1 = 0.9|+⟩⟨+| + 0.05 I` (non-commuting).
    TiltedQubit,
    /// `P = (1/2, 1/2)`, pure probes `cos θ|0⟩ + (-1)^a sin θ|1⟩`.
    Bb84 { theta: f64 },
    /// The copy state after a depolarizing channel with probability `p`.
    Depolarized { p: f64 },
}

impl Preset {
    pub const DEFAULT_BB84_THETA: f64 = core::f64::consts::PI / 8.0;
    pub const DEFAULT_DEPOLARIZATION: f64 = 0.3;

    pub fn state(&self) -> Result<CQState> {
        let half = alloc::vec![0.5, 0.5];
        let c = |re: f64| Complex64::new(re, 0.0);
        match *self {
            Preset::Copy => CQState::new(
                half,
                alloc::vec![
                    HermitianMatrix::from_real_diagonal(&[1.0, 0.0])?,
                    HermitianMatrix::from_real_diagonal(&[0.0, 1.0])?,
                ],
            ),
            Preset::Product => {
                let mixed = HermitianMatrix::from_real_diagonal(&[0.5, 0.5])?;
                CQState::new(half, alloc::vec![mixed.clone(), mixed])
            }
            Preset::TiltedQubit => {
                let rho0 = HermitianMatrix::from_real_diagonal(&[0.95, 0.05])?;
                // 0.9|+⟩⟨+| + 0.1·I/2
                let rho1 = HermitianMatrix::from_real_rows(2, &[0.5, 0.45, 0.45, 0.5])?;
                CQState::new(alloc::vec![0.6, 0.4], alloc::vec![rho0, rho1])
            }
            Preset::Bb84 { theta } => {
                if !theta.is_finite() {
                    return Err(Error::Domain("bb84 angle must be finite".to_string()));
                }
                let (s, co) = (libm::sin(theta), libm::cos(theta));
                CQState::new(
                    half,
                    alloc::vec![
                        HermitianMatrix::outer(&[c(co), c(s)]),
                        HermitianMatrix::outer(&[c(co), c(-s)]),
                    ],
                )
            }
            Preset::Depolarized { p } => Preset::Copy
                .state()?
                .apply_eve_channel(&depolarizing_kraus(2, p)?),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Copy => f.write_str("copy"),
            Preset::Product => f.write_str("product"),
            Preset::TiltedQubit => f.write_str("tilted-qubit"),
            Preset::Bb84 { theta } => write!(f, "bb84({theta})"),
            Preset::Depolarized { p } => write!(f, "depolarized({p})"),
        }
    }
}

/// Parses a number or `pi/<n>` / `pi*<x>`.
fn parse_param(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("pi/") {
        return rest.trim().parse::<f64>().ok().map(|n| core::f64::consts::PI / n);
    }
    if let Some(rest) = s.strip_prefix("pi*") {
        return rest.trim().parse::<f64>().ok().map(|x| core::f64::consts::PI * x);
    }
    if s == "pi" {
        return Some(core::f64::consts::PI);
    }
    s.parse().ok()
}

impl FromStr for Preset {
    type Err = Error;

    /// `copy`, `product`, `tilted-qubit`, `bb84`, `bb84(pi/8)`, `depolarized`, `depolarized(0.3)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.find('(') {
            Some(open) if s.ends_with(')') => (&s[..open], Some(&s[open + 1..s.len() - 1])),
            Some(_) => return Err(Error::UnknownPreset(s.to_string())),
            None => (s, None),
        };
        let param = |default: f64| -> Result<f64> {
            match arg {
                None => Ok(default),
                Some(a) => parse_param(a).ok_or_else(|| Error::UnknownPreset(s.to_string())),
            }
        };
        match (name.trim(), arg) {
            ("copy", None) => Ok(Preset::Copy),
            ("product", None) => Ok(Preset::Product),
            ("tilted-qubit", None) => Ok(Preset::TiltedQubit),
            ("bb84", _) => Ok(Preset::Bb84 {
                theta: param(Self::DEFAULT_BB84_THETA)?,
            }),
            ("depolarized", _) => Ok(Preset::Depolarized {
                p: param(Self::DEFAULT_DEPOLARIZATION)?,
            }),
            _ => Err(Error::UnknownPreset(s.to_string())),
        }
    }
}

/// Builds a preset by name (see [`Preset`]'s `FromStr`).
pub fn preset(name: &str) -> Result<CQState> {
    name.parse::<Preset>()?.state()
}

/// Reproducible random state: `P` from normalized exponential draws, `ρ_a = GG†/Tr(GG†)`
/// with complex Gaussian `G`.
pub fn random_cq(seed: u64, alphabet: usize, eve_dim: usize) -> Result<CQState> {
    use rand::SeedableRng;
    if alphabet == 0 || eve_dim == 0 {
        return Err(Error::EmptyAlphabet);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let probs = random::probability_vector(&mut rng, alphabet);
    let states = (0..alphabet).map(|_| random::density(&mut rng, eve_dim)).collect();
    Ok(CQState::from_parts(probs, states))
}

/// Seeded generators for matrices, states and channels.
pub mod random {
    use super::*;
    use crate::hermitian::{matrix_function, MatrixFunction, SUPPORT_TOL};
    use rand::Rng;
    use rand_distr::{Distribution, Exp1, StandardNormal};

    pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
        let scale = core::f64::consts::FRAC_1_SQRT_2;
        DMatrix::from_fn(rows, cols, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re * scale, im * scale)
        })
    }

    /// `(G + G†)/2`.
    pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> HermitianMatrix {
        let g = complex_gaussian(rng, d, d);
        HermitianMatrix::symmetrized((&g + g.adjoint()) * Complex64::new(0.5, 0.0))
    }

    /// `scale · GG†/d`.
    pub fn psd<R: Rng + ?Sized>(rng: &mut R, d: usize, scale: f64) -> HermitianMatrix {
        let g = complex_gaussian(rng, d, d);
        HermitianMatrix::symmetrized(&g * g.adjoint() * Complex64::new(scale / d as f64, 0.0))
    }

    pub fn density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> HermitianMatrix {
        let g = complex_gaussian(rng, d, d);
        let gg = &g * g.adjoint();
        let tr: f64 = (0..d).map(|i| gg[(i, i)].re).sum();
        HermitianMatrix::symmetrized(gg * Complex64::new(1.0 / tr, 0.0))
    }

    pub fn probability_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
        let draws: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
        let total = pairwise_sum(&draws);
        draws.into_iter().map(|x| x / total).collect()
    }

    /// Random channel on `C^d` with `n` Kraus operators: `K_i = G_i S^{-1/2}`, `S = Σ G_i†G_i`.
    pub fn channel<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> Result<Vec<DMatrix<Complex64>>> {
        let gs: Vec<DMatrix<Complex64>> = (0..n).map(|_| complex_gaussian(rng, d, d)).collect();
        let mut s = DMatrix::<Complex64>::zeros(d, d);
        for g in &gs {
            s += g.adjoint() * g;
        }
        let inv_sqrt = matrix_function(&HermitianMatrix::symmetrized(s), MatrixFunction::Power(-0.5), SUPPORT_TOL)?;
        Ok(gs.into_iter().map(|g| g * inv_sqrt.matrix()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::trace_norm;
    use alloc::vec;
    use rand::SeedableRng;

    fn dist(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
        a.frobenius_distance(b).unwrap()
    }

    #[test]
    fn presets_validate() {
        for name in ["copy", "product", "tilted-qubit", "bb84", "bb84(pi/8)", "depolarized(0.3)", "depolarized"] {
            let s = preset(name).unwrap();
            assert_eq!(s.alphabet_size(), 2);
            assert_eq!(s.eve_dim(), 2);
        }
        assert!(matches!(preset("nope"), Err(Error::UnknownPreset(_))));
        assert!(matches!(preset("copy(1)"), Err(Error::UnknownPreset(_))));
        assert_eq!("bb84(0.5)".parse::<Preset>().unwrap(), Preset::Bb84 { theta: 0.5 });
    }

    #[test]
    fn validation_errors_are_distinct() {
        let m = HermitianMatrix::from_real_diagonal(&[0.5, 0.5]).unwrap();
        assert!(matches!(
            CQState::new(vec![0.7, 0.4], vec![m.clone(), m.clone()]),
            Err(Error::ProbabilitySum(_))
        ));
        assert!(matches!(
            CQState::new(vec![1.5, -0.5], vec![m.clone(), m.clone()]),
            Err(Error::NegativeProbability { index: 1, .. })
        ));
        assert!(matches!(
            CQState::new(vec![1.0], vec![m.clone(), m.clone()]),
            Err(Error::LengthMismatch { .. })
        ));
        let not_psd = HermitianMatrix::from_real_diagonal(&[1.5, -0.5]).unwrap();
        assert!(matches!(
            CQState::new(vec![0.5, 0.5], vec![m.clone(), not_psd]),
            Err(Error::NotPsd { index: 1, .. })
        ));
        let trace2 = HermitianMatrix::from_real_diagonal(&[1.0, 1.0]).unwrap();
        assert!(matches!(
            CQState::new(vec![0.5, 0.5], vec![trace2, m.clone()]),
            Err(Error::TraceNotOne { index: 0, .. })
        ));
        let big = HermitianMatrix::from_real_diagonal(&[0.5, 0.5, 0.0]).unwrap();
        assert!(matches!(
            CQState::new(vec![0.5, 0.5], vec![m, big]),
            Err(Error::EveDimensionMismatch { index: 1, .. })
        ));
    }

    #[test]
    fn joint_density_examples() {
        let copy = preset("copy").unwrap().joint_density().unwrap();
        assert!(dist(&copy, &HermitianMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap()) < 1e-15);
        let prod = preset("product").unwrap().joint_density().unwrap();
        assert!(dist(&prod, &HermitianMatrix::identity(4).scale(0.25)) < 1e-15);
        let tilted = preset("tilted-qubit").unwrap().joint_density().unwrap();
        assert!((tilted.trace() - 1.0).abs() < 1e-10);
        let s = tilted.spectrum().unwrap();
        assert_eq!(s.eigenvalues().iter().filter(|&&l| l > 1e-12).count(), 4);
    }

    #[test]
    fn eve_marginal_examples() {
        let half = HermitianMatrix::identity(2).scale(0.5);
        assert!(dist(preset("copy").unwrap().eve_marginal(), &half) < 1e-15);
        assert!(dist(preset("product").unwrap().eve_marginal(), &half) < 1e-15);
        let want = HermitianMatrix::from_real_rows(
            2,
            &[0.6 * 0.95 + 0.4 * 0.5, 0.4 * 0.45, 0.4 * 0.45, 0.6 * 0.05 + 0.4 * 0.5],
        )
        .unwrap();
        assert!(dist(preset("tilted-qubit").unwrap().eve_marginal(), &want) < 1e-15);
    }

    #[test]
    fn eve_marginal_is_partial_trace_of_joint() {
        for seed in 0..5 {
            let s = random_cq(seed, 3, 3).unwrap();
            let joint = s.joint_density().unwrap();
            let d = s.eve_dim();
            let pt = HermitianMatrix::from_fn(d, |i, j| {
                (0..s.alphabet_size()).map(|a| joint.entry(a * d + i, a * d + j)).sum()
            })
            .unwrap();
            assert!(dist(&pt, s.eve_marginal()) < 1e-12);
            assert!((joint.trace() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn apply_identity_and_constant() {
        let s = preset("tilted-qubit").unwrap();
        let same = s.apply_function(&ClassicalFunction::identity(2)).unwrap();
        assert_eq!(same.probs(), s.probs());
        for a in 0..2 {
            assert!(dist(same.eve_state(a), s.eve_state(a)) < 1e-15);
        }
        let copy = preset("copy").unwrap();
        let c = copy.apply_function(&ClassicalFunction::constant(2, 1, 0).unwrap()).unwrap();
        assert_eq!(c.alphabet_size(), 1);
        assert!((c.probs()[0] - 1.0).abs() < 1e-15);
        assert!(dist(c.eve_state(0), &HermitianMatrix::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn apply_function_keeps_eve_marginal_and_pads_empty_preimages() {
        let s = random_cq(3, 4, 2).unwrap();
        let f = ClassicalFunction::new(vec![0, 0, 2, 0], 3).unwrap();
        let h = s.apply_function(&f).unwrap();
        assert_eq!(h.probs()[1], 0.0);
        assert!(dist(h.eve_state(1), &HermitianMatrix::identity(2).scale(0.5)) < 1e-15);
        assert!(dist(h.eve_marginal(), s.eve_marginal()) < 1e-14);
        assert!(matches!(
            s.apply_function(&ClassicalFunction::identity(3)),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn classical_function_validation() {
        assert!(ClassicalFunction::new(vec![0, 3], 3).is_err());
        assert!(ClassicalFunction::new(vec![0, 1], 0).is_err());
    }

    #[test]
    fn channels() {
        let s = preset("tilted-qubit").unwrap();
        let id = s.apply_eve_channel(&[DMatrix::identity(2, 2)]).unwrap();
        for a in 0..2 {
            assert!(dist(id.eve_state(a), s.eve_state(a)) < 1e-15);
        }
        let full = s.apply_eve_channel(&depolarizing_kraus(2, 1.0).unwrap()).unwrap();
        for a in 0..2 {
            assert!(dist(full.eve_state(a), &HermitianMatrix::identity(2).scale(0.5)) < 1e-14);
        }
        let bad = [DMatrix::identity(2, 2) * Complex64::new(0.5, 0.0)];
        assert!(matches!(s.apply_eve_channel(&bad), Err(Error::NotTracePreserving(_))));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let k = random::channel(&mut rng, 2, 3).unwrap();
        let out = s.apply_eve_channel(&k).unwrap();
        for a in 0..2 {
            assert!((out.eve_state(a).trace() - 1.0).abs() < 1e-12);
            assert!(out.eve_state(a).min_eigenvalue().unwrap() > -1e-12);
        }
    }

    #[test]
    fn tensor_powers() {
        let s = preset("tilted-qubit").unwrap();
        let one = s.tensor_power(1).unwrap();
        for a in 0..2 {
            assert!(dist(one.eve_state(a), s.eve_state(a)) < 1e-15);
        }
        let prod2 = preset("product").unwrap().tensor_power(2).unwrap();
        assert!(dist(&prod2.joint_density().unwrap(), &HermitianMatrix::identity(16).scale(1.0 / 16.0)) < 1e-15);
        let t2 = s.tensor_power(2).unwrap();
        // index 1 = (a_0 = 1, a_1 = 0)
        assert!((t2.probs()[1] - 0.4 * 0.6).abs() < 1e-15);
        let want = crate::hermitian::tensor(s.eve_state(1), s.eve_state(0)).unwrap();
        assert!(dist(t2.eve_state(1), &want) < 1e-15);
        assert!(matches!(s.tensor_power(7), Err(Error::Domain(_))));
        assert!(s.tensor_power(0).is_err());
    }

    #[test]
    fn random_states_are_reproducible_and_valid() {
        let a = random_cq(7, 2, 2).unwrap();
        let b = random_cq(7, 2, 2).unwrap();
        assert_eq!(a.probs(), b.probs());
        assert_eq!(a.eve_state(1), b.eve_state(1));
        let c = random_cq(8, 2, 2).unwrap();
        assert_ne!(a.probs(), c.probs());
        let checked = CQState::new(a.probs().to_vec(), a.eve_states().to_vec());
        assert!(checked.is_ok());
    }

    #[test]
    fn depolarized_preset_is_the_expected_mixture() {
        let s = preset("depolarized(0.3)").unwrap();
        let want = HermitianMatrix::from_real_diagonal(&[0.85, 0.15]).unwrap();
        assert!(dist(s.eve_state(0), &want) < 1e-14);
        let d = s.eve_state(0).sub(s.eve_state(1)).unwrap();
        assert!((trace_norm(&d).unwrap() - 1.4).abs() < 1e-12);
    }
}
