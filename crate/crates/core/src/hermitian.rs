//! Dense complex Hermitian matrices and their spectral calculus.
//!
//! Everything downstream (states, entropies, pinching) is expressed through
//! [`HermitianMatrix`] and its cached [`Spectrum`]. Matrix functions follow the
//! pseudo-inverse convention: eigenvalues at or below `support_tol × max|λ|` are exact
//! zeros, and logs / negative powers map them to zero.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DMatrix;
use num_complex::Complex64;
use once_cell::race::OnceBox;

use crate::error::{Error, Result};

/// Eigenvalues at or below this fraction of `max|λ|` are treated as exact zeros.
pub const SUPPORT_TOL: f64 = 1e-12;
/// Eigenvalues within this fraction of `max|λ|` of a cluster's leading value share a cluster.
pub const CLUSTER_REL_TOL: f64 = 1e-8;
/// Default cap on any matrix dimension produced by tensor products.
pub const DEFAULT_DIM_CAP: usize = 4096;
/// Maximum relative asymmetry accepted by [`HermitianMatrix::new`] before symmetrizing.
pub const HERMITIAN_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A dense Hermitian matrix with a lazily computed, thread-safe spectrum cache.
pub struct HermitianMatrix {
    data: DMatrix<Complex64>,
    spectrum: OnceBox<Spectrum>,
}

impl Clone for HermitianMatrix {
    fn clone(&self) -> Self {
        let spectrum = OnceBox::new();
        if let Some(s) = self.spectrum.get() {
            let _ = spectrum.set(alloc::boxed::Box::new(s.clone()));
        }
        Self {
            data: self.data.clone(),
            spectrum,
        }
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HermitianMatrix")
            .field("dim", &self.dim())
            .field("data", &self.data)
            .finish()
    }
}

impl PartialEq for HermitianMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.data == other.data
    }
}

impl HermitianMatrix {
    /// Validates and symmetrizes `data`: square, finite, and Hermitian up to
    /// [`HERMITIAN_TOL`] relative to its largest entry.
    pub fn new(data: DMatrix<Complex64>) -> Result<Self> {
        let (rows, cols) = data.shape();
        if rows != cols || rows == 0 {
            return Err(Error::NotSquare { rows, cols });
        }
        let mut scale: f64 = 1.0;
        for i in 0..rows {
            for j in 0..cols {
                let z = data[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                scale = scale.max(z.norm());
            }
        }
        let mut asym: f64 = 0.0;
        for i in 0..rows {
            for j in i..cols {
                asym = asym.max((data[(i, j)] - data[(j, i)].conj()).norm());
            }
        }
        if asym > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self::symmetrized(data))
    }

    /// Builds from a matrix known to be Hermitian up to rounding.
    pub(crate) fn symmetrized(data: DMatrix<Complex64>) -> Self {
        let n = data.nrows();
        let mut out = data;
        for i in 0..n {
            out[(i, i)] = Complex64::new(out[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = (out[(i, j)] + out[(j, i)].conj()) * 0.5;
                out[(i, j)] = avg;
                out[(j, i)] = avg.conj();
            }
        }
        Self {
            data: out,
            spectrum: OnceBox::new(),
        }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        Self::new(DMatrix::from_fn(n, n, f))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Real symmetric matrix from row-major entries.
    pub fn from_real_rows(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Self::from_fn(n, |i, j| Complex64::new(entries[i * n + j], 0.0))
    }

    pub fn identity(n: usize) -> Self {
        Self::symmetrized(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self::symmetrized(DMatrix::zeros(n, n))
    }

    /// `|ψ⟩⟨ψ|` (not normalized).
    pub fn outer(psi: &[Complex64]) -> Self {
        let n = psi.len();
        Self::symmetrized(DMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.data[(i, i)].re).sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::symmetrized(&self.data * Complex64::new(c, 0.0))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self::symmetrized(&self.data + &other.data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self::symmetrized(&self.data - &other.data))
    }

    /// `Re Tr(self · other)`; exact for Hermitian arguments.
    pub fn trace_product(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.data[(i, j)] * other.data[(j, i)]).re;
            }
        }
        Ok(acc)
    }

    /// `outer · self · outer` for Hermitian `outer`.
    pub fn sandwich(&self, outer: &Self) -> Result<Self> {
        self.check_dim(outer)?;
        Ok(Self::symmetrized(&outer.data * &self.data * &outer.data))
    }

    /// `K · self · K†` for an arbitrary (possibly rectangular) `K`.
    pub fn conjugate_by(&self, k: &DMatrix<Complex64>) -> Result<Self> {
        if k.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: k.ncols(),
            });
        }
        Ok(Self::symmetrized(k * &self.data * k.adjoint()))
    }

    pub fn frobenius_distance(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok((&self.data - &other.data).norm())
    }

    /// Frobenius norm of `[self, other]`.
    pub fn commutator_norm(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        let ab = &self.data * &other.data;
        let ba = &other.data * &self.data;
        Ok((ab - ba).norm())
    }

    /// The cached spectrum, computing it on first use.
    pub fn spectrum(&self) -> Result<&Spectrum> {
        self.spectrum
            .get_or_try_init(|| eig_hermitian(self).map(alloc::boxed::Box::new))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(*self.spectrum()?.eigenvalues.last().expect("dim > 0"))
    }
}

/// Eigen-decomposition `U diag(λ) U†` with λ sorted descending and grouped into clusters.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
    clusters: Vec<Range<usize>>,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary matrix whose columns are the eigenvectors, in eigenvalue order.
    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    /// Index ranges of (near-)equal eigenvalues.
    pub fn clusters(&self) -> &[Range<usize>] {
        &self.clusters
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_abs(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, l| m.max(l.abs()))
    }

    /// Number of distinct eigenvalues (the cluster count).
    pub fn distinct_count(&self) -> usize {
        self.clusters.len()
    }

    /// Absolute threshold under which eigenvalues count as zero.
    pub fn zero_threshold(&self, support_tol: f64) -> f64 {
        support_tol * self.max_abs()
    }

    pub fn in_support(&self, i: usize) -> bool {
        self.eigenvalues[i] > self.zero_threshold(SUPPORT_TOL)
    }

    /// `U diag(g(λ)) U†`.
    pub fn map(&self, mut g: impl FnMut(f64) -> f64) -> HermitianMatrix {
        let n = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..n {
            let c = Complex64::new(g(self.eigenvalues[j]), 0.0);
            for i in 0..n {
                scaled[(i, j)] *= c;
            }
        }
        HermitianMatrix::symmetrized(scaled * self.eigenvectors.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map(|l| l)
    }

    pub fn cluster_projector(&self, cluster: usize) -> HermitianMatrix {
        let range = self.clusters[cluster].clone();
        self.map_indexed(|i, _| if range.contains(&i) { 1.0 } else { 0.0 })
    }

    fn map_indexed(&self, mut g: impl FnMut(usize, f64) -> f64) -> HermitianMatrix {
        let mut i = 0;
        self.map(|l| {
            let v = g(i, l);
            i += 1;
            v
        })
    }

    /// Projector onto eigenvectors with eigenvalue above the support threshold.
    pub fn support_projector(&self) -> HermitianMatrix {
        let t = self.zero_threshold(SUPPORT_TOL);
        self.map(|l| if l > t { 1.0 } else { 0.0 })
    }

    /// Diagonal of `U† m U`: the weights `⟨u_k|m|u_k⟩` of `m` on each eigenvector.
    pub fn weights_of(&self, m: &HermitianMatrix) -> Result<Vec<f64>> {
        if m.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m.dim(),
            });
        }
        let rotated = self.eigenvectors.adjoint() * m.matrix() * &self.eigenvectors;
        Ok((0..self.dim()).map(|k| rotated[(k, k)].re).collect())
    }

    /// `|⟨u_i|w_j⟩|²` between this spectrum's eigenvectors `u` and `other`'s `w`.
    pub fn overlaps(&self, other: &Spectrum) -> Result<Vec<Vec<f64>>> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let g = self.eigenvectors.adjoint() * &other.eigenvectors;
        Ok((0..self.dim())
            .map(|i| (0..self.dim()).map(|j| g[(i, j)].norm_sqr()).collect())
            .collect())
    }
}

fn cluster_ranges(sorted_desc: &[f64], rel_tol: f64) -> Vec<Range<usize>> {
    let scale = sorted_desc.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    let tol = rel_tol * scale;
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..sorted_desc.len() {
        // anchored at the cluster head, so members never spread beyond `tol`
        if sorted_desc[start] - sorted_desc[i] > tol {
            clusters.push(start..i);
            start = i;
        }
    }
    clusters.push(start..sorted_desc.len());
    clusters
}

/// Deterministic dense Hermitian eigensolver (Householder tridiagonalization + implicit QR),
/// with an iteration cap of `100 · dim`.
pub fn eig_hermitian(m: &HermitianMatrix) -> Result<Spectrum> {
    let n = m.dim();
    let max_iter = 100 * n;
    let eig = SymmetricEigen::try_new(m.data.clone(), f64::EPSILON, max_iter).ok_or_else(|| {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += m.data[(i, j)].norm_sqr();
                }
            }
        }
        Error::NoConvergence {
            dim: n,
            max_iter,
            residual: libm::sqrt(off),
        }
    })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    let clusters = cluster_ranges(&eigenvalues, CLUSTER_REL_TOL);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        clusters,
    })
}

/// Scalar maps applied through the spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixFunction {
    Power(f64),
    Log,
    Exp,
}

fn is_integer(p: f64) -> bool {
    libm::floor(p) == p
}

/// Applies `f` spectrally. For `Log` and `Power`, eigenvalues with `|λ| ≤ support_tol ×
/// max|λ|` are exact zeros and map to `0` (pseudo-inverse / pseudo-log convention).
pub fn matrix_function(
    m: &HermitianMatrix,
    f: MatrixFunction,
    support_tol: f64,
) -> Result<HermitianMatrix> {
    let spec = m.spectrum()?;
    let thresh = spec.zero_threshold(support_tol);
    for &l in spec.eigenvalues() {
        if l < -thresh {
            let bad = match f {
                MatrixFunction::Log => true,
                MatrixFunction::Power(p) => !is_integer(p),
                MatrixFunction::Exp => false,
            };
            if bad {
                return Err(Error::Domain(format!(
                    "{f:?} of a matrix with negative eigenvalue {l:e}"
                )));
            }
        }
    }
    Ok(spec.map(|l| match f {
        MatrixFunction::Exp => libm::exp(l),
        _ if l.abs() <= thresh => 0.0,
        MatrixFunction::Log => libm::log(l),
        MatrixFunction::Power(p) => libm::pow(l, p),
    }))
}

/// Kronecker product `a ⊗ b` with the default dimension cap.
pub fn tensor(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    tensor_with_cap(a, b, DEFAULT_DIM_CAP)
}

pub fn tensor_with_cap(a: &HermitianMatrix, b: &HermitianMatrix, cap: usize) -> Result<HermitianMatrix> {
    let dim = a.dim().saturating_mul(b.dim());
    if dim > cap {
        return Err(Error::SizeCap { dim, cap });
    }
    Ok(HermitianMatrix::symmetrized(a.data.kronecker(&b.data)))
}

/// Pinching `Σ_i E_i ρ E_i` over the eigen-cluster projectors `E_i` of `sigma`.
pub fn pinch(sigma: &HermitianMatrix, rho: &HermitianMatrix) -> Result<HermitianMatrix> {
    sigma.check_dim(rho)?;
    let spec = sigma.spectrum()?;
    pinch_with(spec, rho)
}

/// [`pinch`] against an already computed spectrum.
pub fn pinch_with(spec: &Spectrum, rho: &HermitianMatrix) -> Result<HermitianMatrix> {
    if spec.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: rho.dim(),
        });
    }
    let u = spec.eigenvectors();
    let mut rotated = u.adjoint() * rho.matrix() * u;
    let mut label = alloc::vec![0usize; spec.dim()];
    for (c, r) in spec.clusters().iter().enumerate() {
        for i in r.clone() {
            label[i] = c;
        }
    }
    for i in 0..spec.dim() {
        for j in 0..spec.dim() {
            if label[i] != label[j] {
                rotated[(i, j)] = ZERO;
            }
        }
    }
    Ok(HermitianMatrix::symmetrized(u * rotated * u.adjoint()))
}

/// Spectral summary of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct SpectralSummary {
    pub operator_norm: f64,
    pub min_eigenvalue: f64,
    pub distinct_count_v: usize,
    pub support_projector: HermitianMatrix,
}

pub fn spectral_utilities(m: &HermitianMatrix) -> Result<SpectralSummary> {
    let spec = m.spectrum()?;
    Ok(SpectralSummary {
        operator_norm: spec.max_abs(),
        min_eigenvalue: *spec.eigenvalues().last().expect("dim > 0"),
        distinct_count_v: spec.distinct_count(),
        support_projector: spec.support_projector(),
    })
}

/// `‖m‖₁ = Σ|λ|`.
pub fn trace_norm(m: &HermitianMatrix) -> Result<f64> {
    Ok(crate::sum::pairwise_sum(
        &m.spectrum()?.eigenvalues().iter().map(|l| l.abs()).collect::<Vec<_>>(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::random;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
        (u.adjoint() * u - DMatrix::<Complex64>::identity(u.nrows(), u.ncols())).norm()
    }

    #[test]
    fn eig_of_diagonal() {
        let m = HermitianMatrix::from_real_diagonal(&[3.0, 1.0]).unwrap();
        let s = eig_hermitian(&m).unwrap();
        assert_eq!(s.eigenvalues(), &[3.0, 1.0]);
        let u = s.eigenvectors();
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!((u[(1, 1)].norm() - 1.0).abs() < 1e-14);
        assert!(u[(0, 1)].norm() < 1e-14 && u[(1, 0)].norm() < 1e-14);
    }

    #[test]
    fn eig_of_pauli_x() {
        let s = eig_hermitian(&pauli_x()).unwrap();
        assert!((s.eigenvalues()[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues()[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [1, 2, 4, 7] {
            let m = random::hermitian(&mut rng, d);
            let s = eig_hermitian(&m).unwrap();
            assert!(s.reconstruct().frobenius_distance(&m).unwrap() <= 1e-10);
            assert!(unitarity_defect(s.eigenvectors()) <= 1e-10);
            assert!(s.eigenvalues().windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn eig_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random::hermitian(&mut rng, 5);
        let a = eig_hermitian(&m).unwrap();
        let b = eig_hermitian(&m.clone()).unwrap();
        assert_eq!(a.eigenvalues(), b.eigenvalues());
        assert_eq!(a.eigenvectors(), b.eigenvectors());
    }

    #[test]
    fn construction_rejects_bad_input() {
        let asym = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(HermitianMatrix::new(asym), Err(Error::NotHermitian(_))));
        let nan = DMatrix::from_element(2, 2, c(f64::NAN, 0.0));
        assert!(matches!(HermitianMatrix::new(nan), Err(Error::NonFinite { .. })));
        let rect = DMatrix::from_element(2, 3, c(0.0, 0.0));
        assert!(matches!(HermitianMatrix::new(rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn construction_symmetrizes() {
        let near = DMatrix::from_row_slice(2, 2, &[c(1.0, 1e-13), c(0.5, 0.25), c(0.5, -0.25 + 1e-12), c(2.0, 0.0)]);
        let m = HermitianMatrix::new(near).unwrap();
        assert_eq!(m.entry(0, 0).im, 0.0);
        assert_eq!(m.entry(0, 1), m.entry(1, 0).conj());
    }

    #[test]
    fn inverse_sqrt_uses_pseudo_inverse() {
        let m = HermitianMatrix::from_real_diagonal(&[4.0, 0.0]).unwrap();
        let r = matrix_function(&m, MatrixFunction::Power(-0.5), SUPPORT_TOL).unwrap();
        let want = HermitianMatrix::from_real_diagonal(&[0.5, 0.0]).unwrap();
        assert!(r.frobenius_distance(&want).unwrap() < 1e-14);
    }

    #[test]
    fn log_of_identity_is_zero() {
        let r = matrix_function(&HermitianMatrix::identity(3), MatrixFunction::Log, SUPPORT_TOL).unwrap();
        assert!(r.matrix().norm() < 1e-14);
    }

    #[test]
    fn fractional_power_of_random_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random::psd(&mut rng, 3, 1.0);
        let r = matrix_function(&m, MatrixFunction::Power(0.3), SUPPORT_TOL).unwrap();
        let mut want: Vec<f64> = m.spectrum().unwrap().eigenvalues().iter().map(|l| libm::pow(*l, 0.3)).collect();
        want.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let got = r.spectrum().unwrap().eigenvalues();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12, "{g} vs {w}");
        }
        assert!(r.commutator_norm(&m).unwrap() < 1e-9);
    }

    #[test]
    fn negative_eigenvalue_is_a_domain_error() {
        assert!(matches!(
            matrix_function(&pauli_x(), MatrixFunction::Power(0.5), SUPPORT_TOL),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            matrix_function(&pauli_x(), MatrixFunction::Log, SUPPORT_TOL),
            Err(Error::Domain(_))
        ));
        // integer powers and exp are fine
        let sq = matrix_function(&pauli_x(), MatrixFunction::Power(2.0), SUPPORT_TOL).unwrap();
        assert!(sq.frobenius_distance(&HermitianMatrix::identity(2)).unwrap() < 1e-14);
        assert!(matrix_function(&pauli_x(), MatrixFunction::Exp, SUPPORT_TOL).is_ok());
    }

    #[test]
    fn power_one_is_identity_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = random::psd(&mut rng, 4, 1.0);
        let r = matrix_function(&m, MatrixFunction::Power(1.0), SUPPORT_TOL).unwrap();
        assert!(r.frobenius_distance(&m).unwrap() < 1e-12);
    }

    #[test]
    fn exp_inverts_log() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = random::density(&mut rng, 3);
        let l = matrix_function(&m, MatrixFunction::Log, SUPPORT_TOL).unwrap();
        let e = matrix_function(&l, MatrixFunction::Exp, SUPPORT_TOL).unwrap();
        assert!(e.frobenius_distance(&m).unwrap() < 1e-10);
    }

    #[test]
    fn tensor_examples() {
        let i2 = HermitianMatrix::identity(2);
        assert_eq!(tensor(&i2, &i2).unwrap(), HermitianMatrix::identity(4));
        let a = HermitianMatrix::from_real_diagonal(&[1.0, 2.0]).unwrap();
        let b = HermitianMatrix::from_real_diagonal(&[3.0, 4.0]).unwrap();
        let ab = tensor(&a, &b).unwrap();
        assert_eq!(ab, HermitianMatrix::from_real_diagonal(&[3.0, 4.0, 6.0, 8.0]).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = random::psd(&mut rng, 2, 1.0);
        let rr = tensor(&r, &r).unwrap();
        assert!((rr.trace() - r.trace() * r.trace()).abs() < 1e-10);
    }

    #[test]
    fn tensor_cap() {
        let a = HermitianMatrix::identity(65);
        assert!(matches!(tensor(&a, &a), Err(Error::SizeCap { dim: 4225, cap: 4096 })));
        assert!(tensor_with_cap(&a, &a, 5000).is_ok());
    }

    #[test]
    fn tensor_spectrum_is_pairwise_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = random::psd(&mut rng, 2, 1.0);
        let b = random::psd(&mut rng, 3, 1.0);
        let ab = tensor(&a, &b).unwrap();
        let mut want: Vec<f64> = Vec::new();
        for x in a.spectrum().unwrap().eigenvalues() {
            for y in b.spectrum().unwrap().eigenvalues() {
                want.push(x * y);
            }
        }
        want.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (g, w) in ab.spectrum().unwrap().eigenvalues().iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn pinch_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random::density(&mut rng, 3);
        let p = pinch(&HermitianMatrix::identity(3), &rho).unwrap();
        assert!(p.frobenius_distance(&rho).unwrap() < 1e-12);

        let sigma = HermitianMatrix::from_real_diagonal(&[1.0 / 3.0, 2.0 / 3.0]).unwrap();
        let p = pinch(&sigma, &pauli_x()).unwrap();
        assert!(p.matrix().norm() < 1e-14);
    }

    #[test]
    fn pinch_properties_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for d in 2..=6 {
            let sigma = random::density(&mut rng, d);
            let rho = random::density(&mut rng, d);
            let p = pinch(&sigma, &rho).unwrap();
            assert!((p.trace() - rho.trace()).abs() < 1e-10);
            assert!(p.commutator_norm(&sigma).unwrap() < 1e-9);
            let pp = pinch(&sigma, &p).unwrap();
            assert!(pp.frobenius_distance(&p).unwrap() < 1e-10);
            let v = sigma.spectrum().unwrap().distinct_count() as f64;
            let gap = p.scale(v).sub(&rho).unwrap();
            assert!(gap.min_eigenvalue().unwrap() >= -1e-9);
        }
    }

    #[test]
    fn pinch_with_degenerate_sigma() {
        // σ = diag(1/2, 1/4, 1/4): the 2-dim block survives pinching intact
        let sigma = HermitianMatrix::from_real_diagonal(&[0.5, 0.25, 0.25]).unwrap();
        let rho = HermitianMatrix::from_real_rows(3, &[0.4, 0.1, 0.1, 0.1, 0.3, 0.2, 0.1, 0.2, 0.3]).unwrap();
        let p = pinch(&sigma, &rho).unwrap();
        let want = HermitianMatrix::from_real_rows(3, &[0.4, 0.0, 0.0, 0.0, 0.3, 0.2, 0.0, 0.2, 0.3]).unwrap();
        assert!(p.frobenius_distance(&want).unwrap() < 1e-12);
        assert_eq!(sigma.spectrum().unwrap().distinct_count(), 2);
    }

    #[test]
    fn spectral_utility_examples() {
        let s = spectral_utilities(&HermitianMatrix::identity(4)).unwrap();
        assert!((s.operator_norm - 1.0).abs() < 1e-14);
        assert_eq!(s.distinct_count_v, 1);
        assert!(s.support_projector.frobenius_distance(&HermitianMatrix::identity(4)).unwrap() < 1e-12);

        let m = HermitianMatrix::from_real_diagonal(&[0.5, 0.5, 0.0, 0.0]).unwrap();
        let s = spectral_utilities(&m).unwrap();
        assert_eq!(s.distinct_count_v, 2);
        assert!((s.support_projector.trace() - 2.0).abs() < 1e-12);
        let p = &s.support_projector;
        let p2 = p.sandwich(&HermitianMatrix::identity(4)).unwrap();
        let sq = HermitianMatrix::symmetrized(p.matrix() * p.matrix());
        assert!(sq.frobenius_distance(&p2).unwrap() < 1e-10);

        let half = HermitianMatrix::from_real_diagonal(&[0.5, 0.5]).unwrap();
        let cube = tensor(&tensor(&half, &half).unwrap(), &half).unwrap();
        assert_eq!(spectral_utilities(&cube).unwrap().distinct_count_v, 1);
    }

    #[test]
    fn clusters_split_toward_more_groups() {
        // chained values each within tol of the neighbour but not of the head
        let tol = CLUSTER_REL_TOL;
        let vals = vec![1.0, 1.0 - 0.6 * tol, 1.0 - 1.2 * tol, 0.5];
        let r = cluster_ranges(&vals, tol);
        assert_eq!(r, vec![0..2, 2..3, 3..4]);
    }

    #[test]
    fn trace_norm_of_pauli() {
        assert!((trace_norm(&pauli_x()).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn complex_entries_survive() {
        let m = HermitianMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => c(0.0, -1.0),
            (1, 0) => c(0.0, 1.0),
            _ => c(0.0, 0.0),
        })
        .unwrap();
        let s = m.spectrum().unwrap();
        assert!((s.eigenvalues()[0] - 1.0).abs() < 1e-14);
        assert!(s.reconstruct().frobenius_distance(&m).unwrap() < 1e-14);
    }
}
