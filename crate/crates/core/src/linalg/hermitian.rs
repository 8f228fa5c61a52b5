use serde::{Deserialize, Serialize};

use super::eig::{jacobi_eigh, SpectralDecomposition};
use super::matrix::{ComplexMatrix, C64};
use crate::error::{MatError, Result};

/// Relative asymmetry accepted by [`HermitianMatrix::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// `mlog`/`mpow` refuse spectra whose smallest eigenvalue is at or below this fraction of the largest.
pub const PD_THRESHOLD: f64 = 1e-12;

/// A Hermitian matrix. The stored matrix is exactly Hermitian.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Validates approximate Hermiticity and returns the Hermitian part `(A + A*)/2`.
    pub fn new(a: ComplexMatrix) -> Result<Self> {
        if !a.is_finite() {
            return Err(MatError::NonFinite);
        }
        let residual = a.hermitian_residual();
        let limit = HERMITIAN_TOL * (1.0 + a.max_abs());
        if residual > limit {
            return Err(MatError::NotHermitian { residual, limit });
        }
        Ok(Self(a.hermitian_part()))
    }

    /// Takes the Hermitian part of an intermediate result without validating it.
    pub fn symmetrize(a: &ComplexMatrix) -> Self {
        Self(a.hermitian_part())
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_real_diagonal(diag))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn eig(&self) -> Result<SpectralDecomposition> {
        jacobi_eigh(&self.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(MatError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self(&self.0.scale(a) + &other.0.scale(b)))
    }

    /// `self + c·I`.
    pub fn shift(&self, c: f64) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.dim() {
            m[(i, i)] += C64::new(c, 0.0);
        }
        Self(m)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }
}

/// A Hermitian matrix with strictly positive spectrum. The eigendecomposition
/// is computed once at construction and reused by every matrix function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositiveDefiniteMatrix {
    matrix: HermitianMatrix,
    spectrum: SpectralDecomposition,
}

impl PositiveDefiniteMatrix {
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        let spectrum = h.eig()?;
        Self::checked(h, spectrum)
    }

    /// Builds `U diag(λ) U*` from a decomposition known to be exact (e.g. `e^H`).
    pub fn from_spectrum(spectrum: SpectralDecomposition) -> Result<Self> {
        let matrix = HermitianMatrix(spectrum.reconstruct());
        Self::checked(matrix, spectrum)
    }

    fn checked(matrix: HermitianMatrix, spectrum: SpectralDecomposition) -> Result<Self> {
        let min = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
        if !(min > 0.0) || !min.is_finite() || !spectrum.eigenvalues[0].is_finite() {
            return Err(MatError::NotPositiveDefinite {
                min_eigenvalue: min,
                threshold: 0.0,
            });
        }
        Ok(Self { matrix, spectrum })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_spectrum(SpectralDecomposition {
            eigenvalues: vec![1.0; n],
            eigenvectors: ComplexMatrix::identity(n),
        })
        .expect("identity is positive definite")
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        self.matrix.as_matrix()
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    /// Eigenvalues, descending. These are also the singular values.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.spectrum.eigenvalues[0]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self
            .spectrum
            .eigenvalues
            .last()
            .expect("non-empty spectrum")
    }

    pub fn condition_number(&self) -> f64 {
        self.max_eigenvalue() / self.min_eigenvalue()
    }

    pub fn log_det(&self) -> f64 {
        self.spectrum.eigenvalues.iter().map(|l| l.ln()).sum()
    }

    pub fn trace(&self) -> f64 {
        self.spectrum.eigenvalues.iter().sum()
    }

    fn check_functional_domain(&self) -> Result<()> {
        let threshold = PD_THRESHOLD * self.max_eigenvalue();
        if self.min_eigenvalue() <= threshold {
            return Err(MatError::NotPositiveDefinite {
                min_eigenvalue: self.min_eigenvalue(),
                threshold,
            });
        }
        Ok(())
    }

    /// `X^t` for real `t`.
    pub fn pow(&self, t: f64) -> Result<Self> {
        self.check_functional_domain()?;
        let values: Vec<f64> = self
            .spectrum
            .eigenvalues
            .iter()
            .map(|l| l.powf(t))
            .collect();
        self.respectrum(values)
            .map_err(|_| MatError::Range(format!("X^{t} leaves the double-precision range")))
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.pow(0.5)
    }

    pub fn log(&self) -> Result<HermitianMatrix> {
        self.check_functional_domain()?;
        let values: Vec<f64> = self.spectrum.eigenvalues.iter().map(|l| l.ln()).collect();
        Ok(HermitianMatrix(self.spectrum.synthesize(&values)))
    }

    fn respectrum(&self, values: Vec<f64>) -> Result<Self> {
        // Reversal keeps the order descending for negative exponents.
        let mut pairs: Vec<(f64, usize)> = values.into_iter().zip(0..).collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let u = &self.spectrum.eigenvectors;
        let eigenvectors = ComplexMatrix::from_fn(self.dim(), |i, j| u[(i, pairs[j].1)]);
        Self::from_spectrum(SpectralDecomposition {
            eigenvalues: pairs.into_iter().map(|p| p.0).collect(),
            eigenvectors,
        })
    }
}

/// `U f(Λ) U*`.
pub fn spectral_function(a: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let d = a.eig()?;
    let values: Vec<f64> = d.eigenvalues.iter().map(|&l| f(l)).collect();
    if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
        return Err(MatError::Domain(format!(
            "function is not finite at eigenvalue {}",
            d.eigenvalues[bad]
        )));
    }
    Ok(HermitianMatrix(d.synthesize(&values)))
}

/// Matrix exponential of a Hermitian matrix.
pub fn mexp(h: &HermitianMatrix) -> Result<PositiveDefiniteMatrix> {
    mexp_from(&h.eig()?, 1.0)
}

/// `e^{sH}` from a precomputed decomposition of `H`.
pub fn mexp_from(d: &SpectralDecomposition, s: f64) -> Result<PositiveDefiniteMatrix> {
    let mut pairs: Vec<(f64, usize)> = d.eigenvalues.iter().map(|&l| s * l).zip(0..).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let values: Vec<f64> = pairs.iter().map(|p| p.0.exp()).collect();
    if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(MatError::Range(
            "matrix exponential leaves the double-precision range".into(),
        ));
    }
    let u = &d.eigenvectors;
    PositiveDefiniteMatrix::from_spectrum(SpectralDecomposition {
        eigenvalues: values,
        eigenvectors: ComplexMatrix::from_fn(d.dim(), |i, j| u[(i, pairs[j].1)]),
    })
}

/// `W W*`, Hermitian positive semidefinite by construction.
pub fn gram(w: &ComplexMatrix) -> HermitianMatrix {
    let n = w.dim();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += w[(i, k)] * w[(j, k)].conj();
            }
            out[(i, j)] = acc;
            out[(j, i)] = acc.conj();
        }
        out[(i, i)].im = 0.0;
    }
    HermitianMatrix(out)
}

/// Eigenvalues of `W W*`, descending. Negative computed eigenvalues can only be
/// round-off and are reported as zero.
pub fn gram_spectrum(w: &ComplexMatrix) -> Result<Vec<f64>> {
    if !w.is_finite() {
        return Err(MatError::Range(
            "factor leaves the double-precision range".into(),
        ));
    }
    let values = gram(w).eig()?.eigenvalues;
    if !values[0].is_finite() {
        return Err(MatError::Range(
            "W W* leaves the double-precision range".into(),
        ));
    }
    Ok(values.into_iter().map(|l| l.max(0.0)).collect())
}

/// Principal logarithm; the input must be positive definite beyond [`PD_THRESHOLD`].
pub fn mlog(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let d = a.eig()?;
    check_pd_spectrum(&d.eigenvalues)?;
    let values: Vec<f64> = d.eigenvalues.iter().map(|l| l.ln()).collect();
    Ok(HermitianMatrix(d.synthesize(&values)))
}

/// `A^t`. Non-integer or negative `t` requires a positive definite input.
pub fn mpow(a: &HermitianMatrix, t: f64) -> Result<HermitianMatrix> {
    let d = a.eig()?;
    let integral = t.fract() == 0.0 && t >= 0.0 && t <= i32::MAX as f64;
    let values: Vec<f64> = if integral {
        d.eigenvalues.iter().map(|l| l.powi(t as i32)).collect()
    } else {
        check_pd_spectrum(&d.eigenvalues)?;
        d.eigenvalues.iter().map(|l| l.powf(t)).collect()
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(MatError::Range(format!(
            "A^{t} leaves the double-precision range"
        )));
    }
    Ok(HermitianMatrix(d.synthesize(&values)))
}

fn check_pd_spectrum(eigenvalues: &[f64]) -> Result<()> {
    let max = eigenvalues[0];
    let min = *eigenvalues.last().expect("non-empty spectrum");
    let threshold = PD_THRESHOLD * max.max(0.0);
    if min <= threshold {
        return Err(MatError::NotPositiveDefinite {
            min_eigenvalue: min,
            threshold,
        });
    }
    Ok(())
}

/// Singular values, descending, as square roots of the eigenvalues of `A*A`.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let gram = HermitianMatrix::symmetrize(&(&a.adjoint() * a));
    let d = gram.eig()?;
    Ok(d.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect())
}

/// Frobenius norm of `HK - KH`.
pub fn commutator_norm(h: &HermitianMatrix, k: &HermitianMatrix) -> Result<f64> {
    Ok(h.as_matrix().commutator(k.as_matrix())?.frobenius_norm())
}
