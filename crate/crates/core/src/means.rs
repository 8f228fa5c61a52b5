//! The weighted geometric mean `X #_t Y = X^{1/2} (X^{-1/2} Y X^{-1/2})^t X^{1/2}`
//! for every real `t`, i.e. the constant-speed geodesic through `X` (at `t = 0`)
//! and `Y` (at `t = 1`) for the affine-invariant metric on positive definite
//! matrices, together with the associated distance.

use crate::error::{MatError, Result};
use crate::linalg::{
    gram, gram_spectrum, singular_values, ComplexMatrix, HermitianMatrix, PositiveDefiniteMatrix,
};

/// Relative singular-value floor for [`congruence`].
pub const INVERTIBILITY_TOL: f64 = 1e-10;

/// Precomputed geodesic between two positive definite matrices.
///
/// Holds `X^{1/2}` and the spectral decomposition of `X^{-1/2} Y X^{-1/2}` so that
/// evaluating the curve at many weights costs one matrix power each.
#[derive(Clone, Debug)]
pub struct Geodesic {
    x_sqrt: PositiveDefiniteMatrix,
    inner: PositiveDefiniteMatrix,
}

impl Geodesic {
    pub fn new(x: &PositiveDefiniteMatrix, y: &PositiveDefiniteMatrix) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(MatError::DimensionMismatch {
                expected: x.dim(),
                found: y.dim(),
            });
        }
        let x_sqrt = x.sqrt()?;
        let x_inv_sqrt = x.pow(-0.5)?;
        let inner = &(x_inv_sqrt.as_matrix() * y.as_matrix()) * x_inv_sqrt.as_matrix();
        let inner = PositiveDefiniteMatrix::new(HermitianMatrix::symmetrize(&inner))?;
        Ok(Self { x_sqrt, inner })
    }

    pub fn dim(&self) -> usize {
        self.x_sqrt.dim()
    }

    /// `X^{1/2}`.
    pub fn base_sqrt(&self) -> &PositiveDefiniteMatrix {
        &self.x_sqrt
    }

    /// `X^{-1/2} Y X^{-1/2}`.
    pub fn inner(&self) -> &PositiveDefiniteMatrix {
        &self.inner
    }

    /// `W_t = X^{1/2} V diag(μ^{t/2})`, where `X^{-1/2} Y X^{-1/2} = V diag(μ) V*`,
    /// so that `X #_t Y = W_t W_t*`.
    pub fn factor_at(&self, t: f64) -> Result<ComplexMatrix> {
        if !t.is_finite() {
            return Err(MatError::InvalidParameter(format!(
                "weight t = {t} is not finite"
            )));
        }
        let d = self.inner.spectrum();
        let half: Vec<f64> = d.eigenvalues.iter().map(|m| m.powf(t / 2.0)).collect();
        if half.iter().any(|v| !v.is_finite() || *v == 0.0) {
            return Err(MatError::Range(format!(
                "(X^(-1/2) Y X^(-1/2))^t leaves the double-precision range at t = {t}"
            )));
        }
        let scaled = ComplexMatrix::from_fn(self.dim(), |i, j| d.eigenvectors[(i, j)] * half[j]);
        let w = self.x_sqrt.as_matrix() * &scaled;
        if !w.is_finite() {
            return Err(MatError::Range(format!("X #_t Y overflows at t = {t}")));
        }
        Ok(w)
    }

    /// The point `X #_t Y`.
    pub fn at(&self, t: f64) -> Result<PositiveDefiniteMatrix> {
        let point = gram(&self.factor_at(t)?);
        if !point.as_matrix().is_finite() {
            return Err(MatError::Range(format!("X #_t Y overflows at t = {t}")));
        }
        PositiveDefiniteMatrix::new(point).map_err(|e| match e {
            MatError::NotPositiveDefinite { min_eigenvalue, .. } => MatError::Range(format!(
                "X #_t Y is numerically singular at t = {t} (smallest eigenvalue {min_eigenvalue:e}, cond of X^(-1/2) Y X^(-1/2) {:e})",
                self.inner.condition_number()
            )),
            other => other,
        })
    }

    /// Eigenvalues of `X #_t Y`, descending. Unlike [`Self::at`] this never fails
    /// on a numerically singular point: eigenvalues lost to round-off come back as
    /// zero, while the large ones, which norms depend on, keep full relative accuracy.
    pub fn spectrum_at(&self, t: f64) -> Result<Vec<f64>> {
        gram_spectrum(&self.factor_at(t)?)
    }

    /// Geodesic length from `X` to `Y`: the Hilbert-Schmidt norm of `log(X^{-1/2} Y X^{-1/2})`.
    pub fn length(&self) -> f64 {
        self.inner
            .eigenvalues()
            .iter()
            .map(|m| m.ln().powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// `X #_t Y` for any real `t`.
pub fn geometric_mean(
    x: &PositiveDefiniteMatrix,
    y: &PositiveDefiniteMatrix,
    t: f64,
) -> Result<PositiveDefiniteMatrix> {
    Geodesic::new(x, y)?.at(t)
}

/// Riemannian distance `|| log(X^{-1/2} Y X^{-1/2}) ||_2`.
pub fn riemannian_distance(x: &PositiveDefiniteMatrix, y: &PositiveDefiniteMatrix) -> Result<f64> {
    Ok(Geodesic::new(x, y)?.length())
}

/// `A* X A` for invertible `A`.
pub fn congruence(a: &ComplexMatrix, x: &PositiveDefiniteMatrix) -> Result<PositiveDefiniteMatrix> {
    if a.dim() != x.dim() {
        return Err(MatError::DimensionMismatch {
            expected: x.dim(),
            found: a.dim(),
        });
    }
    let s = singular_values(a)?;
    let (largest, smallest) = (s[0], s[s.len() - 1]);
    if !(smallest > INVERTIBILITY_TOL * largest) {
        return Err(MatError::NearSingular { smallest, largest });
    }
    let m = &(&a.adjoint() * x.as_matrix()) * a;
    PositiveDefiniteMatrix::new(HermitianMatrix::symmetrize(&m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd(diag: &[f64]) -> PositiveDefiniteMatrix {
        PositiveDefiniteMatrix::new(HermitianMatrix::from_real_diagonal(diag)).unwrap()
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, rel: f64) -> bool {
        (a - b).frobenius_norm() <= rel * b.frobenius_norm().max(1.0)
    }

    #[test]
    fn scalar_mean() {
        let m = geometric_mean(&pd(&[4.0]), &pd(&[9.0]), 0.5).unwrap();
        assert!((m.as_matrix()[(0, 0)].re - 6.0).abs() < 1e-14);
    }

    #[test]
    fn commuting_diagonals_extrapolate() {
        let m = geometric_mean(&pd(&[1.0, 4.0]), &pd(&[9.0, 1.0]), 2.0).unwrap();
        assert!(close(
            m.as_matrix(),
            &ComplexMatrix::from_real_diagonal(&[81.0, 0.25]),
            1e-13
        ));
    }

    #[test]
    fn endpoints() {
        let x = PositiveDefiniteMatrix::new(
            HermitianMatrix::new(
                ComplexMatrix::from_real_rows(&[&[2.0, 0.5], &[0.5, 1.0]]).unwrap(),
            )
            .unwrap(),
        )
        .unwrap();
        let y = pd(&[3.0, 0.5]);
        let g = Geodesic::new(&x, &y).unwrap();
        assert!(close(g.at(0.0).unwrap().as_matrix(), x.as_matrix(), 1e-13));
        assert!(close(g.at(1.0).unwrap().as_matrix(), y.as_matrix(), 1e-13));
    }

    #[test]
    fn scalar_distance() {
        let d = riemannian_distance(&pd(&[1.0]), &pd(&[2f64.exp()])).unwrap();
        assert!((d - 2.0).abs() < 1e-14);
        assert!(riemannian_distance(&pd(&[3.0, 2.0]), &pd(&[3.0, 2.0])).unwrap() < 1e-14);
    }

    #[test]
    fn congruence_rejects_singular() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert!(matches!(
            congruence(&a, &pd(&[1.0, 2.0])),
            Err(MatError::NearSingular { .. })
        ));
        let i = ComplexMatrix::identity(2);
        let x = pd(&[1.0, 2.0]);
        assert!(close(
            congruence(&i, &x).unwrap().as_matrix(),
            x.as_matrix(),
            1e-15
        ));
    }

    #[test]
    fn extreme_weights_report_range_errors() {
        let g = Geodesic::new(&pd(&[1.0, 1.0]), &pd(&[1e30, 1e-30])).unwrap();
        assert!(matches!(g.at(20.0), Err(MatError::Range(_))));
        assert!(matches!(g.at(f64::NAN), Err(MatError::InvalidParameter(_))));
    }
}
