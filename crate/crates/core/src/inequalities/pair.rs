use std::sync::{Arc, Mutex};

use crate::error::{MatError, Result};
use crate::linalg::{
    commutator_norm, gram, gram_spectrum, mexp_from, ComplexMatrix, HermitianMatrix,
    PositiveDefiniteMatrix, SpectralDecomposition,
};
use crate::means::Geodesic;

/// Geodesics `e^{rH} -> e^{rK}` and `e^{rK} -> e^{rH}` for one scale `r`.
#[derive(Debug)]
pub struct MeanCurves {
    pub r: f64,
    pub forward: Geodesic,
    pub reverse: Geodesic,
}

impl MeanCurves {
    /// Eigenvalues (descending) of `(e^{rH} #_t e^{rK})^{1/r}`, evaluated directly.
    pub fn scaled_mean_spectrum(&self, t: f64) -> Result<Vec<f64>> {
        Ok(root_spectrum(self.forward.spectrum_at(t)?, self.r))
    }

    /// Same spectrum through the switch relation `X #_t Y = Y #_{1-t} X`.
    pub fn scaled_mean_spectrum_switched(&self, t: f64) -> Result<Vec<f64>> {
        Ok(root_spectrum(self.reverse.spectrum_at(1.0 - t)?, self.r))
    }
}

fn root_spectrum(values: Vec<f64>, r: f64) -> Vec<f64> {
    if r == 1.0 {
        values
    } else {
        values.into_iter().map(|l| l.powf(1.0 / r)).collect()
    }
}

/// A pair of Hermitian matrices `(H, K)` with cached eigendecompositions and
/// cached geodesics, shared by all checks on the pair.
#[derive(Debug)]
pub struct HermitianPair {
    h: HermitianMatrix,
    k: HermitianMatrix,
    h_eig: SpectralDecomposition,
    k_eig: SpectralDecomposition,
    curves: Mutex<Vec<Arc<MeanCurves>>>,
}

impl Clone for HermitianPair {
    fn clone(&self) -> Self {
        Self {
            h: self.h.clone(),
            k: self.k.clone(),
            h_eig: self.h_eig.clone(),
            k_eig: self.k_eig.clone(),
            curves: Mutex::new(Vec::new()),
        }
    }
}

impl HermitianPair {
    pub fn new(h: HermitianMatrix, k: HermitianMatrix) -> Result<Self> {
        if h.dim() != k.dim() {
            return Err(MatError::DimensionMismatch {
                expected: h.dim(),
                found: k.dim(),
            });
        }
        let h_eig = h.eig()?;
        let k_eig = k.eig()?;
        Ok(Self {
            h,
            k,
            h_eig,
            k_eig,
            curves: Mutex::new(Vec::new()),
        })
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn h(&self) -> &HermitianMatrix {
        &self.h
    }

    pub fn k(&self) -> &HermitianMatrix {
        &self.k
    }

    pub fn h_spectrum(&self) -> &[f64] {
        &self.h_eig.eigenvalues
    }

    pub fn k_spectrum(&self) -> &[f64] {
        &self.k_eig.eigenvalues
    }

    /// `(sH, sK)` for `s > 0`, reusing the eigenvectors.
    pub fn scaled(&self, s: f64) -> Self {
        let scale_eig = |d: &SpectralDecomposition| SpectralDecomposition {
            eigenvalues: d.eigenvalues.iter().map(|l| l * s).collect(),
            eigenvectors: d.eigenvectors.clone(),
        };
        Self {
            h: self.h.scale(s),
            k: self.k.scale(s),
            h_eig: scale_eig(&self.h_eig),
            k_eig: scale_eig(&self.k_eig),
            curves: Mutex::new(Vec::new()),
        }
    }

    /// `(K, H)`.
    pub fn swapped(&self) -> Self {
        Self {
            h: self.k.clone(),
            k: self.h.clone(),
            h_eig: self.k_eig.clone(),
            k_eig: self.h_eig.clone(),
            curves: Mutex::new(Vec::new()),
        }
    }

    /// `e^{sH}`.
    pub fn exp_h(&self, s: f64) -> Result<PositiveDefiniteMatrix> {
        mexp_from(&self.h_eig, s)
    }

    /// `e^{sK}`.
    pub fn exp_k(&self, s: f64) -> Result<PositiveDefiniteMatrix> {
        mexp_from(&self.k_eig, s)
    }

    pub fn commutator_norm(&self) -> f64 {
        commutator_norm(&self.h, &self.k).expect("dimensions checked at construction")
    }

    /// `(1-t) H + t K`.
    pub fn convex_combination(&self, t: f64) -> HermitianMatrix {
        self.h
            .combine(1.0 - t, &self.k, t)
            .expect("dimensions checked at construction")
    }

    /// Eigenvalues of `(1-t) H + t K`, descending.
    pub fn convex_combination_spectrum(&self, t: f64) -> Result<Vec<f64>> {
        Ok(self.convex_combination(t).eig()?.eigenvalues)
    }

    /// Eigenvalues of `e^{(1-t)H + tK}`, descending (exponentials of the exponent's spectrum).
    pub fn exp_convex_spectrum(&self, t: f64) -> Result<Vec<f64>> {
        let ev = self.convex_combination_spectrum(t)?;
        let out: Vec<f64> = ev.iter().map(|l| l.exp()).collect();
        if out.iter().any(|v| !v.is_finite()) {
            return Err(MatError::Range(format!(
                "e^((1-t)H+tK) overflows at t = {t}"
            )));
        }
        Ok(out)
    }

    /// `W = e^{(1-t)H/2} e^{tK/2}`, so that the symmetric product is `W W*`.
    pub fn symmetric_product_factor(&self, t: f64) -> Result<ComplexMatrix> {
        let w = self.exp_h((1.0 - t) / 2.0)?.as_matrix() * self.exp_k(t / 2.0)?.as_matrix();
        if !w.is_finite() {
            return Err(MatError::Range(format!(
                "symmetric product overflows at t = {t}"
            )));
        }
        Ok(w)
    }

    /// `e^{(1-t)H/2} e^{tK} e^{(1-t)H/2}`.
    pub fn symmetric_product(&self, t: f64) -> Result<PositiveDefiniteMatrix> {
        PositiveDefiniteMatrix::new(gram(&self.symmetric_product_factor(t)?))
    }

    /// Eigenvalues of the symmetric product, descending; see [`Geodesic::spectrum_at`].
    pub fn symmetric_product_spectrum(&self, t: f64) -> Result<Vec<f64>> {
        gram_spectrum(&self.symmetric_product_factor(t)?)
    }

    /// `e^{(1-t)H} e^{tK}` (not Hermitian in general).
    pub fn plain_product(&self, t: f64) -> Result<ComplexMatrix> {
        let a = self.exp_h(1.0 - t)?;
        let b = self.exp_k(t)?;
        Ok(a.as_matrix() * b.as_matrix())
    }

    /// Geodesics between `e^{rH}` and `e^{rK}`, cached per `r`.
    pub fn curves(&self, r: f64) -> Result<Arc<MeanCurves>> {
        let mut cache = self.curves.lock().expect("curve cache poisoned");
        if let Some(c) = cache.iter().find(|c| c.r == r) {
            return Ok(Arc::clone(c));
        }
        let x = self.exp_h(r)?;
        let y = self.exp_k(r)?;
        let c = Arc::new(MeanCurves {
            r,
            forward: Geodesic::new(&x, &y)?,
            reverse: Geodesic::new(&y, &x)?,
        });
        cache.push(Arc::clone(&c));
        Ok(c)
    }

    /// `e^H #_t e^K`.
    pub fn mean(&self, t: f64) -> Result<PositiveDefiniteMatrix> {
        self.curves(1.0)?.forward.at(t)
    }

    /// `max_r ln(κ(e^{rH}) κ(e^{rK}))`. Forming `e^{-rH/2} e^{rK} e^{-rH/2}` costs
    /// relative accuracy of this order, and every power of it inherits the loss;
    /// this bounds the accuracy of the large eigenvalues of every evaluated mean,
    /// which is what norm comparisons depend on.
    pub fn input_log_condition(&self, rs: &[f64]) -> f64 {
        let spread = |v: &[f64]| v[0] - v[v.len() - 1];
        let both = spread(self.h_spectrum()) + spread(self.k_spectrum());
        rs.iter().map(|r| r * both).fold(0.0, f64::max)
    }

    /// [`Self::input_log_condition`] together with the log condition numbers of the
    /// outputs at weights `ts`: the symmetric product and `e^{rH} #_t e^{rK}`.
    /// Small eigenvalues, and hence determinants and Loewner-order gaps, are only
    /// as accurate as these allow. Evaluation failures count as infinite.
    pub fn log_condition(&self, ts: &[f64], rs: &[f64]) -> f64 {
        let mut worst = self.input_log_condition(rs);
        for &t in ts {
            worst = worst.max(match self.symmetric_product(t) {
                Ok(p) => p.condition_number().ln(),
                Err(_) => f64::INFINITY,
            });
            for &r in rs {
                let cond = self
                    .curves(r)
                    .and_then(|c| c.forward.at(t))
                    .map(|m| m.condition_number().ln())
                    .unwrap_or(f64::INFINITY);
                worst = worst.max(cond);
            }
        }
        worst
    }

    /// Shrinks the pair by factors of 0.8 until [`Self::log_condition`] stays below
    /// `ln(kappa_max)`. Returns the conditioned pair and the applied factor; the
    /// factor is 1 when the pair is already well conditioned.
    pub fn conditioned(&self, ts: &[f64], rs: &[f64], kappa_max: f64) -> (Self, f64) {
        self.conditioned_with(kappa_max, |p| p.log_condition(ts, rs))
    }

    /// Same as [`Self::conditioned`] with a caller-supplied log condition measure.
    pub fn conditioned_with(&self, kappa_max: f64, measure: impl Fn(&Self) -> f64) -> (Self, f64) {
        let limit = kappa_max.ln();
        let mut scale = 1.0;
        let mut pair = self.clone();
        for _ in 0..200 {
            if measure(&pair) <= limit {
                break;
            }
            scale *= 0.8;
            pair = self.scaled(scale);
        }
        (pair, scale)
    }
}
