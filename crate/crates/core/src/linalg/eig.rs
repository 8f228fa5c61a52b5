//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the real plane rotation that annihilates it. The
//! accumulated product of these unitaries is the eigenvector matrix.

use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64};
use crate::error::{MatError, Result};

/// Sweep budget before giving up.
pub const MAX_SWEEPS: usize = 30;
/// A pivot is skipped once `|a_pq| <= RELATIVE_PIVOT_TOL * sqrt(|a_pp a_qq|)`.
///
/// The test is relative to the diagonal rather than to `||A||`, so small
/// eigenvalues of positive definite matrices keep their relative accuracy.
pub const RELATIVE_PIVOT_TOL: f64 = f64::EPSILON;
/// Pivots below this fraction of `||A||_F` are skipped regardless of the diagonal.
pub const ABSOLUTE_PIVOT_FLOOR: f64 = 1e-30;

/// Eigenvalues in descending order together with the unitary matrix of eigenvectors (columns).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U diag(values) U*`, re-symmetrized.
    pub fn synthesize(&self, values: &[f64]) -> ComplexMatrix {
        let n = self.dim();
        let u = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = C64::new(0.0, 0.0);
                for (k, &v) in values.iter().enumerate() {
                    acc += u[(i, k)] * u[(j, k)].conj() * v;
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)].im = 0.0;
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.synthesize(&self.eigenvalues)
    }

    /// Max-entry magnitude of `U*U - I`.
    pub fn unitarity_residual(&self) -> f64 {
        let u = &self.eigenvectors;
        let g = &u.adjoint() * u;
        (&g - &ComplexMatrix::identity(self.dim())).max_abs()
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Diagonalizes a Hermitian matrix given as a raw `ComplexMatrix`.
///
/// Only the Hermitian structure is used; callers are expected to have
/// symmetrized the input. Converges when a full sweep finds no pivot above
/// threshold.
pub fn jacobi_eigh(input: &ComplexMatrix) -> Result<SpectralDecomposition> {
    let n = input.dim();
    let mut a = input.clone();
    let mut v = ComplexMatrix::identity(n);
    let floor = ABSOLUTE_PIVOT_FLOOR * input.frobenius_norm();

    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[(p, q)].norm();
                let diag = (a[(p, p)].re * a[(q, q)].re).abs().sqrt();
                if g > floor && g > RELATIVE_PIVOT_TOL * diag {
                    rotate(&mut a, &mut v, p, q);
                    rotated = true;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(MatError::NoConvergence {
            sweeps: MAX_SWEEPS,
            off_norm: off_diagonal_norm(&a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim();
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let phase = apq / g;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // V = diag(1, conj(phase)) on (p, q) followed by the real rotation.
    let vqp = -phase.conj() * s;
    let vqq = phase.conj() * c;

    for k in 0..n {
        let mp = a[(k, p)];
        let mq = a[(k, q)];
        a[(k, p)] = mp * c + mq * vqp;
        a[(k, q)] = mp * s + mq * vqq;
    }
    for k in 0..n {
        let mp = a[(p, k)];
        let mq = a[(q, k)];
        a[(p, k)] = mp * c + mq * vqp.conj();
        a[(q, k)] = mp * s + mq * vqq.conj();
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let mp = v[(k, p)];
        let mq = v[(k, q)];
        v[(k, p)] = mp * c + mq * vqp;
        v[(k, q)] = mp * s + mq * vqq;
    }
}
