//! Seeded random ensembles.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::hermitian::HermitianMatrix;
use super::matrix::{ComplexMatrix, C64};

/// Complex Gaussian with `E|z|^2 = sigma^2`.
fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, sigma: f64) -> C64 {
    let normal = Normal::new(0.0, sigma / std::f64::consts::SQRT_2).expect("sigma is finite");
    C64::new(normal.sample(rng), normal.sample(rng))
}

/// `n x n` matrix with i.i.d. complex Gaussian entries of standard deviation `sigma`.
pub fn random_ginibre<R: Rng + ?Sized>(n: usize, sigma: f64, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng, sigma))
}

/// GUE-style draw `H = (G + G*)/2`.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, sigma: f64, rng: &mut R) -> HermitianMatrix {
    assert!(
        n >= 1 && sigma > 0.0,
        "random_hermitian needs n >= 1 and sigma > 0"
    );
    HermitianMatrix::symmetrize(&random_ginibre(n, sigma, rng))
}

/// Haar-distributed unitary from a Gram-Schmidt orthonormalized Ginibre draw
/// with the usual phase correction.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_ginibre(n, 1.0, rng);
    let mut q = ComplexMatrix::zeros(n);
    for j in 0..n {
        let mut col: Vec<C64> = (0..n).map(|i| g[(i, j)]).collect();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for k in 0..j {
                let proj: C64 = (0..n).map(|i| q[(i, k)].conj() * col[i]).sum();
                for (i, c) in col.iter_mut().enumerate() {
                    *c -= q[(i, k)] * proj;
                }
            }
        }
        let norm = col.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for (i, c) in col.iter().enumerate() {
            q[(i, j)] = c / norm;
        }
    }
    q
}

/// Two Hermitian matrices sharing a random eigenbasis, hence commuting.
pub fn random_commuting_pair<R: Rng + ?Sized>(
    n: usize,
    sigma: f64,
    rng: &mut R,
) -> (HermitianMatrix, HermitianMatrix) {
    let u = random_unitary(n, rng);
    let normal = Normal::new(0.0, sigma).expect("sigma is finite");
    let build = |rng: &mut R| {
        let d: Vec<f64> = (0..n).map(|_| normal.sample(rng)).collect();
        let dm = ComplexMatrix::from_real_diagonal(&d);
        HermitianMatrix::symmetrize(&(&(&u * &dm) * &u.adjoint()))
    };
    let h = build(rng);
    let k = build(rng);
    (h, k)
}
