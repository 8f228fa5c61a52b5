#![allow(dead_code)]

use matmean::inequalities::HermitianPair;
use matmean::linalg::{
    random_hermitian, ComplexMatrix, HermitianMatrix, PositiveDefiniteMatrix, C64,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn herm(rows: &[&[f64]]) -> HermitianMatrix {
    HermitianMatrix::new(ComplexMatrix::from_real_rows(rows).unwrap()).unwrap()
}

pub fn sigma_z() -> HermitianMatrix {
    herm(&[&[1.0, 0.0], &[0.0, -1.0]])
}

pub fn sigma_x() -> HermitianMatrix {
    herm(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn sigma_y() -> HermitianMatrix {
    HermitianMatrix::new(
        ComplexMatrix::from_row_major(
            2,
            vec![
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap(),
    )
    .unwrap()
}

pub fn pauli_pair() -> HermitianPair {
    HermitianPair::new(sigma_z(), sigma_x()).unwrap()
}

pub fn random_pair(seed: u64, n: usize, sigma: f64) -> HermitianPair {
    let mut r = rng(seed);
    let h = random_hermitian(n, sigma, &mut r);
    let k = random_hermitian(n, sigma, &mut r);
    HermitianPair::new(h, k).unwrap()
}

pub fn random_pd(seed: u64, n: usize, sigma: f64) -> PositiveDefiniteMatrix {
    matmean::linalg::mexp(&random_hermitian(n, sigma, &mut rng(seed))).unwrap()
}

pub fn pd_diag(d: &[f64]) -> PositiveDefiniteMatrix {
    PositiveDefiniteMatrix::new(HermitianMatrix::from_real_diagonal(d)).unwrap()
}

/// `||a - b||_F <= rel * max(||b||_F, 1)`.
pub fn close(a: &ComplexMatrix, b: &ComplexMatrix, rel: f64) -> bool {
    (a - b).frobenius_norm() <= rel * b.frobenius_norm().max(1.0)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// The 2x2 closed form of `e^{σz} #_t e^{σx}`.
///
/// With `X = diag(e, 1/e)` and `Y = cosh(1) I + sinh(1) σx`,
/// `M = X^{-1/2} Y X^{-1/2} = [[c/e, s], [s, c e]]` has trace `2c²` and
/// determinant 1, so its eigenvalues are `μ± = c² ± sqrt(c⁴ - 1)`. By
/// Cayley-Hamilton `M^t = α M + β I` with `α = (μ+^t - μ-^t)/(μ+ - μ-)` and
/// `β = (μ+ μ-^t - μ- μ+^t)/(μ+ - μ-)`, and the mean is `X^{1/2} M^t X^{1/2}`.
pub fn pauli_mean_closed_form(t: f64) -> [[f64; 2]; 2] {
    let e = 1f64.exp();
    let (c, s) = (1f64.cosh(), 1f64.sinh());
    let m = [[c / e, s], [s, c * e]];
    let root = (c.powi(4) - 1.0).sqrt();
    let (mp, mm) = (c * c + root, c * c - root);
    let alpha = (mp.powf(t) - mm.powf(t)) / (mp - mm);
    let beta = (mp * mm.powf(t) - mm * mp.powf(t)) / (mp - mm);
    let mt = [
        [alpha * m[0][0] + beta, alpha * m[0][1]],
        [alpha * m[1][0], alpha * m[1][1] + beta],
    ];
    let xh = [e.sqrt(), 1.0 / e.sqrt()];
    [
        [xh[0] * mt[0][0] * xh[0], xh[0] * mt[0][1] * xh[1]],
        [xh[1] * mt[1][0] * xh[0], xh[1] * mt[1][1] * xh[1]],
    ]
}

pub fn real_matrix(m: [[f64; 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&m[0], &m[1]]).unwrap()
}
