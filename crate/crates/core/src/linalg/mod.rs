//! Dense complex matrices, the Hermitian Jacobi eigensolver and spectral functional calculus.

mod eig;
mod hermitian;
mod matrix;
mod random;

pub use eig::{
    jacobi_eigh, SpectralDecomposition, ABSOLUTE_PIVOT_FLOOR, MAX_SWEEPS, RELATIVE_PIVOT_TOL,
};
pub use hermitian::{
    commutator_norm, gram, gram_spectrum, mexp, mexp_from, mlog, mpow, singular_values,
    spectral_function, HermitianMatrix, PositiveDefiniteMatrix, HERMITIAN_TOL, PD_THRESHOLD,
};
pub use matrix::{ComplexMatrix, C64};
pub use random::{random_commuting_pair, random_ginibre, random_hermitian, random_unitary};

/// Eigensolve of a Hermitian matrix.
pub fn hermitian_eig(a: &HermitianMatrix) -> crate::Result<SpectralDecomposition> {
    a.eig()
}
