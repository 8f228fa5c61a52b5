mod common;

use common::*;
use matmean::linalg::*;
use matmean::MatError;

#[test]
fn random_hermitian_spectra_reconstruct() {
    for n in 1..=8 {
        let h = random_hermitian(n, 1.0, &mut rng(n as u64));
        let d = h.eig().unwrap();
        assert!(d.unitarity_residual() < 1e-12, "n = {n}");
        assert!(close(&d.reconstruct(), h.as_matrix(), 1e-12), "n = {n}");
        assert!(d.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        let trace: f64 = d.eigenvalues.iter().sum();
        assert!((trace - h.trace()).abs() < 1e-12 * (1.0 + trace.abs()));
    }
}

#[test]
fn exponential_of_pauli_x() {
    // e^{a σx} = cosh(a) I + sinh(a) σx
    let a = 0.7f64;
    let e = mexp(&sigma_x().scale(a)).unwrap();
    let expected =
        ComplexMatrix::from_real_rows(&[&[a.cosh(), a.sinh()], &[a.sinh(), a.cosh()]]).unwrap();
    assert!(close(e.as_matrix(), &expected, 1e-14));
}

#[test]
fn exponential_of_pauli_y_is_complex() {
    // e^{a σy} = cosh(a) I + sinh(a) σy
    let a = 1.3f64;
    let e = mexp(&sigma_y().scale(a)).unwrap();
    let expected =
        &ComplexMatrix::identity(2).scale(a.cosh()) + &sigma_y().as_matrix().scale(a.sinh());
    assert!(close(e.as_matrix(), &expected, 1e-14));
}

#[test]
fn log_inverts_exp_and_powers_compose() {
    let h = random_hermitian(5, 1.0, &mut rng(21));
    let p = mexp(&h).unwrap();
    let back = mlog(p.as_hermitian()).unwrap();
    assert!(close(back.as_matrix(), h.as_matrix(), 1e-12));
    let a = p.pow(0.3).unwrap();
    let b = p.pow(0.7).unwrap();
    assert!(close(
        &(a.as_matrix() * b.as_matrix()),
        p.as_matrix(),
        1e-12
    ));
    let half = p.sqrt().unwrap();
    assert!(close(
        &(half.as_matrix() * half.as_matrix()),
        p.as_matrix(),
        1e-12
    ));
    let inv = p.pow(-1.0).unwrap();
    assert!(close(
        &(inv.as_matrix() * p.as_matrix()),
        &ComplexMatrix::identity(5),
        1e-12
    ));
}

#[test]
fn pauli_commutator() {
    // [σz, σx] = 2i σy, Frobenius norm 2√2
    let c = commutator_norm(&sigma_z(), &sigma_x()).unwrap();
    assert!((c - 2.0 * 2f64.sqrt()).abs() < 1e-15);
    let d = HermitianMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
    let e = HermitianMatrix::from_real_diagonal(&[-1.0, 0.5, 4.0]);
    assert_eq!(commutator_norm(&d, &e).unwrap(), 0.0);
}

#[test]
fn singular_values_of_a_known_matrix() {
    // [[3, 0], [4, 5]] has singular values 3√5 and √5
    let a = ComplexMatrix::from_real_rows(&[&[3.0, 0.0], &[4.0, 5.0]]).unwrap();
    let s = singular_values(&a).unwrap();
    assert!((s[0] - 3.0 * 5f64.sqrt()).abs() < 1e-13);
    assert!((s[1] - 5f64.sqrt()).abs() < 1e-13);
}

#[test]
fn constructors_validate() {
    let bad = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
    assert!(matches!(
        HermitianMatrix::new(bad),
        Err(MatError::NotHermitian { .. })
    ));
    let indefinite = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]);
    assert!(matches!(
        PositiveDefiniteMatrix::new(indefinite),
        Err(MatError::NotPositiveDefinite { .. })
    ));
    assert!(matches!(
        ComplexMatrix::from_row_major(2, vec![C64::new(0.0, 0.0); 3]),
        Err(MatError::Shape { .. })
    ));
}

#[test]
fn seeded_ensembles_are_reproducible() {
    let a = random_hermitian(4, 1.0, &mut rng(5));
    let b = random_hermitian(4, 1.0, &mut rng(5));
    assert_eq!(a, b);
    let (h, k) = random_commuting_pair(4, 1.0, &mut rng(6));
    assert!(commutator_norm(&h, &k).unwrap() < 1e-12);
    let u = random_unitary(5, &mut rng(7));
    assert!(close(
        &(&u.adjoint() * &u),
        &ComplexMatrix::identity(5),
        1e-13
    ));
}

#[test]
fn gram_spectrum_is_nonnegative() {
    let w = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
    let s = gram_spectrum(&w).unwrap();
    assert!((s[0] - 4.0).abs() < 1e-14);
    assert_eq!(s[1], 0.0);
}
