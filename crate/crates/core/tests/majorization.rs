mod common;

use common::*;
use matmean::linalg::{random_ginibre, singular_values, ComplexMatrix};
use matmean::majorization::*;

#[test]
fn hand_checked_log_majorization() {
    let tol = MajorizationTolerance::for_dim(3);
    // products 4, 4*1=4, 4*1*0.25=1 against 2, 4, 1
    let v = log_majorization_compare(&[2.0, 2.0, 0.25], &[4.0, 1.0, 0.25], tol).unwrap();
    assert_eq!(v.relation, Relation::Log);
    assert!((v.prefix_margins[0] - 2f64.ln()).abs() < 1e-15);
    assert!(v.prefix_margins[1].abs() < 1e-15);
    let w = log_majorization_compare(&[2.0, 2.0, 0.25], &[4.0, 1.0, 0.5], tol).unwrap();
    assert_eq!(w.relation, Relation::WeakLog);
    assert!((w.total_log_gap - 2f64.ln()).abs() < 1e-15);
    let none = log_majorization_compare(&[4.0, 1.0, 0.25], &[2.0, 2.0, 0.25], tol).unwrap();
    assert_eq!(none.relation, Relation::None);
    assert!(log_majorization_compare(&[1.0, 2.0], &[2.0, 1.0], tol).is_err());
}

#[test]
fn log_majorization_is_reflexive() {
    let s = singular_values(&random_ginibre(5, 1.0, &mut rng(3))).unwrap();
    let v = log_majorization_compare(&s, &s, MajorizationTolerance::for_dim(5)).unwrap();
    assert_eq!(v.relation, Relation::Log);
    assert_eq!(v.worst_margin, 0.0);
}

#[test]
fn additive_majorization() {
    assert!(majorizes(&[3.0, 0.0], &[1.5, 1.5], 1e-12));
    assert!(!majorizes(&[1.5, 1.5], &[3.0, 0.0], 1e-12));
    assert!(weakly_majorizes(&[3.0, 1.0], &[2.0, 1.0], 1e-12));
    assert!(!majorizes(&[3.0, 1.0], &[2.0, 1.0], 1e-12));
}

#[test]
fn norms_of_known_singular_values() {
    let s = [3.0, 2.0, 1.0];
    let eval = |sel| norm_of_singular_values(&s, sel).unwrap();
    assert_eq!(eval(NormSelector::Trace), 6.0);
    assert_eq!(eval(NormSelector::Operator), 3.0);
    assert_eq!(eval(NormSelector::KyFan(2)), 5.0);
    assert!((eval(NormSelector::Frobenius) - 14f64.sqrt()).abs() < 1e-15);
    assert!((eval(NormSelector::Schatten(3.0)) - 36f64.cbrt()).abs() < 1e-14);
    assert!(NormSelector::KyFan(4).validate(3).is_err());
    assert!(NormSelector::Schatten(0.5).validate(3).is_err());
}

#[test]
fn binomials() {
    assert_eq!(binomial(6, 3), 20);
    assert_eq!(binomial(5, 0), 1);
    assert_eq!(binomial(3, 4), 0);
}

#[test]
fn compound_is_multiplicative() {
    let a = random_ginibre(4, 1.0, &mut rng(11));
    let b = random_ginibre(4, 1.0, &mut rng(12));
    for k in 1..=4 {
        let ab = compound_matrix(&(&a * &b), k).unwrap();
        let prod = &compound_matrix(&a, k).unwrap() * &compound_matrix(&b, k).unwrap();
        assert!(close(&ab, &prod, 1e-12), "k = {k}");
        assert_eq!(ab.dim(), binomial(4, k));
    }
    let det = compound_matrix(&a, 4).unwrap()[(0, 0)];
    assert!((det - a.determinant()).norm() < 1e-12 * (1.0 + det.norm()));
}

#[test]
fn compound_top_singular_value_is_singular_product() {
    for n in 2..=6 {
        let a = random_ginibre(n, 1.0, &mut rng(20 + n as u64));
        let s = singular_values(&a).unwrap();
        for k in 1..=n {
            let direct: f64 = s[..k].iter().product();
            let via = top_singular_product(&a, k).unwrap();
            assert!(rel_err(via, direct) < 1e-9, "n = {n}, k = {k}");
        }
    }
    assert!(compound_matrix(&ComplexMatrix::identity(3), 4).is_err());
}
