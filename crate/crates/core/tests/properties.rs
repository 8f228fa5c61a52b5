mod common;

use common::*;
use matmean::cli::{
    format_complex, parse_complex, parse_matrix_file, write_matrix_file, MatrixKind,
};
use matmean::inequalities::*;
use matmean::linalg::{mexp, random_hermitian, ComplexMatrix, C64};
use matmean::majorization::{
    log_majorization_compare, MajorizationTolerance, NormSelector, Relation,
};
use matmean::means::{geometric_mean, riemannian_distance};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), n in 1usize..7, sigma in 0.1f64..3.0) {
        let h = random_hermitian(n, sigma, &mut rng(seed));
        let d = h.eig().unwrap();
        prop_assert!(d.unitarity_residual() < 1e-12);
        prop_assert!(close(&d.reconstruct(), h.as_matrix(), 1e-12));
    }

    #[test]
    fn switch_relation(seed in any::<u64>(), n in 1usize..5, t in -3.0f64..3.0) {
        let x = random_pd(seed, n, 0.5);
        let y = random_pd(seed.wrapping_add(1), n, 0.5);
        let a = geometric_mean(&x, &y, t).unwrap();
        let b = geometric_mean(&y, &x, 1.0 - t).unwrap();
        prop_assert!(close(a.as_matrix(), b.as_matrix(), 1e-9));
    }

    #[test]
    fn geodesic_distance_is_linear_in_weight(seed in any::<u64>(), t in -2.0f64..2.0) {
        let x = random_pd(seed, 3, 0.5);
        let y = random_pd(seed.wrapping_add(1), 3, 0.5);
        let d = riemannian_distance(&x, &y).unwrap();
        let dt = riemannian_distance(&x, &geometric_mean(&x, &y, t).unwrap()).unwrap();
        prop_assert!((dt - t.abs() * d).abs() < 1e-9 * (1.0 + d));
    }

    #[test]
    fn scalar_means_follow_power_law(a in 0.01f64..100.0, b in 0.01f64..100.0, t in -3.0f64..3.0) {
        let m = geometric_mean(&pd_diag(&[a]), &pd_diag(&[b]), t).unwrap();
        prop_assert!(rel_err(m.as_matrix()[(0, 0)].re, a.powf(1.0 - t) * b.powf(t)) < 1e-12);
    }

    #[test]
    fn three_way_orderings_hold(seed in any::<u64>(), n in 2usize..5, t in -3.0f64..3.0) {
        let pair = random_pair(seed, n, 0.4);
        for r in three_way_compare(&pair, t, &NormSelector::default_set(n)).unwrap() {
            prop_assert_ne!(r.verdict, Verdict::Violated, "{:?}", r);
        }
    }

    #[test]
    fn product_log_majorizes_mean(seed in any::<u64>(), n in 2usize..5, t in 1.0f64..2.0) {
        let pair = random_pair(seed, n, 0.4);
        prop_assert_eq!(theorem5_check(&pair, t).unwrap().relation, Relation::Log);
    }

    #[test]
    fn golden_thompson_mean_log_majorized(seed in any::<u64>(), q in 0.1f64..4.0) {
        let pair = random_pair(seed, 3, 0.4);
        prop_assert!(gt_logmaj(&pair, q).unwrap().relation.satisfies(Relation::Log));
    }

    #[test]
    fn log_majorization_is_reflexive(seed in any::<u64>(), n in 1usize..7) {
        let p = mexp(&random_hermitian(n, 1.0, &mut rng(seed))).unwrap();
        let s = p.eigenvalues().to_vec();
        let v = log_majorization_compare(&s, &s, MajorizationTolerance::for_dim(n)).unwrap();
        prop_assert_eq!(v.relation, Relation::Log);
    }

    #[test]
    fn complex_numbers_round_trip(re in any::<f64>(), im in any::<f64>()) {
        prop_assume!(re.is_finite() && im.is_finite());
        let z = C64::new(re, im);
        let back = parse_complex(&format_complex(z)).unwrap();
        prop_assert_eq!(back.re.to_bits(), z.re.to_bits());
        prop_assert_eq!(back.im.to_bits(), z.im.to_bits());
    }

    #[test]
    fn matrix_files_round_trip(seed in any::<u64>(), n in 1usize..6, sigma in 1e-3f64..1e3) {
        let h = random_hermitian(n, sigma, &mut rng(seed));
        let k = random_hermitian(n, sigma, &mut rng(seed ^ 1));
        let parsed = parse_matrix_file(&write_matrix_file(h.as_matrix(), k.as_matrix(), MatrixKind::Hermitian)).unwrap();
        prop_assert_eq!(parsed.h.as_matrix(), h.as_matrix());
        prop_assert_eq!(parsed.k.as_matrix(), k.as_matrix());
    }

    #[test]
    fn commuting_pairs_give_equal_families(seed in any::<u64>(), t in -3.0f64..3.0) {
        let d1: Vec<f64> = (0..3).map(|i| ((seed >> (8 * i)) & 0xff) as f64 / 255.0 - 0.5).collect();
        let d2: Vec<f64> = (0..3).map(|i| ((seed >> (8 * i + 24)) & 0xff) as f64 / 255.0 - 0.5).collect();
        let pair = HermitianPair::new(
            matmean::linalg::HermitianMatrix::from_real_diagonal(&d1),
            matmean::linalg::HermitianMatrix::from_real_diagonal(&d2),
        ).unwrap();
        let w = three_way_spectra(&pair, t).unwrap();
        for i in 0..3 {
            prop_assert!(rel_err(w.mean[i], w.exp[i]) < 1e-12);
            prop_assert!(rel_err(w.product[i], w.exp[i]) < 1e-12);
        }
    }
}

#[test]
fn identity_is_a_fixed_point() {
    let i = pd_diag(&[1.0, 1.0, 1.0]);
    let m = geometric_mean(&i, &i, -2.5).unwrap();
    assert!(close(m.as_matrix(), &ComplexMatrix::identity(3), 1e-15));
}
