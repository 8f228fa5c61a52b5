mod common;

use common::*;
use matmean::inequalities::*;
use matmean::linalg::{random_commuting_pair, random_ginibre, HermitianMatrix};
use matmean::majorization::{NormSelector, Relation};

const GT_LHS: f64 = 4.356367113217142;
const GT_RHS: f64 = 4.762195691083631;

#[test]
fn golden_thompson_pauli_values() {
    let r = golden_thompson(&pauli_pair()).unwrap();
    // 2 cosh(√2) and 2 cosh²(1)
    assert!((r.lhs - GT_LHS).abs() < 1e-12);
    assert!((r.rhs - GT_RHS).abs() < 1e-12);
    assert_eq!(r.verdict, Verdict::Holds);
}

#[test]
fn three_regimes_order_on_random_pairs() {
    let norms = NormSelector::default_set(4);
    for seed in 0..20 {
        let pair = random_pair(seed, 4, 0.5);
        for t in [-2.0, -0.5, 0.25, 0.75, 1.5, 2.5] {
            for r in three_way_compare(&pair, t, &norms).unwrap() {
                assert_ne!(r.verdict, Verdict::Violated, "seed {seed} t {t}: {r:?}");
            }
        }
    }
}

#[test]
fn commuting_pairs_collapse_the_three_families() {
    let (h, k) = random_commuting_pair(3, 0.7, &mut rng(4));
    let pair = HermitianPair::new(h, k).unwrap();
    for t in [-1.0, 0.5, 2.0] {
        let w = three_way_spectra(&pair, t).unwrap();
        for i in 0..3 {
            assert!(rel_err(w.mean[i], w.exp[i]) < 1e-10);
            assert!(rel_err(w.product[i], w.exp[i]) < 1e-10);
        }
    }
}

#[test]
fn interpolation_endpoints_are_equalities() {
    let pair = random_pair(8, 4, 0.5);
    let norms = NormSelector::default_set(4);
    for r in [0.25, 1.0, 4.0] {
        for t in [0.0, 1.0] {
            let res = interior_interpolation(&pair, t, r, &norms).unwrap();
            assert!(
                res.iter().all(|c| c.verdict == Verdict::Equality),
                "t {t} r {r}"
            );
        }
    }
}

#[test]
fn araki_and_logmaj_on_random_pairs() {
    for seed in 0..10 {
        let pair = random_pair(100 + seed, 4, 0.5);
        for r in [1.0, 2.0, 4.0] {
            let (a, b) = (pair.exp_h(1.0).unwrap(), pair.exp_k(1.0).unwrap());
            let v = araki_check(&a, &b, r).unwrap();
            assert_eq!(v.relation, Relation::Log, "seed {seed} r {r}");
        }
        for q in [0.5, 1.0, 2.0] {
            assert_eq!(gt_logmaj(&pair, q).unwrap().relation, Relation::Log);
        }
    }
}

#[test]
fn theorem5_and_furuta_on_random_pairs() {
    for seed in 0..10 {
        let pair = random_pair(200 + seed, 4, 0.5);
        for t in [1.0, 1.5, 2.0] {
            assert_eq!(theorem5_check(&pair, t).unwrap().relation, Relation::Log);
        }
        for t in [1.25, 1.5, 2.0] {
            for r in furuta_instance(&pair, t).unwrap() {
                assert!(!r.is_failure(), "{r:?}");
            }
        }
    }
    assert!(theorem5_check(&pauli_pair(), 2.5).is_err());
    assert!(furuta_instance(&pauli_pair(), 1.0).is_err());
}

#[test]
fn compound_crosscheck_for_all_orders() {
    for n in 2..=6 {
        let a = random_ginibre(n, 1.0, &mut rng(n as u64));
        let res = compound_singular_crosscheck(&a).unwrap();
        assert_eq!(res.len(), n);
        assert!(res.iter().all(|r| !r.is_failure()));
    }
}

#[test]
fn zero_pair_gives_equalities() {
    let zero = HermitianMatrix::from_real_diagonal(&[0.0]);
    let pair = HermitianPair::new(zero.clone(), zero).unwrap();
    let (report, results) = run_pair(&SuiteConfig::for_dim(1), pair).unwrap();
    assert!(report.passed());
    for r in &results {
        // families built on the identity perturbations compare 2 against 1
        let perturbed = r.check_id.starts_with("furuta.") || r.check_id.starts_with("convexity.");
        if !perturbed {
            assert!(
                matches!(r.verdict, Verdict::Equality | Verdict::NotApplicable),
                "{r:?}"
            );
        }
    }
}

#[test]
fn pauli_pair_passes_every_family() {
    let (report, results) = run_pair(&SuiteConfig::for_dim(2), pauli_pair()).unwrap();
    assert!(report.passed(), "{:?}", report.failures);
    let families: std::collections::BTreeSet<_> = results
        .iter()
        .filter_map(|r| CheckKind::of_check_id(&r.check_id))
        .collect();
    assert_eq!(families.len(), CheckKind::ALL.len());
}

#[test]
fn lie_trotter_converges_at_first_order() {
    let e = trotter_errors(&random_pair(9, 3, 0.7), &[16, 32, 64, 128]).unwrap();
    for w in e.errors.windows(2) {
        let ratio = w[1] / w[0];
        assert!((0.3..0.7).contains(&ratio), "ratio {ratio}");
    }
}
