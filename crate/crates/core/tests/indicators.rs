use morl::indicators::{
    coverage_ratio, epsilon_additive, epsilon_multiplicative, eum_with, expected_utility_metric, hypervolume,
    maximum_utility_loss, mul_with, sparsity, ReferencePoint, UtilityPrior,
};
use morl::{ccs_prune, pareto_prune, SolutionSet, UtilityFunction};
use proptest::prelude::*;

fn set(rows: &[Vec<f64>]) -> SolutionSet {
    SolutionSet::from_rows(rows).unwrap()
}

/// Counts unit lattice cells `[k, k+1)^d` above the origin that some point
/// weakly dominates. Exact for integer points and a zero reference.
fn lattice_volume(rows: &[Vec<f64>], dim: usize, extent: usize) -> f64 {
    let mut count = 0usize;
    let mut cell = vec![0usize; dim];
    loop {
        let covered = rows
            .iter()
            .any(|r| r.iter().zip(&cell).all(|(x, &k)| *x >= k as f64 + 1.0));
        count += usize::from(covered);
        let mut j = 0;
        loop {
            if j == dim {
                return count as f64;
            }
            cell[j] += 1;
            if cell[j] < extent {
                break;
            }
            cell[j] = 0;
            j += 1;
        }
    }
}

fn lattice_set(dim: usize, max_len: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec((0u8..=8).prop_map(f64::from), dim), 1..=max_len)
}

proptest! {
    #[test]
    fn hypervolume_matches_lattice_count_2d(rows in lattice_set(2, 30)) {
        let hv = hypervolume(&set(&rows), &ReferencePoint::new(vec![0.0, 0.0]).unwrap()).unwrap();
        prop_assert_eq!(hv, lattice_volume(&rows, 2, 8));
    }

    #[test]
    fn hypervolume_matches_lattice_count_3d(rows in lattice_set(3, 15)) {
        let hv = hypervolume(&set(&rows), &ReferencePoint::new(vec![0.0; 3]).unwrap()).unwrap();
        prop_assert_eq!(hv, lattice_volume(&rows, 3, 8));
    }

    #[test]
    fn hypervolume_is_monotone_and_order_free(rows in prop::collection::vec(prop::collection::vec(0.0f64..10.0, 3), 2..20), extra in prop::collection::vec(0.0f64..10.0, 3)) {
        let r = ReferencePoint::new(vec![0.0; 3]).unwrap();
        let base = hypervolume(&set(&rows), &r).unwrap();
        let mut grown = rows.clone();
        grown.push(extra);
        prop_assert!(hypervolume(&set(&grown), &r).unwrap() >= base - 1e-9);
        let mut reversed = rows.clone();
        reversed.reverse();
        prop_assert!((hypervolume(&set(&reversed), &r).unwrap() - base).abs() <= 1e-9 * base.max(1.0));
        prop_assert!((hypervolume(&pareto_prune(&set(&rows)), &r).unwrap() - base).abs() <= 1e-9 * base.max(1.0));
    }

    #[test]
    fn eum_grows_with_the_set_and_ignores_non_ccs_points(rows in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 2), 2..40)) {
        let prior = UtilityPrior::uniform_linear(2, 500, 11);
        let sample = prior.materialize().unwrap();
        let full = set(&rows);
        let part = set(&rows[..rows.len() / 2 + 1]);
        prop_assert!(eum_with(&full, &sample).unwrap() >= eum_with(&part, &sample).unwrap());
        prop_assert_eq!(eum_with(&full, &sample).unwrap(), eum_with(&ccs_prune(&full), &sample).unwrap());
    }

    #[test]
    fn mul_bounds_the_eum_gap(rows in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 2), 2..30)) {
        let sample = UtilityPrior::uniform_linear(2, 300, 5).materialize().unwrap();
        let optimal = set(&rows);
        let approx = set(&rows[..1]);
        let gap = eum_with(&optimal, &sample).unwrap() - eum_with(&approx, &sample).unwrap();
        prop_assert!(mul_with(&approx, &optimal, &sample).unwrap() >= gap - 1e-12);
        prop_assert_eq!(mul_with(&optimal, &optimal, &sample).unwrap(), 0.0);
    }

    #[test]
    fn epsilon_of_a_set_against_itself_is_zero(rows in prop::collection::vec(prop::collection::vec(0.1f64..5.0, 3), 1..30)) {
        let s = set(&rows);
        prop_assert_eq!(epsilon_additive(&s, &s).unwrap(), 0.0);
        prop_assert_eq!(epsilon_multiplicative(&s, &s).unwrap(), 0.0);
    }
}

#[test]
fn hypervolume_examples() {
    let r = ReferencePoint::new(vec![0.0, 0.0]).unwrap();
    assert_eq!(hypervolume(&set(&[vec![1.0, 2.0], vec![2.0, 1.0]]), &r).unwrap(), 3.0);
    let r3 = ReferencePoint::new(vec![0.0; 3]).unwrap();
    assert_eq!(hypervolume(&set(&[vec![1.0, 1.0, 1.0]]), &r3).unwrap(), 1.0);
    let r4 = ReferencePoint::new(vec![0.0; 4]).unwrap();
    assert!(matches!(
        hypervolume(&set(&[vec![1.0; 4]]), &r4),
        Err(morl::Error::UnsupportedDimension(_))
    ));
    assert!(hypervolume(&set(&[vec![-1.0, 1.0]]), &r).is_err());
}

#[test]
fn epsilon_examples() {
    let a = set(&[vec![1.0, 1.0]]);
    let b = set(&[vec![2.0, 2.0]]);
    assert_eq!(epsilon_additive(&a, &b).unwrap(), 1.0);
    assert_eq!(epsilon_multiplicative(&a, &b).unwrap(), 1.0);
    assert!(epsilon_multiplicative(&set(&[vec![0.0, 1.0]]), &b).is_err());
}

#[test]
fn sparsity_examples() {
    assert_eq!(sparsity(&set(&[vec![0.0, 2.0], vec![1.0, 1.0], vec![2.0, 0.0]])).unwrap(), 2.0);
    assert_eq!(sparsity(&set(&[vec![3.0, 3.0]])).unwrap(), 0.0);
}

#[test]
fn coverage_ratio_examples() {
    let cs = set(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
    let r = coverage_ratio(&cs, &cs, 0.01).unwrap();
    assert_eq!((r.precision, r.recall, r.f_score), (1.0, 1.0, 1.0));
    let half = coverage_ratio(&set(&[vec![1.0, 0.0], vec![5.0, 5.0]]), &cs, 0.01).unwrap();
    assert_eq!((half.precision, half.recall), (0.5, 0.5));
    // two copies of one entry still cover only that entry
    let dup = coverage_ratio(&set(&[vec![1.0, 0.0], vec![1.0, 0.0]]), &cs, 0.01).unwrap();
    assert_eq!((dup.precision, dup.recall), (1.0, 0.5));
}

#[test]
fn eum_analytic_value() {
    // E[max(w, 1 − w)] for w ~ U[0, 1] is 3/4
    let s = set(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
    let eum = expected_utility_metric(&s, &UtilityPrior::uniform_linear(2, 100_000, 3)).unwrap();
    assert!((eum - 0.75).abs() < 0.005, "{eum}");
}

#[test]
fn explicit_prior_is_an_exact_expectation() {
    let u = |w: Vec<f64>| UtilityFunction::linear(w).unwrap();
    let prior = UtilityPrior::Explicit { utilities: vec![(u(vec![1.0, 0.0]), 0.25), (u(vec![0.0, 1.0]), 0.75)] };
    let s = set(&[vec![4.0, 0.0], vec![0.0, 2.0]]);
    assert_eq!(expected_utility_metric(&s, &prior).unwrap(), 0.25 * 4.0 + 0.75 * 2.0);
    let bad = UtilityPrior::Explicit { utilities: vec![(u(vec![1.0, 0.0]), 0.5)] };
    assert!(expected_utility_metric(&s, &bad).is_err());
}

#[test]
fn mul_against_an_optimal_set() {
    let family = UtilityPrior::LinearGrid { dim: 2, resolution: 4 };
    let optimal = set(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
    let approx = set(&[vec![1.0, 0.0]]);
    assert_eq!(maximum_utility_loss(&approx, &optimal, &family).unwrap(), 1.0);
    assert_eq!(maximum_utility_loss(&optimal, &optimal, &family).unwrap(), 0.0);
}

#[test]
fn nonlinear_utilities_in_priors() {
    let product: UtilityFunction = "mul obj0 obj1".parse().unwrap();
    let prior = UtilityPrior::Explicit { utilities: vec![(product, 1.0)] };
    // the balanced point wins under a product even though it is not on the CCS
    let s = set(&[vec![4.0, 0.0], vec![1.5, 1.5], vec![0.0, 4.0]]);
    assert_eq!(expected_utility_metric(&s, &prior).unwrap(), 2.25);
    assert_eq!(ccs_prune(&s).len(), 2);
}
