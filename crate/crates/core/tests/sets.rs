use morl::value::standard_weight_grid;
use morl::{
    ccs_prune, linear_utility, lorenz_dominates, lorenz_vector, mixture_value, pareto_dominates, pareto_prune,
    PruningState, SolutionSet, ValueVector,
};
use proptest::prelude::*;

fn brute_dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y) && a.iter().zip(b).any(|(x, y)| x > y)
}

/// O(n²) reference: keep every point no other point dominates, dropping
/// later copies of an already kept value.
fn brute_front(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for (i, a) in rows.iter().enumerate() {
        let dominated = rows.iter().enumerate().any(|(j, b)| j != i && brute_dominates(b, a));
        if !dominated && !out.contains(a) {
            out.push(a.clone());
        }
    }
    out
}

fn sorted(mut rows: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    rows.sort_by(|a, b| a.partial_cmp(b).unwrap());
    rows
}

fn rows_of(set: &SolutionSet) -> Vec<Vec<f64>> {
    set.values().map(|v| v.as_slice().to_vec()).collect()
}

/// Coordinates on a coarse lattice so ties and duplicates actually occur.
fn point_set(dim: usize, max_len: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec((0i32..12).prop_map(|k| k as f64 * 0.5), dim), 1..=max_len)
}

fn float_set(dim: usize, max_len: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-100.0f64..100.0, dim), 1..=max_len)
}

proptest! {
    #[test]
    fn pareto_matches_brute_force(rows in prop_oneof![point_set(2, 200), point_set(3, 120), point_set(5, 80), float_set(3, 60)]) {
        let set = SolutionSet::from_rows(&rows).unwrap();
        let front = pareto_prune(&set);
        prop_assert_eq!(sorted(rows_of(&front)), sorted(brute_front(&rows)));
        prop_assert_eq!(front.pruning_state(), PruningState::ParetoPruned);
    }

    #[test]
    fn pareto_prune_is_idempotent(rows in point_set(3, 100)) {
        let once = pareto_prune(&SolutionSet::from_rows(&rows).unwrap());
        let twice = pareto_prune(&once);
        prop_assert!(once.same_values(&twice));
    }

    #[test]
    fn dominance_is_a_strict_partial_order(a in prop::collection::vec(0i32..4, 3), b in prop::collection::vec(0i32..4, 3), c in prop::collection::vec(0i32..4, 3)) {
        let v = |x: &Vec<i32>| ValueVector::new(x.iter().map(|&k| k as f64).collect()).unwrap();
        let (a, b, c) = (v(&a), v(&b), v(&c));
        prop_assert!(!pareto_dominates(&a, &a).unwrap());
        if pareto_dominates(&a, &b).unwrap() {
            prop_assert!(!pareto_dominates(&b, &a).unwrap());
            if pareto_dominates(&b, &c).unwrap() {
                prop_assert!(pareto_dominates(&a, &c).unwrap());
            }
        }
    }

    #[test]
    fn ccs_preserves_linear_maxima(rows in float_set(2, 100)) {
        let set = SolutionSet::from_rows(&rows).unwrap();
        let ccs = ccs_prune(&set);
        for w in standard_weight_grid(2) {
            let best = |s: &SolutionSet| s.values().map(|v| linear_utility(&w, v).unwrap()).fold(f64::MIN, f64::max);
            prop_assert!((best(&set) - best(&ccs)).abs() <= 1e-9);
        }
        let front = rows_of(&pareto_prune(&set));
        prop_assert!(rows_of(&ccs).iter().all(|r| front.contains(r)));
    }

    #[test]
    fn ccs_3d_preserves_linear_maxima(rows in float_set(3, 40)) {
        let set = SolutionSet::from_rows(&rows).unwrap();
        let ccs = ccs_prune(&set);
        for w in morl::value::simplex_grid(3, 30) {
            let best = |s: &SolutionSet| s.values().map(|v| linear_utility(&w, v).unwrap()).fold(f64::MIN, f64::max);
            prop_assert!((best(&set) - best(&ccs)).abs() <= 1e-9);
        }
        let front = rows_of(&pareto_prune(&set));
        prop_assert!(rows_of(&ccs).iter().all(|r| front.contains(r)));
    }

    #[test]
    fn lorenz_is_permutation_invariant(v in prop::collection::vec(-10.0f64..10.0, 2..6), seed in any::<u64>()) {
        let mut shuffled = v.clone();
        let n = shuffled.len();
        shuffled.rotate_left((seed as usize) % n);
        let a = ValueVector::new(v).unwrap();
        let b = ValueVector::new(shuffled).unwrap();
        let (la, lb) = (lorenz_vector(&a), lorenz_vector(&b));
        for (x, y) in la.iter().zip(lb.iter()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        prop_assert!(!lorenz_dominates(&a, &b).unwrap());
    }
}

#[test]
fn spec_examples() {
    let s = SolutionSet::from_rows([[1.0, 2.0], [2.0, 1.0], [0.0, 0.0]]).unwrap();
    assert_eq!(rows_of(&pareto_prune(&s)), vec![vec![1.0, 2.0], vec![2.0, 1.0]]);
    let s = SolutionSet::from_rows([[0.0, 2.0], [1.0, 1.0], [2.0, 0.0]]).unwrap();
    assert_eq!(pareto_prune(&s).len(), 3);
    assert_eq!(sorted(rows_of(&ccs_prune(&s))), vec![vec![0.0, 2.0], vec![2.0, 0.0]]);
    let s = SolutionSet::from_rows([[0.0, 3.0], [2.0, 2.0], [3.0, 0.0]]).unwrap();
    assert_eq!(ccs_prune(&s).len(), 3);
}

#[test]
fn lorenz_transfer_from_rich_to_poor() {
    let a = ValueVector::new(vec![2.0, 2.0]).unwrap();
    let b = ValueVector::new(vec![3.0, 1.0]).unwrap();
    assert!(lorenz_dominates(&a, &b).unwrap());
    assert!(!pareto_dominates(&a, &b).unwrap());
}

#[test]
fn mixture_is_the_weighted_mean() {
    let m = mixture_value(&[
        (ValueVector::new(vec![2.0, 0.0]).unwrap(), 0.5),
        (ValueVector::new(vec![0.0, 2.0]).unwrap(), 0.5),
    ])
    .unwrap();
    assert_eq!(m.as_slice(), &[1.0, 1.0]);
    assert!(mixture_value(&[(ValueVector::new(vec![1.0, 1.0]).unwrap(), 0.7)]).is_err());
}

#[test]
fn dimension_mismatch_is_reported() {
    let a = ValueVector::new(vec![1.0, 2.0]).unwrap();
    let b = ValueVector::new(vec![1.0, 2.0, 3.0]).unwrap();
    assert!(matches!(pareto_dominates(&a, &b), Err(morl::Error::DimensionMismatch { .. })));
    assert!(ValueVector::new(vec![1.0]).is_err());
    assert!(ValueVector::new(vec![1.0, f64::NAN]).is_err());
}
