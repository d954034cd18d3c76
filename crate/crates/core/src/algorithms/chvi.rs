//! Convex-hull value iteration for finite MOMDPs.
//!
//! Value iteration over sets of value vectors:
//!
//! ```text
//! Q(s, a) = ⊕_{s'} T(s, a, s') · (R(s, a, s') + γ V(s'))
//! V(s)    = prune( ∪_a Q(s, a) )
//! ```
//!
//! where `⊕` is the Minkowski (cross) sum and `prune` is [`ccs_prune`],
//! applied after every cross-sum step to keep the sets small. Sweeps run
//! in place, in reverse topological order when the model is acyclic, until
//! the [`coverage_distance`] between successive sets is within the
//! tolerance.

use crate::error::{Error, Result};
use crate::momdp::{MomdpModel, Outcome};
use crate::sets::{ccs_prune, pareto_prune, SolutionSet};
use crate::value::{simplex_grid, ValueVector};

/// Which pruning operator the set backup applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetPruning {
    /// Convex coverage set: optimal for every linear utility.
    #[default]
    Ccs,
    /// Pareto front. Exact for deterministic models; with stochastic
    /// transitions the sets may include values of policies that choose
    /// differently in the same state.
    Pareto,
}

impl SetPruning {
    fn apply(self, set: &SolutionSet) -> SolutionSet {
        match self {
            Self::Ccs => ccs_prune(set),
            Self::Pareto => pareto_prune(set),
        }
    }
}

/// Upper bound on the number of sweeps.
pub const MAX_SWEEPS: usize = 100_000;

/// Convex coverage sets of every state of `model`.
pub fn chvi(model: &MomdpModel, tolerance: f64) -> Result<Vec<SolutionSet>> {
    set_value_iteration(model, tolerance, SetPruning::Ccs)
}

/// Set-valued value iteration with the chosen pruning operator.
pub fn set_value_iteration(model: &MomdpModel, tolerance: f64, pruning: SetPruning) -> Result<Vec<SolutionSet>> {
    if !(tolerance >= 0.0 && tolerance.is_finite()) {
        return Err(Error::Domain(format!("tolerance must be finite and nonnegative, got {tolerance}")));
    }
    let d = model.num_objectives();
    let order = match model.topological_order() {
        Some(mut topo) => {
            topo.reverse();
            topo
        }
        None if model.gamma() < 1.0 => (0..model.num_states()).filter(|&s| !model.is_absorbing(s)).collect(),
        None => {
            return Err(Error::Domain(
                "undiscounted model with cycles outside absorbing states is not episodic".into(),
            ))
        }
    };
    let zero = SolutionSet::from_values([ValueVector::zeros(d)?])?;
    let mut values: Vec<SolutionSet> = vec![zero; model.num_states()];
    for _ in 0..MAX_SWEEPS {
        let mut change: f64 = 0.0;
        for &s in &order {
            let updated = backup(model, &values, s, pruning)?;
            change = change.max(coverage_distance(&values[s], &updated, pruning));
            values[s] = updated;
        }
        if change <= tolerance {
            return Ok(values);
        }
    }
    Err(Error::Numeric(format!("set value iteration did not converge in {MAX_SWEEPS} sweeps")))
}

fn backup(model: &MomdpModel, values: &[SolutionSet], s: usize, pruning: SetPruning) -> Result<SolutionSet> {
    let mut union = SolutionSet::new();
    for a in 0..model.num_actions() {
        let q = action_set(model, values, model.outcomes(s, a), pruning)?;
        for v in q.values() {
            union.push(union.len() as u64, v.clone())?;
        }
    }
    Ok(pruning.apply(&union))
}

fn action_set(model: &MomdpModel, values: &[SolutionSet], outcomes: &[Outcome], pruning: SetPruning) -> Result<SolutionSet> {
    let gamma = model.gamma();
    let mut acc: Option<Vec<Vec<f64>>> = None;
    for o in outcomes.iter().filter(|o| o.prob > 0.0) {
        let term: Vec<Vec<f64>> = values[o.next]
            .values()
            .map(|v| v.iter().zip(&o.reward).map(|(x, r)| o.prob * (r + gamma * x)).collect())
            .collect();
        let combined = match acc {
            None => term,
            Some(prev) => {
                let mut sums = Vec::with_capacity(prev.len() * term.len());
                for p in &prev {
                    for t in &term {
                        sums.push(p.iter().zip(t).map(|(a, b)| a + b).collect());
                    }
                }
                sums
            }
        };
        let pruned = pruning.apply(&SolutionSet::from_rows(&combined)?);
        acc = Some(pruned.values().map(|v| v.as_slice().to_vec()).collect());
    }
    SolutionSet::from_rows(acc.unwrap_or_default())
}

/// L∞ Hausdorff distance between the regions two sets cover: the
/// downward closures of their convex hulls for [`SetPruning::Ccs`], of the
/// sets themselves for [`SetPruning::Pareto`]. Infinite when exactly one
/// set is empty.
///
/// For convex regions this is the largest gap between the support
/// functions `max_v w·v` over the weight simplex. With two objectives the
/// gap is evaluated at every hull-edge normal, which is exact; with more it
/// is evaluated on a simplex lattice.
pub fn coverage_distance(a: &SolutionSet, b: &SolutionSet, pruning: SetPruning) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    match pruning {
        SetPruning::Pareto => {
            // distance from x to the region below `b`
            fn directed(a: &SolutionSet, b: &SolutionSet) -> f64 {
                a.values()
                    .map(|x| {
                        b.values()
                            .map(|y| x.iter().zip(y.iter()).map(|(p, q)| p - q).fold(0.0, f64::max))
                            .fold(f64::INFINITY, f64::min)
                    })
                    .fold(0.0, f64::max)
            }
            directed(a, b).max(directed(b, a))
        }
        SetPruning::Ccs => {
            let (ha, hb) = (ccs_prune(a), ccs_prune(b));
            let weights = match a.dim() {
                Some(2) => edge_normals(&ha).into_iter().chain(edge_normals(&hb)).map(|l| vec![l, 1.0 - l]).collect(),
                Some(d) => simplex_grid(d, lattice_resolution(d)).into_iter().map(|w| w.as_slice().to_vec()).collect(),
                None => Vec::new(),
            };
            weights
                .iter()
                .map(|w| (support(&ha, w) - support(&hb, w)).abs())
                .fold(0.0, f64::max)
        }
    }
}

fn support(set: &SolutionSet, w: &[f64]) -> f64 {
    set.values()
        .map(|v| v.iter().zip(w).map(|(x, y)| x * y).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Weights `λ` on the first objective at which consecutive vertices of a
/// two-objective hull tie, plus both ends of the simplex.
fn edge_normals(hull: &SolutionSet) -> Vec<f64> {
    let mut pts: Vec<(f64, f64)> = hull.values().map(|v| (v[0], v[1])).collect();
    pts.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut out = vec![0.0, 1.0];
    for pair in pts.windows(2) {
        let (rise, run) = (pair[0].1 - pair[1].1, pair[1].0 - pair[0].0);
        if rise + run > 0.0 {
            out.push(rise / (rise + run));
        }
    }
    out
}

/// Finest lattice resolution (at most 200) with no more than 50 000 weights.
fn lattice_resolution(dim: usize) -> usize {
    let count = |r: usize| (1..dim).fold(1.0_f64, |acc, i| acc * (r + i) as f64 / i as f64);
    (1..=200).rev().find(|&r| count(r) <= 50_000.0).unwrap_or(1)
}

/// Symmetric Hausdorff distance between the point sets under the L∞ norm.
/// Infinite when exactly one set is empty.
pub fn hausdorff_linf(a: &SolutionSet, b: &SolutionSet) -> f64 {
    fn directed(a: &SolutionSet, b: &SolutionSet) -> f64 {
        a.values()
            .map(|x| {
                b.values()
                    .map(|y| x.iter().zip(y.iter()).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }
    match (a.is_empty(), b.is_empty()) {
        (true, true) => 0.0,
        (true, false) | (false, true) => f64::INFINITY,
        _ => directed(a, b).max(directed(b, a)),
    }
}
