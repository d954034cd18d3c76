//! Dominance relations, Lorenz ordering and pruning of finite candidate
//! sets into Pareto fronts and convex coverage sets.
//!
//! All comparisons are exact on the stored `f64` values. Tolerances belong
//! to the indicators that declare them.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::value::{simplex_grid, ValueVector, WeightVector, STANDARD_GRID_RESOLUTION, SUM_TOLERANCE};

/// Opaque handle of the policy that produced a value.
pub type PolicyId = u64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub policy_id: PolicyId,
    pub value: ValueVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PruningState {
    Raw,
    ParetoPruned,
    CcsPruned,
}

/// A finite collection of `(policy, value)` pairs of one dimensionality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSet {
    entries: Vec<Entry>,
    state: PruningState,
}

impl Default for SolutionSet {
    fn default() -> Self {
        Self::new()
    }
}

impl SolutionSet {
    pub fn new() -> Self {
        Self { entries: Vec::new(), state: PruningState::Raw }
    }

    /// Builds a raw set, numbering policies `0, 1, …` in iteration order.
    pub fn from_values<I>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = ValueVector>,
    {
        let mut set = Self::new();
        for (i, v) in values.into_iter().enumerate() {
            set.push(i as PolicyId, v)?;
        }
        Ok(set)
    }

    /// Like [`SolutionSet::from_values`] but from plain rows.
    pub fn from_rows<I, R>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = R>,
        R: AsRef<[f64]>,
    {
        Self::from_values(
            rows.into_iter()
                .map(|r| ValueVector::try_from(r.as_ref()))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn push(&mut self, policy_id: PolicyId, value: ValueVector) -> Result<()> {
        if let Some(d) = self.dim() {
            check_dims(d, value.dim())?;
        }
        self.entries.push(Entry { policy_id, value });
        self.state = PruningState::Raw;
        Ok(())
    }

    /// Number of objectives, `None` for an empty set.
    pub fn dim(&self) -> Option<usize> {
        self.entries.first().map(|e| e.value.dim())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn values(&self) -> impl Iterator<Item = &ValueVector> + '_ {
        self.entries.iter().map(|e| &e.value)
    }

    pub fn pruning_state(&self) -> PruningState {
        self.state
    }

    /// Union of two sets; keeps the entries of `self` first.
    pub fn union(&self, other: &SolutionSet) -> Result<SolutionSet> {
        let mut out = self.clone();
        for e in &other.entries {
            out.push(e.policy_id, e.value.clone())?;
        }
        Ok(out)
    }

    /// Whether the value multisets of both sets agree, ignoring order and ids.
    pub fn same_values(&self, other: &SolutionSet) -> bool {
        fn sorted(s: &SolutionSet) -> Vec<&ValueVector> {
            let mut v: Vec<&ValueVector> = s.values().collect();
            v.sort_by(|a, b| lex_cmp(a.as_slice(), b.as_slice()));
            v
        }
        self.len() == other.len() && sorted(self) == sorted(other)
    }

    fn with_entries(&self, entries: Vec<Entry>, state: PruningState) -> Self {
        Self { entries, state }
    }
}

fn check_pair(a: &ValueVector, b: &ValueVector) -> Result<()> {
    check_dims(a.dim(), b.dim())
}

fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return false;
        }
        if x > y {
            strict = true;
        }
    }
    strict
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// `a` is no worse than `b` in every objective and strictly better in one.
pub fn pareto_dominates(a: &ValueVector, b: &ValueVector) -> Result<bool> {
    check_pair(a, b)?;
    Ok(dominates_unchecked(a.as_slice(), b.as_slice()))
}

/// The maximal non-dominated subset of `set`.
///
/// Among value-identical entries only the first in insertion order is kept.
/// The surviving entries keep their relative order.
pub fn pareto_prune(set: &SolutionSet) -> SolutionSet {
    let keep = nondominated_indices(set.entries.iter().map(|e| e.value.as_slice()).collect());
    let entries = keep.into_iter().map(|i| set.entries[i].clone()).collect();
    set.with_entries(entries, PruningState::ParetoPruned)
}

/// Indices (ascending) of the first occurrence of every non-dominated row.
pub(crate) fn nondominated_indices(rows: Vec<&[f64]>) -> Vec<usize> {
    // A dominating row sorts lexicographically before the row it dominates,
    // so each candidate only needs to be checked against rows already kept.
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&i, &j| lex_cmp(rows[j], rows[i]));
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        let row = rows[i];
        let beaten = kept
            .iter()
            .any(|&k| rows[k] == row || dominates_unchecked(rows[k], row));
        if !beaten {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    kept
}

/// The inner product `w · v`.
pub fn linear_utility(w: &WeightVector, v: &ValueVector) -> Result<f64> {
    v.dot(w.as_slice())
}

/// Largest number of grid weights used to certify coverage-set members in
/// three or more objectives; beyond it only the mixture filter runs.
const MAX_CERTIFICATION_GRID: usize = 50_000;

/// The convex coverage set of `set`: a minimal subset that keeps, for every
/// weight vector, the maximum of the linear scalarisation.
///
/// Two objectives are handled exactly by an upper-hull scan. For three or
/// more, points that are the unique maximiser at some
/// weight of the simplex lattice with resolution 1/200 are certified
/// members; every other front point is dropped only if a mixture of two
/// kept points weakly dominates it. That rule never drops a needed vector
/// but may keep a few that are covered only by mixtures of three or more.
pub fn ccs_prune(set: &SolutionSet) -> SolutionSet {
    let keep: Vec<usize> = match set.dim() {
        None => Vec::new(),
        Some(2) => upper_hull_2d(set),
        Some(d) => {
            let front = nondominated_indices(set.entries.iter().map(|e| e.value.as_slice()).collect());
            let rows: Vec<&[f64]> = front.iter().map(|&i| set.entries[i].value.as_slice()).collect();
            ccs_filter_nd(&rows, d).into_iter().map(|k| front[k]).collect()
        }
    };
    let entries = keep.into_iter().map(|i| set.entries[i].clone()).collect();
    set.with_entries(entries, PruningState::CcsPruned)
}

/// Indices (ascending) of the vertices of the upper-right hull of a
/// two-objective set, from the highest point to the rightmost one.
fn upper_hull_2d(set: &SolutionSet) -> Vec<usize> {
    let pts: Vec<(f64, f64)> = set.values().map(|v| (v[0], v[1])).collect();
    let mut order: Vec<usize> = (0..pts.len()).collect();
    // left to right, higher first within a column, earliest copy first
    order.sort_by(|&i, &j| {
        pts[i].0.total_cmp(&pts[j].0).then(pts[j].1.total_cmp(&pts[i].1)).then(i.cmp(&j))
    });
    order.dedup_by(|later, earlier| pts[*later].0 == pts[*earlier].0);
    let mut hull: Vec<usize> = Vec::with_capacity(order.len());
    for i in order {
        while hull.len() >= 2 {
            let a = pts[hull[hull.len() - 2]];
            let b = pts[hull[hull.len() - 1]];
            let c = pts[i];
            let cross = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
            // keep strict right turns only; collinear middles are redundant
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    // the part left of the highest point is dominated by it
    let top = hull
        .iter()
        .enumerate()
        .fold(0, |best, (k, &i)| if pts[i].1 >= pts[hull[best]].1 { k } else { best });
    let mut keep = hull.split_off(top);
    keep.sort_unstable();
    keep
}

fn ccs_filter_nd(pts: &[&[f64]], dim: usize) -> Vec<usize> {
    let n = pts.len();
    let mut certified = vec![false; n];
    let grid_size = binomial(STANDARD_GRID_RESOLUTION + dim - 1, dim - 1);
    if grid_size <= MAX_CERTIFICATION_GRID {
        for w in simplex_grid(dim, STANDARD_GRID_RESOLUTION) {
            let mut best = f64::NEG_INFINITY;
            let mut arg = None;
            let mut unique = false;
            for (i, p) in pts.iter().enumerate() {
                let u: f64 = p.iter().zip(w.as_slice()).map(|(a, b)| a * b).sum();
                if u > best {
                    best = u;
                    arg = Some(i);
                    unique = true;
                } else if u == best {
                    unique = false;
                }
            }
            if let (Some(i), true) = (arg, unique) {
                certified[i] = true;
            }
        }
    }
    let mut alive = vec![true; n];
    for v in 0..n {
        if certified[v] {
            continue;
        }
        let others: Vec<usize> = (0..n).filter(|&k| k != v && alive[k]).collect();
        'search: for (x, &a) in others.iter().enumerate() {
            for &b in &others[x..] {
                if mixture_covers(pts[a], pts[b], pts[v]) {
                    alive[v] = false;
                    break 'search;
                }
            }
        }
    }
    (0..n).filter(|&i| alive[i]).collect()
}

/// Whether some `λ ∈ [0, 1]` gives `λ a + (1 − λ) b >= v` componentwise.
fn mixture_covers(a: &[f64], b: &[f64], v: &[f64]) -> bool {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for ((&ai, &bi), &vi) in a.iter().zip(b).zip(v) {
        // λ (ai − bi) >= vi − bi
        let slope = ai - bi;
        let need = vi - bi;
        if slope > 0.0 {
            lo = lo.max(need / slope);
        } else if slope < 0.0 {
            hi = hi.min(need / slope);
        } else if need > 0.0 {
            return false;
        }
        if lo > hi {
            return false;
        }
    }
    true
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Sorted-ascending cumulative sums of `v`.
pub fn lorenz_vector(v: &ValueVector) -> ValueVector {
    let mut sorted = v.as_slice().to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut acc = 0.0;
    let cumulative = sorted
        .into_iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect();
    ValueVector::new(cumulative).expect("cumulative sums of finite values are finite")
}

/// Pareto dominance between Lorenz vectors.
pub fn lorenz_dominates(a: &ValueVector, b: &ValueVector) -> Result<bool> {
    check_pair(a, b)?;
    pareto_dominates(&lorenz_vector(a), &lorenz_vector(b))
}

/// The value of a stochastic mixture of policies.
pub fn mixture_value(components: &[(ValueVector, f64)]) -> Result<ValueVector> {
    let Some((first, _)) = components.first() else {
        return Err(Error::Contract("empty mixture".into()));
    };
    let dim = first.dim();
    let mut total_p = 0.0;
    for (v, p) in components {
        check_dims(dim, v.dim())?;
        if !p.is_finite() || *p < 0.0 {
            return Err(Error::Domain(format!("invalid mixture probability {p}")));
        }
        total_p += p;
    }
    if (total_p - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::Domain(format!("mixture probabilities sum to {total_p}")));
    }
    let mut out = vec![0.0; dim];
    for (v, p) in components {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o += p * x;
        }
    }
    ValueVector::new(out)
}
