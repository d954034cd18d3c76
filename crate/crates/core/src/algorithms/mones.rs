//! Multi-objective natural evolution strategies.
//!
//! MONES is the NES loop of [`super::nes`] with a set-based fitness: each
//! candidate's mean return is scored by its non-dominance rank (0 for the
//! first front, −1 for the next, …) plus its crowding distance in `[0, 1]`
//! within that front. Rank always outweighs crowding, so the indicator
//! pushes the population towards the front and spreads it along it.

use crate::env::Environment;
use crate::error::Result;
use crate::rng::SimRng;
use crate::sets::SolutionSet;
use crate::value::ValueVector;

use super::nes::{evolve, initial_distribution, EvolutionConfig, SearchDistribution};

fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return false;
        }
        strict |= x > y;
    }
    strict
}

/// Peeling ranks: 0 for points no other point dominates, −1 once those are
/// removed, and so on. Identical points share a rank.
pub fn nondominated_rank(points: &[ValueVector]) -> Vec<i64> {
    let n = points.len();
    let mut rank = vec![i64::MIN; n];
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut level = 0;
    while !remaining.is_empty() {
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| {
                !remaining
                    .iter()
                    .any(|&j| dominates(points[j].as_slice(), points[i].as_slice()))
            })
            .collect();
        for &i in &front {
            rank[i] = level;
        }
        remaining.retain(|i| rank[*i] == i64::MIN);
        level -= 1;
    }
    rank
}

/// Crowding distance of the points of one front, each in `[0, 1]`.
///
/// Per objective, the extreme points get 1 and every other point gets the
/// gap between its sorted neighbours divided by twice the objective's
/// range; objectives with zero range contribute 0. The per-point value is
/// the mean over objectives. A lone point counts as extreme, and points
/// that repeat another point's value vector get 0.
#[allow(clippy::needless_range_loop)]
pub fn crowding_distance(points: &[ValueVector]) -> Vec<f64> {
    let n = points.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![1.0],
        _ => {}
    }
    let dim = points[0].dim();
    let mut total = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    for j in 0..dim {
        order.sort_by(|&a, &b| points[a][j].total_cmp(&points[b][j]));
        let lo = points[order[0]][j];
        let hi = points[order[n - 1]][j];
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for (pos, &i) in order.iter().enumerate() {
            let x = points[i][j];
            total[i] += if x == lo || x == hi {
                1.0
            } else {
                (points[order[pos + 1]][j] - points[order[pos - 1]][j]) / (2.0 * range)
            };
        }
    }
    let mut crowding: Vec<f64> = total.into_iter().map(|t| t / dim as f64).collect();
    for i in 0..n {
        if (0..n).any(|k| k != i && points[k] == points[i]) {
            crowding[i] = 0.0;
        }
    }
    crowding
}

/// Rank plus within-rank crowding distance.
pub fn mones_indicator(points: &[ValueVector]) -> Vec<f64> {
    let ranks = nondominated_rank(points);
    let mut indicator: Vec<f64> = ranks.iter().map(|&r| r as f64).collect();
    let mut levels: Vec<i64> = ranks.clone();
    levels.sort_unstable();
    levels.dedup();
    for level in levels {
        let members: Vec<usize> = (0..points.len()).filter(|&i| ranks[i] == level).collect();
        let class: Vec<ValueVector> = members.iter().map(|&i| points[i].clone()).collect();
        for (&i, c) in members.iter().zip(crowding_distance(&class)) {
            indicator[i] += c;
        }
    }
    indicator
}

/// Mean returns of every candidate, one set per iteration (policy id =
/// index in the population).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MonesArchive {
    pub iterations: Vec<SolutionSet>,
}

impl MonesArchive {
    pub fn last(&self) -> Option<&SolutionSet> {
        self.iterations.last()
    }
}

/// Trains a MONES search distribution on `env`.
pub fn mones_train<E>(
    env: &mut E,
    config: &EvolutionConfig,
    rng: &mut SimRng,
) -> Result<(SearchDistribution, MonesArchive)>
where
    E: Environment + ?Sized,
{
    let mut dist = initial_distribution(env, config);
    let generations = evolve(env, config, &mut dist, rng, |returns| Ok(mones_indicator(returns)))?;
    let archive = MonesArchive { iterations: generations.into_iter().map(|g| g.returns).collect() };
    Ok((dist, archive))
}
