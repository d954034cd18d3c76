use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;
use crate::rng::rng_from_seed;
use crate::sets::SolutionSet;
use crate::utility::UtilityFunction;
use crate::value::{simplex_grid, WeightVector, SUM_TOLERANCE};

/// A distribution over utility functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UtilityPrior {
    /// Linear utilities with weights uniform on the simplex, estimated from
    /// `samples` seeded draws.
    UniformLinear { dim: usize, samples: usize, seed: u64 },
    /// Linear utilities on the regular simplex lattice, equally weighted.
    LinearGrid { dim: usize, resolution: usize },
    /// A finite list of utilities with probabilities.
    Explicit { utilities: Vec<(UtilityFunction, f64)> },
}

/// Utilities with the probability mass assigned to each.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilitySample {
    pub utilities: Vec<UtilityFunction>,
    pub weights: Vec<f64>,
}

impl UtilityPrior {
    pub fn uniform_linear(dim: usize, samples: usize, seed: u64) -> Self {
        Self::UniformLinear { dim, samples, seed }
    }

    /// Draws (or enumerates) the utilities. Deterministic for a given prior.
    pub fn materialize(&self) -> Result<UtilitySample> {
        match self {
            Self::UniformLinear { dim, samples, seed } => {
                if *samples == 0 || *dim == 0 {
                    return Err(Error::Contract("a prior needs at least one sample".into()));
                }
                let mut rng = rng_from_seed(*seed);
                let utilities = (0..*samples)
                    .map(|_| {
                        // normalised exponentials are uniform on the simplex
                        let e: Vec<f64> = (0..*dim).map(|_| Exp1.sample(&mut rng)).collect();
                        let total: f64 = e.iter().sum();
                        let mut w: Vec<f64> = e.iter().map(|x| x / total).collect();
                        let head: f64 = w[..dim - 1].iter().sum();
                        w[dim - 1] = (1.0 - head).max(0.0);
                        UtilityFunction::Linear(WeightVector::new(w).expect("normalised weights"))
                    })
                    .collect();
                Ok(UtilitySample { utilities, weights: vec![1.0 / *samples as f64; *samples] })
            }
            Self::LinearGrid { dim, resolution } => {
                let grid = simplex_grid(*dim, *resolution);
                if grid.is_empty() {
                    return Err(Error::Contract("empty weight grid".into()));
                }
                let n = grid.len();
                Ok(UtilitySample {
                    utilities: grid.into_iter().map(UtilityFunction::Linear).collect(),
                    weights: vec![1.0 / n as f64; n],
                })
            }
            Self::Explicit { utilities } => {
                if utilities.is_empty() {
                    return Err(Error::Contract("explicit prior is empty".into()));
                }
                let total: f64 = utilities.iter().map(|(_, p)| p).sum();
                if utilities.iter().any(|(_, p)| !p.is_finite() || *p < 0.0)
                    || (total - 1.0).abs() > SUM_TOLERANCE
                {
                    return Err(Error::Domain(format!("prior probabilities sum to {total}")));
                }
                Ok(UtilitySample {
                    utilities: utilities.iter().map(|(u, _)| u.clone()).collect(),
                    weights: utilities.iter().map(|(_, p)| *p).collect(),
                })
            }
        }
    }

    /// Number of utilities the prior materialises to.
    pub fn sample_count(&self) -> usize {
        match self {
            Self::UniformLinear { samples, .. } => *samples,
            Self::LinearGrid { dim, resolution } => simplex_grid(*dim, *resolution).len(),
            Self::Explicit { utilities } => utilities.len(),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Self::UniformLinear { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}

fn best_utility(set: &SolutionSet, u: &UtilityFunction) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for v in set.values() {
        best = best.max(u.eval(v)?);
    }
    Ok(best)
}

/// Expected utility metric on an already drawn sample of utilities.
pub fn eum_with(set: &SolutionSet, sample: &UtilitySample) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::Contract("expected utility of an empty set".into()));
    }
    let terms = sample
        .utilities
        .iter()
        .zip(&sample.weights)
        .map(|(u, w)| Ok(w * best_utility(set, u)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&terms))
}

/// `E_{u ~ prior}[ max_{v in set} u(v) ]`.
pub fn expected_utility_metric(set: &SolutionSet, prior: &UtilityPrior) -> Result<f64> {
    eum_with(set, &prior.materialize()?)
}

/// Maximum utility loss on an already drawn sample of utilities.
pub fn mul_with(set: &SolutionSet, optimal: &SolutionSet, sample: &UtilitySample) -> Result<f64> {
    if set.is_empty() || optimal.is_empty() {
        return Err(Error::Contract("maximum utility loss needs two non-empty sets".into()));
    }
    let mut worst = f64::NEG_INFINITY;
    for u in &sample.utilities {
        worst = worst.max(best_utility(optimal, u)? - best_utility(set, u)?);
    }
    Ok(worst)
}

/// `max_u ( max_{v* in optimal} u(v*) − max_{v in set} u(v) )` over the
/// utilities of `family`.
pub fn maximum_utility_loss(set: &SolutionSet, optimal: &SolutionSet, family: &UtilityPrior) -> Result<f64> {
    mul_with(set, optimal, &family.materialize()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(rows: &[&[f64]]) -> SolutionSet {
        SolutionSet::from_rows(rows.iter().copied()).unwrap()
    }

    #[test]
    fn eum_constant_vector() {
        let prior = UtilityPrior::uniform_linear(2, 1000, 4);
        let eum = expected_utility_metric(&set(&[&[1.0, 1.0]]), &prior).unwrap();
        assert!((eum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eum_ignores_dominated_additions() {
        let prior = UtilityPrior::uniform_linear(2, 500, 9);
        let s = set(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let grown = set(&[&[1.0, 0.0], &[0.0, 1.0], &[0.5, 0.0]]);
        assert_eq!(
            expected_utility_metric(&s, &prior).unwrap(),
            expected_utility_metric(&grown, &prior).unwrap()
        );
    }

    #[test]
    fn mul_examples() {
        let opt = set(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let grid = UtilityPrior::LinearGrid { dim: 2, resolution: 200 };
        assert_eq!(maximum_utility_loss(&opt, &opt, &grid).unwrap(), 0.0);
        assert_eq!(maximum_utility_loss(&set(&[&[1.0, 0.0]]), &opt, &grid).unwrap(), 1.0);
    }

    #[test]
    fn explicit_prior() {
        let u1: UtilityFunction = "mul obj0 obj1".parse().unwrap();
        let u2: UtilityFunction = "dot [1,0]".parse().unwrap();
        let prior = UtilityPrior::Explicit { utilities: vec![(u1, 0.5), (u2, 0.5)] };
        // product: max(2, 0) = 2, first objective: max(1, 3) = 3
        let eum = expected_utility_metric(&set(&[&[1.0, 2.0], &[3.0, 0.0]]), &prior).unwrap();
        assert_eq!(eum, 2.5);
        let bad = UtilityPrior::Explicit { utilities: vec![("dot [1,0]".parse().unwrap(), 0.4)] };
        assert!(bad.materialize().is_err());
    }

    #[test]
    fn prior_serde() {
        let p = UtilityPrior::uniform_linear(2, 10, 3);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"kind":"uniform_linear","dim":2,"samples":10,"seed":3}"#);
        assert_eq!(serde_json::from_str::<UtilityPrior>(&json).unwrap(), p);
    }
}
