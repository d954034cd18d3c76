//! Monte Carlo policy evaluation under the SER and ESR criteria.
//!
//! Episode `i` of a batch always runs on the random stream
//! `seed_derive(base, i)`, where `base` is the next `u64` drawn from the
//! caller's generator. Batches are therefore reproducible and independent of
//! how episodes are scheduled.

use rand::RngCore;

use crate::env::{Environment, Policy};
use crate::error::{Error, Result};
use crate::numeric::{columnwise_mean, pairwise_mean};
use crate::rng::{stream, SimRng};
use crate::utility::UtilityFunction;
use crate::value::ValueVector;

/// The discounted return of one episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeReturn {
    pub components: ValueVector,
    pub steps: usize,
}

/// `Σ_k γ^k r_{k+1}` accumulated front to back.
pub fn discounted_return(rewards: &[Vec<f64>], gamma: f64, dim: usize) -> Vec<f64> {
    let mut total = vec![0.0; dim];
    let mut discount = 1.0;
    for r in rewards {
        for (t, x) in total.iter_mut().zip(r) {
            *t += discount * x;
        }
        discount *= gamma;
    }
    total
}

/// Runs one episode and returns its discounted reward sum.
pub fn rollout<E, P>(env: &mut E, policy: &P, gamma: f64, rng: &mut SimRng) -> Result<EpisodeReturn>
where
    E: Environment + ?Sized,
    P: Policy + ?Sized,
{
    let dim = env.num_objectives();
    let horizon = env.horizon();
    let actions = env.action_space();
    let mut observation = env.reset(rng);
    let mut total = vec![0.0; dim];
    let mut discount = 1.0;
    let mut steps = 0;
    while steps < horizon {
        let action = policy.act(&observation);
        if !actions.contains(&action) {
            return Err(Error::Contract(format!("action {action:?} outside {actions:?}")));
        }
        let step = env.step(&action, rng)?;
        if step.reward.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: step.reward.len() });
        }
        for (t, x) in total.iter_mut().zip(&step.reward) {
            *t += discount * x;
        }
        discount *= gamma;
        steps += 1;
        if step.terminal {
            break;
        }
        observation = step.observation;
    }
    Ok(EpisodeReturn { components: ValueVector::new(total)?, steps })
}

/// The returns of a batch of independent episodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnBatch {
    pub returns: Vec<EpisodeReturn>,
}

impl ReturnBatch {
    pub fn len(&self) -> usize {
        self.returns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.returns.is_empty()
    }

    /// Component-wise mean return.
    pub fn mean(&self) -> Result<ValueVector> {
        let rows: Vec<Vec<f64>> = self
            .returns
            .iter()
            .map(|r| r.components.as_slice().to_vec())
            .collect();
        ValueVector::new(columnwise_mean(&rows))
    }

    /// Scalarised expected return: `u(E[return])`.
    pub fn ser(&self, u: &UtilityFunction) -> Result<f64> {
        u.eval(&self.mean()?)
    }

    /// Expected scalarised return: `E[u(return)]`.
    pub fn esr(&self, u: &UtilityFunction) -> Result<f64> {
        let per_episode = self
            .returns
            .iter()
            .map(|r| u.eval(&r.components))
            .collect::<Result<Vec<f64>>>()?;
        let value = pairwise_mean(&per_episode);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Numeric("expected scalarised return is not finite".into()))
        }
    }
}

/// Runs `n_episodes` episodes on per-episode streams forked from `rng`.
pub fn sample_returns<E, P>(
    env: &mut E,
    policy: &P,
    gamma: f64,
    n_episodes: usize,
    rng: &mut SimRng,
) -> Result<ReturnBatch>
where
    E: Environment + ?Sized,
    P: Policy + ?Sized,
{
    if n_episodes == 0 {
        return Err(Error::Contract("at least one episode is required".into()));
    }
    let base = rng.next_u64();
    let returns = (0..n_episodes as u64)
        .map(|i| rollout(env, policy, gamma, &mut stream(base, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReturnBatch { returns })
}

/// Monte Carlo estimate of the expected discounted return vector.
pub fn estimate_mean_return<E, P>(
    env: &mut E,
    policy: &P,
    gamma: f64,
    n_episodes: usize,
    rng: &mut SimRng,
) -> Result<ValueVector>
where
    E: Environment + ?Sized,
    P: Policy + ?Sized,
{
    sample_returns(env, policy, gamma, n_episodes, rng)?.mean()
}

/// SER value of a policy: the utility of the mean return.
pub fn ser_value<E, P>(
    env: &mut E,
    policy: &P,
    u: &UtilityFunction,
    gamma: f64,
    n_episodes: usize,
    rng: &mut SimRng,
) -> Result<f64>
where
    E: Environment + ?Sized,
    P: Policy + ?Sized,
{
    sample_returns(env, policy, gamma, n_episodes, rng)?.ser(u)
}

/// ESR value of a policy: the mean of per-episode utilities.
pub fn esr_value<E, P>(
    env: &mut E,
    policy: &P,
    u: &UtilityFunction,
    gamma: f64,
    n_episodes: usize,
    rng: &mut SimRng,
) -> Result<f64>
where
    E: Environment + ?Sized,
    P: Policy + ?Sized,
{
    sample_returns(env, policy, gamma, n_episodes, rng)?.esr(u)
}
