//! Separable natural evolution strategies.
//!
//! The search distribution holds one independent Gaussian per network
//! weight. Each iteration samples a population `θ_k = μ + σ ⊙ s_k`,
//! scores it, replaces the scores by centred ranks `u_k ∈ [-½, ½]` and
//! takes the natural-gradient step
//!
//! ```text
//! μ      ← μ + η_μ · σ ⊙ Σ_k u_k s_k
//! log σ  ← log σ + η_σ · Σ_k u_k (s_k² − 1) / 2
//! ```
//!
//! which is the ordinary score-function gradient premultiplied by the
//! inverse Fisher information of the factorised Gaussian.

use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::env::Environment;
use crate::error::{Error, Result};
use crate::eval::estimate_mean_return;
use crate::indicators::UtilityPrior;
use crate::rng::{seed_derive, stream, SimRng};
use crate::sets::SolutionSet;
use crate::utility::UtilityFunction;
use crate::value::ValueVector;

use super::network::{PolicyNetwork, Topology, HIDDEN_UNITS};

/// Settings shared by MONES and NES.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionConfig {
    pub iterations: usize,
    pub population: usize,
    pub evals_per_policy: usize,
    pub mean_learning_rate: f64,
    pub log_std_learning_rate: f64,
    pub initial_std: f64,
    pub hidden_units: usize,
    /// Discount used when evaluating returns.
    pub gamma: f64,
    pub seed: u64,
}

/// MONES uses the same settings as NES.
pub type MonesConfig = EvolutionConfig;

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            iterations: 30,
            population: 50,
            evals_per_policy: 10,
            mean_learning_rate: 0.1,
            log_std_learning_rate: 0.05,
            initial_std: 0.05,
            hidden_units: HIDDEN_UNITS,
            gamma: 1.0,
            seed: 0,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population == 0 || self.evals_per_policy == 0 || self.hidden_units == 0 {
            return Err(Error::Contract("population, evaluations and hidden units must be at least 1".into()));
        }
        let rates = [self.mean_learning_rate, self.log_std_learning_rate, self.initial_std, self.gamma];
        if rates.iter().any(|x| !x.is_finite()) || self.initial_std <= 0.0 {
            return Err(Error::Contract("learning rates and initial std must be finite, std positive".into()));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::Domain(format!("discount {} outside [0, 1]", self.gamma)));
        }
        Ok(())
    }
}

/// Independent Gaussians over the parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchDistribution {
    pub means: Vec<f64>,
    pub log_stds: Vec<f64>,
}

impl SearchDistribution {
    pub fn new(dim: usize, initial_std: f64) -> Self {
        Self { means: vec![0.0; dim], log_stds: vec![initial_std.ln(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.means.len()
    }

    pub fn stds(&self) -> Vec<f64> {
        self.log_stds.iter().map(|l| l.exp()).collect()
    }

    /// Standard-normal noise for one candidate.
    pub fn sample_noise(&self, rng: &mut SimRng) -> Vec<f64> {
        (0..self.dim()).map(|_| StandardNormal.sample(rng)).collect()
    }

    /// `μ + σ ⊙ s`
    pub fn candidate(&self, noise: &[f64]) -> Vec<f64> {
        self.means
            .iter()
            .zip(&self.log_stds)
            .zip(noise)
            .map(|((m, l), s)| m + l.exp() * s)
            .collect()
    }

    /// Natural-gradient step from noises and their shaped utilities.
    pub fn update(&mut self, noises: &[Vec<f64>], utilities: &[f64], mean_rate: f64, log_std_rate: f64) {
        for j in 0..self.dim() {
            let mut g_mean = 0.0;
            let mut g_log_std = 0.0;
            for (s, u) in noises.iter().zip(utilities) {
                g_mean += u * s[j];
                g_log_std += u * (s[j] * s[j] - 1.0);
            }
            let sigma = self.log_stds[j].exp();
            self.means[j] += mean_rate * sigma * g_mean;
            self.log_stds[j] += log_std_rate * 0.5 * g_log_std;
        }
    }
}

/// Centred ranks in `[-½, ½]`; ties share the mean of their ranks.
pub fn centered_ranks(fitness: &[f64]) -> Vec<f64> {
    let n = fitness.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && fitness[order[j + 1]] == fitness[order[i]] {
            j += 1;
        }
        let shared = (i + j) as f64 / 2.0;
        for &k in &order[i..=j] {
            ranks[k] = shared / (n - 1) as f64 - 0.5;
        }
        i = j + 1;
    }
    ranks
}

/// The result of one evolution iteration.
pub(crate) struct Generation {
    pub returns: SolutionSet,
    pub fitness: Vec<f64>,
}

/// The policy network for `env` with the given parameters.
pub fn network_for<E: Environment + ?Sized>(env: &E, hidden: usize, params: Vec<f64>) -> Result<PolicyNetwork> {
    let (o, a) = (env.observation_space(), env.action_space());
    PolicyNetwork::new(Topology::for_spaces(&o, &a, hidden), params, &o, &a)
}

pub(crate) fn initial_distribution<E: Environment + ?Sized>(env: &E, config: &EvolutionConfig) -> SearchDistribution {
    let t = Topology::for_spaces(&env.observation_space(), &env.action_space(), config.hidden_units);
    SearchDistribution::new(t.param_count(), config.initial_std)
}

/// Runs the shared evolution loop. `score` maps the population's mean
/// returns to one fitness value per candidate (higher is better).
pub(crate) fn evolve<E, F>(
    env: &mut E,
    config: &EvolutionConfig,
    dist: &mut SearchDistribution,
    rng: &mut SimRng,
    mut score: F,
) -> Result<Vec<Generation>>
where
    E: Environment + ?Sized,
    F: FnMut(&[ValueVector]) -> Result<Vec<f64>>,
{
    config.validate()?;
    let base = rng.next_u64();
    let mut generations = Vec::with_capacity(config.iterations);
    for iteration in 0..config.iterations {
        let iteration_seed = seed_derive(base, iteration as u64);
        let mut noise_rng = stream(iteration_seed, 0);
        let noises: Vec<Vec<f64>> = (0..config.population).map(|_| dist.sample_noise(&mut noise_rng)).collect();
        let mut returns = Vec::with_capacity(config.population);
        // every candidate of an iteration sees the same episodes
        for s in &noises {
            let policy = network_for(env, config.hidden_units, dist.candidate(s))?;
            let mut eval_rng = stream(iteration_seed, 1);
            returns.push(estimate_mean_return(env, &policy, config.gamma, config.evals_per_policy, &mut eval_rng)?);
        }
        let fitness = score(&returns)?;
        if let Some(k) = fitness.iter().position(|f| !f.is_finite()) {
            return Err(Error::Numeric(format!(
                "non-finite fitness {} for candidate {k} at iteration {iteration} (mean return {})",
                fitness[k], returns[k]
            )));
        }
        let utilities = centered_ranks(&fitness);
        dist.update(&noises, &utilities, config.mean_learning_rate, config.log_std_learning_rate);
        generations.push(Generation { returns: SolutionSet::from_values(returns)?, fitness });
    }
    Ok(generations)
}

/// Per-iteration record of a single-objective NES run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NesHistory {
    /// Mean returns of the population, one set per iteration.
    pub returns: Vec<SolutionSet>,
    /// Utility of each candidate's mean return, one row per iteration.
    pub fitness: Vec<Vec<f64>>,
}

/// NES on the utility of the mean return. Returns the network at the
/// final distribution mean and the per-iteration history.
pub fn nes_train<E>(
    env: &mut E,
    u: &UtilityFunction,
    config: &EvolutionConfig,
    rng: &mut SimRng,
) -> Result<(PolicyNetwork, NesHistory)>
where
    E: Environment + ?Sized,
{
    let mut dist = initial_distribution(env, config);
    let generations = evolve(env, config, &mut dist, rng, |returns| {
        returns.iter().map(|r| u.eval(r)).collect()
    })?;
    let mut history = NesHistory::default();
    for g in generations {
        history.returns.push(g.returns);
        history.fitness.push(g.fitness);
    }
    Ok((network_for(env, config.hidden_units, dist.means)?, history))
}

/// Runs one NES per utility drawn from `prior` and collects the mean
/// returns of the final policies (unpruned). Run `i` uses the utility
/// `i` of the prior and the stream `seed_derive(base, i)`.
pub fn outer_loop_nes<E>(
    env: &mut E,
    prior: &UtilityPrior,
    config: &EvolutionConfig,
    rng: &mut SimRng,
) -> Result<SolutionSet>
where
    E: Environment + ?Sized,
{
    let sample = prior.materialize()?;
    let base = rng.next_u64();
    let mut out = SolutionSet::new();
    for (i, u) in sample.utilities.iter().enumerate() {
        let value = outer_loop_run(env, u, config, seed_derive(base, i as u64))
            .map_err(|e| Error::Run { index: i, source: Box::new(e) })?;
        out.push(i as u64, value)?;
    }
    Ok(out)
}

/// A single outer-loop run: trains on `u` and evaluates the final policy.
pub fn outer_loop_run<E>(env: &mut E, u: &UtilityFunction, config: &EvolutionConfig, seed: u64) -> Result<ValueVector>
where
    E: Environment + ?Sized,
{
    let (policy, _) = nes_train(env, u, config, &mut stream(seed, 0))?;
    estimate_mean_return(env, &policy, config.gamma, config.evals_per_policy, &mut stream(seed, 1))
}
