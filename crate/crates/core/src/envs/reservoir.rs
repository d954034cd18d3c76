//! A single water reservoir controlled by a dam.
//!
//! The state is the stored volume. Each step the controller requests a
//! release; the dam can release at most what it holds, then a random
//! inflow arrives and anything above capacity spills. Two objectives, both
//! penalties (rewards are never positive):
//!
//! * flooding: `−max(storage − flood_threshold, 0) − overflow`
//! * water demand: `−max(demand − release, 0)`
//!
//! Mean inflow is below the demand, so meeting future demand requires
//! keeping water back, which raises the flooding exposure.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::env::{Action, Environment, Space, Step};
use crate::error::{Error, Result};
use crate::rng::SimRng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaterReservoirConfig {
    pub capacity: f64,
    pub flood_threshold: f64,
    pub demand: f64,
    pub inflow_mean: f64,
    pub inflow_std: f64,
    pub initial_min: f64,
    pub initial_max: f64,
    pub horizon: usize,
    pub max_release: f64,
}

impl Default for WaterReservoirConfig {
    fn default() -> Self {
        Self {
            capacity: 100.0,
            flood_threshold: 50.0,
            demand: 10.0,
            inflow_mean: 8.0,
            inflow_std: 2.0,
            initial_min: 20.0,
            initial_max: 80.0,
            horizon: 100,
            max_release: 100.0,
        }
    }
}

impl WaterReservoirConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.capacity,
            self.flood_threshold,
            self.demand,
            self.inflow_mean,
            self.inflow_std,
            self.initial_min,
            self.initial_max,
            self.max_release,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite || self.capacity <= 0.0 || self.inflow_std < 0.0 || self.max_release <= 0.0 {
            return Err(Error::Contract("reservoir constants must be finite and positive".into()));
        }
        if !(0.0..=self.capacity).contains(&self.flood_threshold) {
            return Err(Error::Contract("flood threshold must lie within capacity".into()));
        }
        if !(0.0 <= self.initial_min && self.initial_min <= self.initial_max && self.initial_max <= self.capacity) {
            return Err(Error::Contract("initial storage range must lie within capacity".into()));
        }
        if self.inflow_mean >= self.demand {
            return Err(Error::Contract("mean inflow must be below the demand".into()));
        }
        if self.horizon == 0 {
            return Err(Error::Contract("horizon must be positive".into()));
        }
        Ok(())
    }
}

/// Everything that happened in one reservoir step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirTransition {
    pub storage: f64,
    pub release: f64,
    pub inflow: f64,
    pub overflow: f64,
    /// `[flooding, water demand]`
    pub reward: [f64; 2],
}

#[derive(Debug, Clone)]
pub struct Reservoir {
    config: WaterReservoirConfig,
    inflow: Normal<f64>,
    storage: f64,
    steps: usize,
    done: bool,
}

impl Reservoir {
    pub fn new(config: WaterReservoirConfig) -> Result<Self> {
        config.validate()?;
        let inflow = Normal::new(config.inflow_mean, config.inflow_std)
            .map_err(|e| Error::Contract(e.to_string()))?;
        Ok(Self { config, inflow, storage: 0.0, steps: 0, done: true })
    }

    pub fn config(&self) -> &WaterReservoirConfig {
        &self.config
    }

    pub fn storage(&self) -> f64 {
        self.storage
    }

    /// Inflow drawn from the normal law and truncated at zero.
    pub fn sample_inflow(&self, rng: &mut SimRng) -> f64 {
        self.inflow.sample(rng).max(0.0)
    }

    /// The dynamics for a given inflow.
    pub fn transition_with_inflow(&self, storage: f64, requested_release: f64, inflow: f64) -> Result<ReservoirTransition> {
        let c = &self.config;
        if !(0.0..=c.capacity).contains(&storage) {
            return Err(Error::Domain(format!("storage {storage} outside [0, {}]", c.capacity)));
        }
        if !requested_release.is_finite() || !inflow.is_finite() || inflow < 0.0 {
            return Err(Error::Domain("release and inflow must be finite, inflow nonnegative".into()));
        }
        let release = requested_release.clamp(0.0, storage);
        let held = storage - release;
        let overflow = (held + inflow - c.capacity).max(0.0);
        let next = (held + inflow).min(c.capacity);
        let flooding = -(next - c.flood_threshold).max(0.0) - overflow;
        let shortfall = -(c.demand - release).max(0.0);
        Ok(ReservoirTransition { storage: next, release, inflow, overflow, reward: [flooding, shortfall] })
    }

    /// One step of the dynamics with a freshly sampled inflow.
    pub fn reservoir_step(&self, storage: f64, requested_release: f64, rng: &mut SimRng) -> Result<ReservoirTransition> {
        let inflow = self.sample_inflow(rng);
        self.transition_with_inflow(storage, requested_release, inflow)
    }

    /// Advances the running episode; also reports the full transition.
    pub fn step_detailed(&mut self, requested_release: f64, rng: &mut SimRng) -> Result<(ReservoirTransition, bool)> {
        if self.done {
            return Err(Error::StepAfterTerminal);
        }
        let t = self.reservoir_step(self.storage, requested_release, rng)?;
        self.storage = t.storage;
        self.steps += 1;
        self.done = self.steps >= self.config.horizon;
        Ok((t, self.done))
    }
}

impl Environment for Reservoir {
    fn num_objectives(&self) -> usize {
        2
    }

    fn horizon(&self) -> usize {
        self.config.horizon
    }

    fn observation_space(&self) -> Space {
        Space::Box { low: vec![0.0], high: vec![self.config.capacity] }
    }

    fn action_space(&self) -> Space {
        Space::Box { low: vec![0.0], high: vec![self.config.max_release] }
    }

    fn reset(&mut self, rng: &mut SimRng) -> Vec<f64> {
        self.storage = rng.random_range(self.config.initial_min..=self.config.initial_max);
        self.steps = 0;
        self.done = false;
        vec![self.storage]
    }

    fn step(&mut self, action: &Action, rng: &mut SimRng) -> Result<Step> {
        let release = match action {
            Action::Continuous(x) if x.len() == 1 => x[0],
            other => return Err(Error::Contract(format!("invalid reservoir action {other:?}"))),
        };
        if !(0.0..=self.config.max_release).contains(&release) {
            return Err(Error::Contract(format!("release {release} outside [0, {}]", self.config.max_release)));
        }
        let (t, terminal) = self.step_detailed(release, rng)?;
        Ok(Step { observation: vec![t.storage], reward: t.reward.to_vec(), terminal })
    }
}
