//! The episodic simulator interface and policies.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rng::SimRng;

/// An action or observation space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    /// `n` discrete choices, `0..n`.
    Discrete(usize),
    /// An axis-aligned box of reals.
    Box { low: Vec<f64>, high: Vec<f64> },
}

impl Space {
    /// Length of a flat vector representation of an element.
    pub fn flat_dim(&self) -> usize {
        match self {
            Space::Discrete(_) => 1,
            Space::Box { low, .. } => low.len(),
        }
    }

    pub fn contains(&self, action: &Action) -> bool {
        match (self, action) {
            (Space::Discrete(n), Action::Discrete(a)) => a < n,
            (Space::Box { low, high }, Action::Continuous(x)) => {
                x.len() == low.len()
                    && x.iter()
                        .zip(low.iter().zip(high))
                        .all(|(v, (lo, hi))| v.is_finite() && lo <= v && v <= hi)
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    Discrete(usize),
    Continuous(Vec<f64>),
}

/// Outcome of one environment transition.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub observation: Vec<f64>,
    /// One component per objective.
    pub reward: Vec<f64>,
    pub terminal: bool,
}

/// An episodic environment with a vector-valued reward.
///
/// Implementations end every episode after at most [`Environment::horizon`]
/// steps and return [`crate::Error::StepAfterTerminal`] when stepped past
/// the end. Instances are single-threaded; clone one per worker.
pub trait Environment {
    fn num_objectives(&self) -> usize;

    /// Maximum number of steps per episode.
    fn horizon(&self) -> usize;

    fn observation_space(&self) -> Space;

    fn action_space(&self) -> Space;

    /// Starts a new episode and returns the first observation.
    fn reset(&mut self, rng: &mut SimRng) -> Vec<f64>;

    fn step(&mut self, action: &Action, rng: &mut SimRng) -> Result<Step>;
}

/// A stationary deterministic policy.
pub trait Policy {
    fn act(&self, observation: &[f64]) -> Action;
}

impl<F> Policy for F
where
    F: Fn(&[f64]) -> Action,
{
    fn act(&self, observation: &[f64]) -> Action {
        self(observation)
    }
}
