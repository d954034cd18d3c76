//! Small fixtures: a scripted deterministic episode and a coin flip.

use crate::env::{Action, Environment, Space, Step};
use crate::error::{Error, Result};
use crate::momdp::{MomdpModel, Outcome, TabularEnv};
use crate::rng::SimRng;

/// A single-action environment that emits a fixed reward sequence and
/// ends after the last one.
#[derive(Debug, Clone)]
pub struct ScriptedEnv {
    rewards: Vec<Vec<f64>>,
    dim: usize,
    cursor: usize,
}

impl ScriptedEnv {
    pub fn new(rewards: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rewards.first().map(Vec::len).ok_or_else(|| Error::Contract("empty script".into()))?;
        if rewards.iter().any(|r| r.len() != dim) {
            return Err(Error::Contract("script rewards differ in length".into()));
        }
        Ok(Self { cursor: rewards.len(), rewards, dim })
    }
}

impl Environment for ScriptedEnv {
    fn num_objectives(&self) -> usize {
        self.dim
    }

    fn horizon(&self) -> usize {
        self.rewards.len()
    }

    fn observation_space(&self) -> Space {
        Space::Discrete(self.rewards.len() + 1)
    }

    fn action_space(&self) -> Space {
        Space::Discrete(1)
    }

    fn reset(&mut self, _rng: &mut SimRng) -> Vec<f64> {
        self.cursor = 0;
        vec![0.0]
    }

    fn step(&mut self, _action: &Action, _rng: &mut SimRng) -> Result<Step> {
        let reward = self.rewards.get(self.cursor).cloned().ok_or(Error::StepAfterTerminal)?;
        self.cursor += 1;
        Ok(Step {
            observation: vec![self.cursor as f64],
            reward,
            terminal: self.cursor == self.rewards.len(),
        })
    }
}

/// One step, one action: reward `(2, 0)` or `(0, 2)` with equal probability.
///
/// Its expected return is `(1, 1)` while every realised return has a zero
/// component, which separates SER from ESR for product utilities.
pub fn coin_flip() -> TabularEnv {
    let outcomes = vec![
        vec![
            Outcome { next: 1, prob: 0.5, reward: vec![2.0, 0.0] },
            Outcome { next: 2, prob: 0.5, reward: vec![0.0, 2.0] },
        ],
        vec![Outcome { next: 1, prob: 1.0, reward: vec![0.0, 0.0] }],
        vec![Outcome { next: 2, prob: 1.0, reward: vec![0.0, 0.0] }],
    ];
    let model = MomdpModel::new(3, 1, 2, 1.0, outcomes, vec![1.0, 0.0, 0.0])
        .expect("coin flip model is well formed");
    TabularEnv::new(model, 1)
}
