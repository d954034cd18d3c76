//! Finite tabular multi-objective MDPs.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::env::{Action, Environment, Space, Step};
use crate::error::{Error, Result};
use crate::rng::SimRng;
use crate::value::SUM_TOLERANCE;

/// One outcome of taking an action: successor, probability and reward.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub next: usize,
    pub prob: f64,
    pub reward: Vec<f64>,
}

/// A finite MOMDP `⟨S, A, T, γ, μ, R⟩` with `d`-dimensional rewards on
/// `(s, a, s')`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelDocument", into = "ModelDocument")]
pub struct MomdpModel {
    num_states: usize,
    num_actions: usize,
    num_objectives: usize,
    gamma: f64,
    /// Indexed by `s * num_actions + a`.
    outcomes: Vec<Vec<Outcome>>,
    initial: Vec<f64>,
}

impl MomdpModel {
    /// Validates and builds a model. `outcomes[s * num_actions + a]` lists
    /// the successors of `(s, a)`.
    pub fn new(
        num_states: usize,
        num_actions: usize,
        num_objectives: usize,
        gamma: f64,
        outcomes: Vec<Vec<Outcome>>,
        initial: Vec<f64>,
    ) -> Result<Self> {
        if num_states == 0 || num_actions == 0 {
            return Err(Error::Contract("a model needs at least one state and one action".into()));
        }
        if num_objectives < 2 {
            return Err(Error::Contract(format!(
                "a model needs at least 2 objectives, got {num_objectives}"
            )));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::Domain(format!("discount {gamma} outside [0, 1]")));
        }
        if outcomes.len() != num_states * num_actions {
            return Err(Error::Contract(format!(
                "expected {} state-action rows, got {}",
                num_states * num_actions,
                outcomes.len()
            )));
        }
        for (row, outs) in outcomes.iter().enumerate() {
            let (s, a) = (row / num_actions, row % num_actions);
            let mut total = 0.0;
            for o in outs {
                if o.next >= num_states {
                    return Err(Error::Contract(format!("({s}, {a}) leads to unknown state {}", o.next)));
                }
                if !o.prob.is_finite() || o.prob < 0.0 {
                    return Err(Error::Domain(format!("({s}, {a}) has probability {}", o.prob)));
                }
                if o.reward.len() != num_objectives {
                    return Err(Error::DimensionMismatch {
                        expected: num_objectives,
                        found: o.reward.len(),
                    });
                }
                if o.reward.iter().any(|r| !r.is_finite()) {
                    return Err(Error::Numeric(format!("({s}, {a}) has a non-finite reward")));
                }
                total += o.prob;
            }
            if (total - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::Domain(format!("transition row ({s}, {a}) sums to {total}")));
            }
        }
        if initial.len() != num_states {
            return Err(Error::DimensionMismatch { expected: num_states, found: initial.len() });
        }
        if initial.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Domain("initial distribution has invalid entries".into()));
        }
        let total: f64 = initial.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Domain(format!("initial distribution sums to {total}")));
        }
        Ok(Self { num_states, num_actions, num_objectives, gamma, outcomes, initial })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn num_objectives(&self) -> usize {
        self.num_objectives
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn outcomes(&self, state: usize, action: usize) -> &[Outcome] {
        &self.outcomes[state * self.num_actions + action]
    }

    /// The same model with every reward multiplied by `factor`.
    pub fn scale_rewards(&self, factor: f64) -> Result<Self> {
        let outcomes = self
            .outcomes
            .iter()
            .map(|row| {
                row.iter()
                    .map(|o| Outcome {
                        next: o.next,
                        prob: o.prob,
                        reward: o.reward.iter().map(|r| r * factor).collect(),
                    })
                    .collect()
            })
            .collect();
        Self::new(
            self.num_states,
            self.num_actions,
            self.num_objectives,
            self.gamma,
            outcomes,
            self.initial.clone(),
        )
    }

    /// A state is absorbing when every action loops back to it with
    /// probability one and zero reward.
    pub fn is_absorbing(&self, state: usize) -> bool {
        (0..self.num_actions).all(|a| {
            self.outcomes(state, a)
                .iter()
                .filter(|o| o.prob > 0.0)
                .all(|o| o.next == state && o.reward.iter().all(|r| *r == 0.0))
        })
    }

    /// A topological order of the non-absorbing states (every successor
    /// after its predecessor), or `None` when the positive-probability
    /// transition graph has a cycle outside the absorbing states.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let absorbing: Vec<bool> = (0..self.num_states).map(|s| self.is_absorbing(s)).collect();
        let mut indegree = vec![0usize; self.num_states];
        let succ: Vec<Vec<usize>> = (0..self.num_states)
            .map(|s| {
                if absorbing[s] {
                    return Vec::new();
                }
                let mut next: Vec<usize> = (0..self.num_actions)
                    .flat_map(|a| self.outcomes(s, a).iter())
                    .filter(|o| o.prob > 0.0 && !absorbing[o.next])
                    .map(|o| o.next)
                    .collect();
                next.sort_unstable();
                next.dedup();
                next
            })
            .collect();
        for next in &succ {
            for &t in next {
                indegree[t] += 1;
            }
        }
        let mut queue: Vec<usize> = (0..self.num_states)
            .filter(|&s| !absorbing[s] && indegree[s] == 0)
            .collect();
        let mut order = Vec::new();
        while let Some(s) = queue.pop() {
            order.push(s);
            for &t in &succ[s] {
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    queue.push(t);
                }
            }
        }
        let live = absorbing.iter().filter(|a| !**a).count();
        (order.len() == live).then_some(order)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serialisation cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.try_into()
    }
}

/// The on-disk form of a model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelDocument {
    pub num_states: usize,
    pub num_actions: usize,
    pub num_objectives: usize,
    pub gamma: f64,
    /// `[s, a, s', p]`
    pub transitions: Vec<(usize, usize, usize, f64)>,
    /// `[s, a, s', [r_1, …, r_d]]`; absent triples have zero reward.
    #[serde(default)]
    pub rewards: Vec<(usize, usize, usize, Vec<f64>)>,
    pub initial: Vec<f64>,
}

impl TryFrom<ModelDocument> for MomdpModel {
    type Error = Error;

    fn try_from(doc: ModelDocument) -> Result<Self> {
        let (ns, na, d) = (doc.num_states, doc.num_actions, doc.num_objectives);
        let mut outcomes: Vec<Vec<Outcome>> = vec![Vec::new(); ns * na];
        for (s, a, next, prob) in doc.transitions {
            if s >= ns || a >= na {
                return Err(Error::Contract(format!("transition from unknown ({s}, {a})")));
            }
            let row = &mut outcomes[s * na + a];
            if row.iter().any(|o| o.next == next) {
                return Err(Error::Contract(format!("duplicate transition ({s}, {a}, {next})")));
            }
            row.push(Outcome { next, prob, reward: vec![0.0; d] });
        }
        for (s, a, next, reward) in doc.rewards {
            let row = outcomes
                .get_mut(s * na + a)
                .filter(|_| s < ns && a < na)
                .ok_or_else(|| Error::Contract(format!("reward on unknown ({s}, {a})")))?;
            let o = row
                .iter_mut()
                .find(|o| o.next == next)
                .ok_or_else(|| Error::Contract(format!("reward on missing transition ({s}, {a}, {next})")))?;
            o.reward = reward;
        }
        MomdpModel::new(ns, na, d, doc.gamma, outcomes, doc.initial)
    }
}

impl From<MomdpModel> for ModelDocument {
    fn from(m: MomdpModel) -> Self {
        let mut transitions = Vec::new();
        let mut rewards = Vec::new();
        for s in 0..m.num_states {
            for a in 0..m.num_actions {
                for o in m.outcomes(s, a) {
                    transitions.push((s, a, o.next, o.prob));
                    if o.reward.iter().any(|r| *r != 0.0) {
                        rewards.push((s, a, o.next, o.reward.clone()));
                    }
                }
            }
        }
        ModelDocument {
            num_states: m.num_states,
            num_actions: m.num_actions,
            num_objectives: m.num_objectives,
            gamma: m.gamma,
            transitions,
            rewards,
            initial: m.initial,
        }
    }
}

/// Simulates a [`MomdpModel`] as an episodic environment.
///
/// Observations are `[state index]`. An episode ends on entering an
/// absorbing state or after `horizon` steps.
#[derive(Debug, Clone)]
pub struct TabularEnv {
    model: MomdpModel,
    horizon: usize,
    state: usize,
    steps: usize,
    done: bool,
}

impl TabularEnv {
    pub fn new(model: MomdpModel, horizon: usize) -> Self {
        Self { model, horizon, state: 0, steps: 0, done: true }
    }

    pub fn model(&self) -> &MomdpModel {
        &self.model
    }

    fn sample(weights: impl Iterator<Item = f64>, rng: &mut SimRng) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last = 0;
        for (i, p) in weights.enumerate() {
            if p > 0.0 {
                last = i;
            }
            acc += p;
            if u < acc {
                return i;
            }
        }
        last
    }
}

impl Environment for TabularEnv {
    fn num_objectives(&self) -> usize {
        self.model.num_objectives
    }

    fn horizon(&self) -> usize {
        self.horizon
    }

    fn observation_space(&self) -> Space {
        Space::Discrete(self.model.num_states)
    }

    fn action_space(&self) -> Space {
        Space::Discrete(self.model.num_actions)
    }

    fn reset(&mut self, rng: &mut SimRng) -> Vec<f64> {
        self.state = Self::sample(self.model.initial.iter().copied(), rng);
        self.steps = 0;
        self.done = self.model.is_absorbing(self.state) || self.horizon == 0;
        vec![self.state as f64]
    }

    fn step(&mut self, action: &Action, rng: &mut SimRng) -> Result<Step> {
        if self.done {
            return Err(Error::StepAfterTerminal);
        }
        let a = match action {
            Action::Discrete(a) if *a < self.model.num_actions => *a,
            other => return Err(Error::Contract(format!("invalid action {other:?}"))),
        };
        let outs = self.model.outcomes(self.state, a);
        let k = Self::sample(outs.iter().map(|o| o.prob), rng);
        let o = &outs[k];
        self.state = o.next;
        self.steps += 1;
        self.done = self.steps >= self.horizon || self.model.is_absorbing(self.state);
        Ok(Step { observation: vec![self.state as f64], reward: o.reward.clone(), terminal: self.done })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bandit() -> MomdpModel {
        let json = r#"{"num_states":2,"num_actions":2,"num_objectives":2,"gamma":0.0,
            "transitions":[[0,0,1,1.0],[0,1,1,1.0],[1,0,1,1.0],[1,1,1,1.0]],
            "rewards":[[0,0,1,[1.0,0.0]],[0,1,1,[0.0,1.0]]],
            "initial":[1.0,0.0]}"#;
        MomdpModel::from_json(json).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let m = bandit();
        assert_eq!(m.outcomes(0, 1)[0].reward, vec![0.0, 1.0]);
        assert_eq!(MomdpModel::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn rejects_bad_rows() {
        let bad = r#"{"num_states":1,"num_actions":1,"num_objectives":2,"gamma":0.5,
            "transitions":[[0,0,0,0.9]],"initial":[1.0]}"#;
        assert!(MomdpModel::from_json(bad).is_err());
        let bad_init = r#"{"num_states":1,"num_actions":1,"num_objectives":2,"gamma":0.5,
            "transitions":[[0,0,0,1.0]],"initial":[0.5]}"#;
        assert!(MomdpModel::from_json(bad_init).is_err());
        let bad_reward = r#"{"num_states":1,"num_actions":1,"num_objectives":2,"gamma":0.5,
            "transitions":[[0,0,0,1.0]],"rewards":[[0,0,0,[1.0]]],"initial":[1.0]}"#;
        assert!(matches!(MomdpModel::from_json(bad_reward), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn absorbing_and_topology() {
        let m = bandit();
        assert!(m.is_absorbing(1));
        assert!(!m.is_absorbing(0));
        assert_eq!(m.topological_order(), Some(vec![0]));

        let cyclic = r#"{"num_states":2,"num_actions":1,"num_objectives":2,"gamma":1.0,
            "transitions":[[0,0,1,1.0],[1,0,0,1.0]],"initial":[1.0,0.0]}"#;
        assert_eq!(MomdpModel::from_json(cyclic).unwrap().topological_order(), None);
    }

    #[test]
    fn tabular_env_terminates() {
        let mut env = TabularEnv::new(bandit(), 10);
        let mut rng = crate::rng::rng_from_seed(1);
        env.reset(&mut rng);
        let step = env.step(&Action::Discrete(1), &mut rng).unwrap();
        assert_eq!(step.reward, vec![0.0, 1.0]);
        assert!(step.terminal);
        assert_eq!(env.step(&Action::Discrete(0), &mut rng), Err(Error::StepAfterTerminal));
    }
}
