//! A one-hidden-layer tanh policy network over a flat parameter vector.

use serde::{Deserialize, Serialize};

use crate::env::{Action, Policy, Space};
use crate::error::{Error, Result};

/// Default width of the hidden layer.
pub const HIDDEN_UNITS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub input: usize,
    pub hidden: usize,
    pub output: usize,
}

impl Topology {
    /// `(input + 1) · hidden + (hidden + 1) · output`
    pub fn param_count(&self) -> usize {
        (self.input + 1) * self.hidden + (self.hidden + 1) * self.output
    }

    /// The topology mapping `observation` to `action` through `hidden` units.
    pub fn for_spaces(observation: &Space, action: &Space, hidden: usize) -> Self {
        let output = match action {
            Space::Discrete(n) => *n,
            Space::Box { low, .. } => low.len(),
        };
        Self { input: observation.flat_dim(), hidden, output }
    }
}

/// Feedforward policy `obs → tanh(W₁ x + b₁) → W₂ h + b₂ → action`.
///
/// Observations are rescaled to `[-1, 1]` from their space bounds. For a
/// box action space each output passes through `tanh` and is mapped
/// affinely onto the box; for a discrete space the action is the argmax
/// over the outputs. Parameters are laid out as `W₁` (row-major,
/// `hidden × input`), `b₁`, `W₂` (row-major, `output × hidden`), `b₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyNetwork {
    topology: Topology,
    params: Vec<f64>,
    obs_low: Vec<f64>,
    obs_scale: Vec<f64>,
    action_space: Space,
}

impl PolicyNetwork {
    pub fn new(topology: Topology, params: Vec<f64>, observation: &Space, action: &Space) -> Result<Self> {
        if params.len() != topology.param_count() {
            return Err(Error::DimensionMismatch { expected: topology.param_count(), found: params.len() });
        }
        if Topology::for_spaces(observation, action, topology.hidden) != topology {
            return Err(Error::Contract("topology does not match the spaces".into()));
        }
        let (obs_low, obs_scale) = match observation {
            Space::Discrete(n) => (vec![0.0], vec![2.0 / (n.saturating_sub(1).max(1)) as f64]),
            Space::Box { low, high } => (
                low.clone(),
                low.iter()
                    .zip(high)
                    .map(|(l, h)| if h > l { 2.0 / (h - l) } else { 0.0 })
                    .collect(),
            ),
        };
        Ok(Self { topology, params, obs_low, obs_scale, action_space: action.clone() })
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Raw network outputs for an observation.
    pub fn forward(&self, observation: &[f64]) -> Vec<f64> {
        let Topology { input, hidden, output } = self.topology;
        let (w1, rest) = self.params.split_at(hidden * input);
        let (b1, rest) = rest.split_at(hidden);
        let (w2, b2) = rest.split_at(output * hidden);
        let x: Vec<f64> = (0..input)
            .map(|i| (observation[i] - self.obs_low[i]) * self.obs_scale[i] - 1.0)
            .collect();
        let mut out = b2.to_vec();
        for h in 0..hidden {
            let row = &w1[h * input..(h + 1) * input];
            let z = b1[h] + row.iter().zip(&x).map(|(w, v)| w * v).sum::<f64>();
            let a = z.tanh();
            for (o, y) in out.iter_mut().enumerate() {
                *y += w2[o * hidden + h] * a;
            }
        }
        out
    }
}

impl Policy for PolicyNetwork {
    fn act(&self, observation: &[f64]) -> Action {
        let out = self.forward(observation);
        match &self.action_space {
            Space::Discrete(_) => {
                let best = out
                    .iter()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |acc, (i, &y)| if y > acc.1 { (i, y) } else { acc });
                Action::Discrete(best.0)
            }
            Space::Box { low, high } => Action::Continuous(
                out.iter()
                    .zip(low.iter().zip(high))
                    .map(|(y, (l, h))| (l + 0.5 * (y.tanh() + 1.0) * (h - l)).clamp(*l, *h))
                    .collect(),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spaces() -> (Space, Space) {
        (
            Space::Box { low: vec![0.0], high: vec![100.0] },
            Space::Box { low: vec![0.0], high: vec![100.0] },
        )
    }

    #[test]
    fn param_count_formula() {
        let (o, a) = spaces();
        let t = Topology::for_spaces(&o, &a, 50);
        assert_eq!(t.param_count(), 2 * 50 + 51);
        let t = Topology { input: 3, hidden: 50, output: 2 };
        assert_eq!(t.param_count(), 4 * 50 + 51 * 2);
    }

    #[test]
    fn zero_weights_release_midpoint() {
        let (o, a) = spaces();
        let t = Topology::for_spaces(&o, &a, 50);
        let net = PolicyNetwork::new(t, vec![0.0; t.param_count()], &o, &a).unwrap();
        assert_eq!(net.act(&[30.0]), Action::Continuous(vec![50.0]));
    }

    #[test]
    fn forward_by_hand() {
        // one hidden unit: h = tanh(w·x + b), y = v·h + c
        let (o, a) = spaces();
        let t = Topology { input: 1, hidden: 1, output: 1 };
        let net = PolicyNetwork::new(t, vec![2.0, 0.5, 3.0, -1.0], &o, &a).unwrap();
        // observation 75 rescales to 0.5
        let expected = 3.0 * (2.0f64 * 0.5 + 0.5).tanh() - 1.0;
        assert_eq!(net.forward(&[75.0]), vec![expected]);
    }

    #[test]
    fn discrete_argmax() {
        let o = Space::Box { low: vec![0.0], high: vec![1.0] };
        let a = Space::Discrete(3);
        let t = Topology::for_spaces(&o, &a, 1);
        let mut p = vec![0.0; t.param_count()];
        // output biases are the last three parameters
        let n = p.len();
        p[n - 2] = 1.0;
        let net = PolicyNetwork::new(t, p, &o, &a).unwrap();
        assert_eq!(net.act(&[0.3]), Action::Discrete(1));
    }

    #[test]
    fn wrong_length_rejected() {
        let (o, a) = spaces();
        let t = Topology::for_spaces(&o, &a, 50);
        assert!(PolicyNetwork::new(t, vec![0.0; 3], &o, &a).is_err());
    }
}
