//! The Deep Sea Treasure gridworld.
//!
//! A submarine starts at the top-left cell of an 11 × 10 grid and moves
//! one cell per step. Each column hides one treasure at a fixed depth;
//! everything below a treasure is seabed. Entering a treasure ends the
//! episode. Rewards are `(treasure value, −1)` per step, so the two
//! objectives trade treasure against time.

use std::collections::VecDeque;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::env::{Action, Environment, Space, Step};
use crate::error::{Error, Result};
use crate::momdp::{MomdpModel, Outcome};
use crate::rng::SimRng;
use crate::sets::{pareto_prune, SolutionSet};
use crate::value::ValueVector;

pub const ROWS: usize = 11;
pub const COLS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeepSeaTreasureConfig {
    /// Row of the treasure in each column.
    pub depths: Vec<usize>,
    /// Treasure value in each column.
    pub values: Vec<f64>,
    pub step_penalty: f64,
    pub horizon: usize,
}

impl Default for DeepSeaTreasureConfig {
    fn default() -> Self {
        Self {
            depths: vec![1, 2, 3, 4, 4, 4, 7, 7, 9, 10],
            values: vec![1.0, 2.0, 3.0, 5.0, 8.0, 16.0, 24.0, 50.0, 74.0, 124.0],
            step_penalty: -1.0,
            horizon: 200,
        }
    }
}

impl DeepSeaTreasureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.depths.len() != COLS || self.values.len() != COLS {
            return Err(Error::Contract(format!("exactly {COLS} treasures are required")));
        }
        if self.depths.iter().any(|&d| d == 0 || d >= ROWS) {
            return Err(Error::Contract("treasure depths must lie in 1..11".into()));
        }
        if self.horizon == 0 {
            return Err(Error::Contract("horizon must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPos {
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DstAction {
    Up,
    Down,
    Left,
    Right,
}

impl DstAction {
    pub const ALL: [DstAction; 4] = [DstAction::Up, DstAction::Down, DstAction::Left, DstAction::Right];

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cell {
    Sea,
    Treasure,
    Seabed,
}

/// The gridworld and its episode state.
#[derive(Debug, Clone)]
pub struct DeepSeaTreasure {
    config: DeepSeaTreasureConfig,
    pos: GridPos,
    steps: usize,
    done: bool,
}

impl DeepSeaTreasure {
    pub const START: GridPos = GridPos { row: 0, col: 0 };

    pub fn new(config: DeepSeaTreasureConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { config, pos: Self::START, steps: 0, done: true })
    }

    pub fn config(&self) -> &DeepSeaTreasureConfig {
        &self.config
    }

    fn cell(&self, p: GridPos) -> Cell {
        let depth = self.config.depths[p.col];
        match p.row.cmp(&depth) {
            std::cmp::Ordering::Less => Cell::Sea,
            std::cmp::Ordering::Equal => Cell::Treasure,
            std::cmp::Ordering::Greater => Cell::Seabed,
        }
    }

    /// Treasure value at `p`, if `p` holds one.
    pub fn treasure_at(&self, p: GridPos) -> Option<f64> {
        (self.cell(p) == Cell::Treasure).then(|| self.config.values[p.col])
    }

    /// The deterministic move from a sea cell: returns the new position,
    /// the reward `(treasure, step penalty)` and whether a treasure was
    /// reached. Moves off the grid or into seabed leave the position
    /// unchanged.
    pub fn transition(&self, from: GridPos, action: DstAction) -> (GridPos, [f64; 2], bool) {
        let (r, c) = (from.row as isize, from.col as isize);
        let (nr, nc) = match action {
            DstAction::Up => (r - 1, c),
            DstAction::Down => (r + 1, c),
            DstAction::Left => (r, c - 1),
            DstAction::Right => (r, c + 1),
        };
        let inside = nr >= 0 && nc >= 0 && (nr as usize) < ROWS && (nc as usize) < COLS;
        let mut to = from;
        if inside {
            let cand = GridPos { row: nr as usize, col: nc as usize };
            if self.cell(cand) != Cell::Seabed {
                to = cand;
            }
        }
        match self.treasure_at(to) {
            Some(v) => (to, [v, self.config.step_penalty], true),
            None => (to, [0.0, self.config.step_penalty], false),
        }
    }

    /// One step from `state`. Errors when the episode has already ended.
    pub fn dst_step(&mut self, action: DstAction) -> Result<(GridPos, ValueVector, bool)> {
        if self.done {
            return Err(Error::StepAfterTerminal);
        }
        let (to, reward, treasure) = self.transition(self.pos, action);
        self.pos = to;
        self.steps += 1;
        self.done = treasure || self.steps >= self.config.horizon;
        Ok((to, ValueVector::new(reward.to_vec())?, self.done))
    }

    pub fn position(&self) -> GridPos {
        self.pos
    }

    /// All sea cells in row-major order.
    pub fn sea_cells(&self) -> Vec<GridPos> {
        (0..ROWS)
            .flat_map(|row| (0..COLS).map(move |col| GridPos { row, col }))
            .filter(|&p| self.cell(p) == Cell::Sea)
            .collect()
    }

    /// Shortest number of steps from the start to each treasure, by
    /// breadth-first search over sea cells.
    pub fn shortest_treasure_paths(&self) -> Vec<(GridPos, usize)> {
        let mut dist = vec![[usize::MAX; COLS]; ROWS];
        let mut queue = VecDeque::from([Self::START]);
        dist[0][0] = 0;
        let mut found = Vec::new();
        while let Some(p) = queue.pop_front() {
            for a in DstAction::ALL {
                let (q, _, treasure) = self.transition(p, a);
                if dist[q.row][q.col] != usize::MAX {
                    continue;
                }
                dist[q.row][q.col] = dist[p.row][p.col] + 1;
                if treasure {
                    found.push((q, dist[q.row][q.col]));
                } else {
                    queue.push_back(q);
                }
            }
        }
        found.sort();
        found
    }

    /// The gridworld as a finite MOMDP with `γ = 1`.
    ///
    /// States are `(sea cell, time)` pairs for `time < horizon` plus one
    /// absorbing terminal state (the last index), which makes the
    /// transition graph acyclic. Actions are up, down, left, right.
    pub fn to_momdp(&self) -> MomdpModel {
        let cells = self.sea_cells();
        let index_of = |p: GridPos| cells.iter().position(|&c| c == p);
        let horizon = self.config.horizon;
        let n = cells.len();
        let terminal = n * horizon;
        let num_states = terminal + 1;
        let mut outcomes = Vec::with_capacity(num_states * 4);
        for t in 0..horizon {
            for &p in &cells {
                for a in DstAction::ALL {
                    let (q, reward, treasure) = self.transition(p, a);
                    let next = if treasure || t + 1 == horizon {
                        terminal
                    } else {
                        (t + 1) * n + index_of(q).expect("non-treasure moves stay at sea")
                    };
                    outcomes.push(vec![Outcome { next, prob: 1.0, reward: reward.to_vec() }]);
                }
            }
        }
        for _ in 0..4 {
            outcomes.push(vec![Outcome { next: terminal, prob: 1.0, reward: vec![0.0, 0.0] }]);
        }
        let mut initial = vec![0.0; num_states];
        initial[index_of(Self::START).expect("start is a sea cell")] = 1.0;
        MomdpModel::new(num_states, 4, 2, 1.0, outcomes, initial)
            .expect("the gridworld model is well formed")
    }
}

impl Environment for DeepSeaTreasure {
    fn num_objectives(&self) -> usize {
        2
    }

    fn horizon(&self) -> usize {
        self.config.horizon
    }

    fn observation_space(&self) -> Space {
        Space::Box { low: vec![0.0, 0.0], high: vec![(ROWS - 1) as f64, (COLS - 1) as f64] }
    }

    fn action_space(&self) -> Space {
        Space::Discrete(4)
    }

    fn reset(&mut self, _rng: &mut SimRng) -> Vec<f64> {
        self.pos = Self::START;
        self.steps = 0;
        self.done = false;
        vec![self.pos.row as f64, self.pos.col as f64]
    }

    fn step(&mut self, action: &Action, _rng: &mut SimRng) -> Result<Step> {
        let a = match action {
            Action::Discrete(i) => DstAction::from_index(*i),
            Action::Continuous(_) => None,
        }
        .ok_or_else(|| Error::Contract(format!("invalid gridworld action {action:?}")))?;
        let (p, reward, terminal) = self.dst_step(a)?;
        Ok(Step {
            observation: vec![p.row as f64, p.col as f64],
            reward: reward.into_inner(),
            terminal,
        })
    }
}

/// The exact undiscounted Pareto front of the default gridworld: one point
/// `(treasure, −steps)` per treasure along its shortest path.
pub fn dst_true_front() -> SolutionSet {
    static FRONT: OnceLock<SolutionSet> = OnceLock::new();
    FRONT
        .get_or_init(|| {
            let env = DeepSeaTreasure::new(DeepSeaTreasureConfig::default())
                .expect("default config is valid");
            let penalty = env.config.step_penalty;
            let points = env
                .shortest_treasure_paths()
                .into_iter()
                .map(|(p, steps)| {
                    let value = env.treasure_at(p).expect("search only reports treasures");
                    ValueVector::new(vec![value, penalty * steps as f64])
                })
                .collect::<Result<Vec<_>>>()
                .expect("front values are finite");
            pareto_prune(&SolutionSet::from_values(points).expect("two objectives"))
        })
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env() -> DeepSeaTreasure {
        let mut e = DeepSeaTreasure::new(DeepSeaTreasureConfig::default()).unwrap();
        e.reset(&mut crate::rng::rng_from_seed(0));
        e
    }

    #[test]
    fn down_from_start_finds_first_treasure() {
        let mut e = env();
        let (p, r, terminal) = e.dst_step(DstAction::Down).unwrap();
        assert_eq!(p, GridPos { row: 1, col: 0 });
        assert_eq!(r.as_slice(), &[1.0, -1.0]);
        assert!(terminal);
        assert_eq!(e.dst_step(DstAction::Down), Err(Error::StepAfterTerminal));
    }

    #[test]
    fn walls_clamp() {
        let mut e = env();
        let (p, r, terminal) = e.dst_step(DstAction::Up).unwrap();
        assert_eq!(p, DeepSeaTreasure::START);
        assert_eq!(r.as_slice(), &[0.0, -1.0]);
        assert!(!terminal);
        let (p, _, _) = e.dst_step(DstAction::Left).unwrap();
        assert_eq!(p, DeepSeaTreasure::START);
    }

    #[test]
    fn seabed_blocks() {
        let e = env();
        // (1, 1) is sea; below column 0's treasure at depth 1 lies seabed
        let (p, _, _) = e.transition(GridPos { row: 2, col: 1 }, DstAction::Left);
        assert_eq!(p, GridPos { row: 2, col: 1 });
    }

    #[test]
    fn horizon_ends_episode() {
        let mut e = DeepSeaTreasure::new(DeepSeaTreasureConfig { horizon: 2, ..Default::default() }).unwrap();
        e.reset(&mut crate::rng::rng_from_seed(0));
        assert!(!e.dst_step(DstAction::Up).unwrap().2);
        assert!(e.dst_step(DstAction::Up).unwrap().2);
    }

    #[test]
    fn true_front_shape() {
        let front = dst_true_front();
        assert_eq!(front.len(), 10);
        let rows: Vec<Vec<f64>> = front.values().map(|v| v.as_slice().to_vec()).collect();
        assert!(rows.contains(&vec![1.0, -1.0]));
        assert!(rows.contains(&vec![124.0, -19.0]));
        assert!(pareto_prune(&front).same_values(&front));
    }

    #[test]
    fn momdp_is_acyclic() {
        let m = env().to_momdp();
        assert_eq!(m.num_states(), 51 * 200 + 1);
        assert!(m.topological_order().is_some());
        assert!(m.is_absorbing(m.num_states() - 1));
    }
}
