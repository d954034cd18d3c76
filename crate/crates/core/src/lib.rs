//! Multi-objective sequential decision making.
//!
//! * [`momdp`], [`env`] and [`eval`]: vector-reward MDPs, episodic
//!   simulators and Monte Carlo evaluation under the SER and ESR criteria.
//! * [`sets`]: Pareto dominance, Lorenz dominance, Pareto fronts and
//!   convex coverage sets.
//! * [`indicators`]: hypervolume, sparsity, ε-indicators, coverage ratio,
//!   expected utility and maximum utility loss.
//! * [`envs`]: Deep Sea Treasure and a water-reservoir control problem.
//! * [`algorithms`]: MONES, outer-loop NES and convex-hull value iteration.

pub mod algorithms;
pub mod env;
pub mod envs;
pub mod error;
pub mod eval;
pub mod indicators;
pub mod io;
pub mod momdp;
pub mod numeric;
pub mod rng;
pub mod sets;
pub mod utility;
pub mod value;

pub use env::{Action, Environment, Policy, Space, Step};
pub use error::{Error, Result};
pub use eval::{esr_value, estimate_mean_return, rollout, sample_returns, ser_value, EpisodeReturn, ReturnBatch};
pub use momdp::{MomdpModel, TabularEnv};
pub use rng::{seed_derive, SimRng};
pub use sets::{
    ccs_prune, linear_utility, lorenz_dominates, lorenz_vector, mixture_value, pareto_dominates, pareto_prune,
    PruningState, SolutionSet,
};
pub use utility::UtilityFunction;
pub use value::{ValueVector, WeightVector};

/// Version of this library, recorded in experiment manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
