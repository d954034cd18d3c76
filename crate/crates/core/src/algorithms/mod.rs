//! Solvers: MONES, outer-loop NES and convex-hull value iteration.

pub mod chvi;
pub mod mones;
pub mod nes;
pub mod network;

pub use chvi::{chvi, coverage_distance, hausdorff_linf, set_value_iteration, SetPruning};
pub use mones::{crowding_distance, mones_indicator, mones_train, nondominated_rank, MonesArchive};
pub use nes::{
    centered_ranks, nes_train, outer_loop_nes, EvolutionConfig, MonesConfig, NesHistory, SearchDistribution,
};
pub use network::{PolicyNetwork, Topology};
