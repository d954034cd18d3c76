//! Benchmark environments.

pub mod deep_sea_treasure;
pub mod reservoir;
pub mod toy;

pub use deep_sea_treasure::{dst_true_front, DeepSeaTreasure, DeepSeaTreasureConfig, DstAction, GridPos};
pub use reservoir::{Reservoir, ReservoirTransition, WaterReservoirConfig};
pub use toy::{coin_flip, ScriptedEnv};
