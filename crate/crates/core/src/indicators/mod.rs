//! Quality indicators for comparing solution sets.
//!
//! Axiomatic indicators ([`hypervolume`], [`sparsity`], the ε-indicators
//! and [`coverage_ratio`]) compare sets geometrically. Utility-based
//! indicators ([`expected_utility_metric`], [`maximum_utility_loss`])
//! score sets by the utility a user would obtain from them under a prior
//! over utility functions.

mod epsilon;
mod hypervolume;
mod report;
mod utility_metrics;

pub use epsilon::{coverage_ratio, epsilon_additive, epsilon_multiplicative, sparsity, CoverageRatio};
pub use hypervolume::{hypervolume, ReferencePoint};
pub use report::{EumReport, MetricReport};
pub use utility_metrics::{
    eum_with, expected_utility_metric, maximum_utility_loss, mul_with, UtilityPrior, UtilitySample,
};
