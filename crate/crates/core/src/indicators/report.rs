use serde::{Deserialize, Serialize};

use super::CoverageRatio;

/// Expected utility together with how it was estimated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EumReport {
    pub value: f64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A report card of indicator values for one solution set. Only the
/// requested metrics are present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypervolume: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ref_point: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sparsity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_additive: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_multiplicative: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage_ratio: Option<CoverageRatio>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eum: Option<EumReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mul: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pareto_size: Option<usize>,
}
