//! Experiment config files.
//!
//! A config is a JSON object:
//!
//! ```json
//! {
//!   "environment": { "name": "reservoir" },
//!   "algorithm": "mones",
//!   "algorithm_config": { "iterations": 30, "population": 50, "evals_per_policy": 10 },
//!   "metrics": ["hypervolume", "eum"],
//!   "seed": 0,
//!   "output_dir": "out/mones_reservoir"
//! }
//! ```
//!
//! `environment.name` is `reservoir`, `deep_sea_treasure` or `model` (a
//! MOMDP JSON file given by `path`, relative to the config file, with an
//! optional episode `horizon`). `algorithm` is `mones`, `outer_nes` or
//! `chvi`. Optional keys: `prior` (the EUM prior, uniform linear with
//! 10,000 samples by default), `reference` (a front CSV for the metrics
//! that compare against one) and `coverage_eps`.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use morl::algorithms::{EvolutionConfig, SetPruning};
use morl::envs::{DeepSeaTreasureConfig, WaterReservoirConfig};
use morl::indicators::UtilityPrior;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// Environment variable that overrides the seed of a config.
pub const SEED_VAR: &str = "MORL_SEED";

pub const DEFAULT_EUM_SAMPLES: usize = 10_000;
pub const DEFAULT_COVERAGE_EPS: f64 = 0.01;
pub const DEFAULT_MODEL_HORIZON: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvironmentSpec {
    Reservoir {
        #[serde(default)]
        config: WaterReservoirConfig,
    },
    DeepSeaTreasure {
        #[serde(default)]
        config: DeepSeaTreasureConfig,
    },
    Model {
        path: PathBuf,
        #[serde(default = "default_model_horizon")]
        horizon: usize,
    },
}

fn default_model_horizon() -> usize {
    DEFAULT_MODEL_HORIZON
}

impl EnvironmentSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Reservoir { .. } => "reservoir",
            Self::DeepSeaTreasure { .. } => "deep_sea_treasure",
            Self::Model { .. } => "model",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmName {
    Mones,
    OuterNes,
    Chvi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChviConfig {
    pub tolerance: f64,
    pub prune: SetPruning,
}

impl Default for ChviConfig {
    fn default() -> Self {
        Self { tolerance: 0.0, prune: SetPruning::Ccs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlgorithmSpec {
    Mones(EvolutionConfig),
    /// One NES run per utility of `utilities` (30 uniform linear draws
    /// when absent).
    OuterNes { evolution: EvolutionConfig, utilities: Option<UtilityPrior> },
    Chvi(ChviConfig),
}

impl AlgorithmSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Mones(_) => "mones",
            Self::OuterNes { .. } => "outer_nes",
            Self::Chvi(_) => "chvi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum MetricName {
    Hypervolume,
    Sparsity,
    EpsAdditive,
    EpsMultiplicative,
    CoverageRatio,
    Eum,
    Mul,
    Size,
}

impl MetricName {
    /// Whether the metric compares against a reference front.
    pub fn needs_reference(self) -> bool {
        matches!(self, Self::EpsAdditive | Self::EpsMultiplicative | Self::CoverageRatio | Self::Mul)
    }
}

impl fmt::Display for MetricName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    environment: EnvironmentSpec,
    algorithm: AlgorithmName,
    #[serde(default)]
    algorithm_config: Map<String, Value>,
    #[serde(default)]
    metrics: Vec<MetricName>,
    #[serde(default)]
    prior: Option<UtilityPrior>,
    #[serde(default)]
    reference: Option<PathBuf>,
    #[serde(default)]
    coverage_eps: Option<f64>,
    seed: u64,
    output_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub environment: EnvironmentSpec,
    pub algorithm: AlgorithmSpec,
    pub metrics: Vec<MetricName>,
    pub prior: Option<UtilityPrior>,
    pub reference: Option<PathBuf>,
    pub coverage_eps: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// SHA-256 of the canonical JSON form, with the effective seed.
    pub hash: String,
}

fn config_err(e: impl fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

/// Reads `MORL_SEED`, if set.
pub fn seed_from_env() -> Result<Option<u64>> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| config_err(format!("{SEED_VAR}='{s}' is not an unsigned integer"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(config_err(format!("{SEED_VAR}: {e}"))),
    }
}

/// Parses a config file. Relative `path` and `reference` entries are
/// resolved against the file's directory.
pub fn load(path: &Path, seed_override: Option<u64>) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    let mut config = parse(&text, seed_override)?;
    let base = path.parent().unwrap_or(Path::new(""));
    if let EnvironmentSpec::Model { path: model, .. } = &mut config.environment {
        if model.is_relative() {
            *model = base.join(&*model);
        }
    }
    if let Some(reference) = &mut config.reference {
        if reference.is_relative() {
            *reference = base.join(&*reference);
        }
    }
    Ok(config)
}

/// Parses config text; `seed_override` replaces the `seed` key.
pub fn parse(text: &str, seed_override: Option<u64>) -> Result<ExperimentConfig> {
    let mut value: Value = serde_json::from_str(text).map_err(config_err)?;
    if let (Some(seed), Some(obj)) = (seed_override, value.as_object_mut()) {
        obj.insert("seed".into(), Value::from(seed));
    }
    let raw: RawConfig = serde_json::from_value(value.clone()).map_err(config_err)?;
    let hash = hex::encode(Sha256::digest(serde_json::to_vec(&value).map_err(config_err)?));

    if raw.algorithm_config.contains_key("seed") {
        return Err(config_err("the seed is set at the top level, not in algorithm_config"));
    }
    let evolution = |mut map: Map<String, Value>| -> Result<EvolutionConfig> {
        map.insert("seed".into(), Value::from(raw.seed));
        let config: EvolutionConfig = serde_json::from_value(Value::Object(map)).map_err(config_err)?;
        config.validate().map_err(config_err)?;
        Ok(config)
    };
    let algorithm = match raw.algorithm {
        AlgorithmName::Mones => AlgorithmSpec::Mones(evolution(raw.algorithm_config)?),
        AlgorithmName::OuterNes => {
            let mut map = raw.algorithm_config;
            let utilities = map
                .remove("utilities")
                .map(|u| serde_json::from_value::<UtilityPrior>(u).map_err(config_err))
                .transpose()?;
            AlgorithmSpec::OuterNes { evolution: evolution(map)?, utilities }
        }
        AlgorithmName::Chvi => {
            let chvi: ChviConfig =
                serde_json::from_value(Value::Object(raw.algorithm_config)).map_err(config_err)?;
            if !(chvi.tolerance >= 0.0 && chvi.tolerance.is_finite()) {
                return Err(config_err("chvi tolerance must be finite and nonnegative"));
            }
            if matches!(raw.environment, EnvironmentSpec::Reservoir { .. }) {
                return Err(config_err("chvi needs a tabular environment (deep_sea_treasure or model)"));
            }
            AlgorithmSpec::Chvi(chvi)
        }
    };
    match &raw.environment {
        EnvironmentSpec::Reservoir { config } => config.validate().map_err(config_err)?,
        EnvironmentSpec::DeepSeaTreasure { config } => config.validate().map_err(config_err)?,
        EnvironmentSpec::Model { horizon, .. } if *horizon == 0 => return Err(config_err("model horizon must be positive")),
        EnvironmentSpec::Model { .. } => {}
    }
    if let Some(m) = raw.metrics.iter().find(|m| m.needs_reference()) {
        if raw.reference.is_none() {
            return Err(config_err(format!("metric {m} needs a reference front")));
        }
    }
    let coverage_eps = raw.coverage_eps.unwrap_or(DEFAULT_COVERAGE_EPS);
    if !(coverage_eps > 0.0 && coverage_eps.is_finite()) {
        return Err(config_err("coverage_eps must be positive"));
    }
    let mut metrics = raw.metrics;
    metrics.dedup();
    Ok(ExperimentConfig {
        environment: raw.environment,
        algorithm,
        metrics,
        prior: raw.prior,
        reference: raw.reference,
        coverage_eps,
        seed: raw.seed,
        output_dir: raw.output_dir,
        hash,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"environment":{"name":"reservoir"},"algorithm":"mones","seed":3,"output_dir":"o"}"#;

    #[test]
    fn defaults_fill_the_algorithm_config() {
        let c = parse(MINIMAL, None).unwrap();
        assert_eq!(c.seed, 3);
        match c.algorithm {
            AlgorithmSpec::Mones(e) => assert_eq!(e, EvolutionConfig { seed: 3, ..Default::default() }),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hash_ignores_layout_but_not_the_seed() {
        let spaced = MINIMAL.replace(',', ",\n  ");
        assert_eq!(parse(MINIMAL, None).unwrap().hash, parse(&spaced, None).unwrap().hash);
        assert_eq!(parse(MINIMAL, Some(3)).unwrap().hash, parse(MINIMAL, None).unwrap().hash);
        assert_ne!(parse(MINIMAL, Some(4)).unwrap().hash, parse(MINIMAL, None).unwrap().hash);
    }

    #[test]
    fn rejections() {
        let bad = [
            r#"{"environment":{"name":"reservoir"},"algorithm":"mones","output_dir":"o"}"#,
            r#"{"environment":{"name":"lake"},"algorithm":"mones","seed":0,"output_dir":"o"}"#,
            r#"{"environment":{"name":"reservoir"},"algorithm":"chvi","seed":0,"output_dir":"o"}"#,
            r#"{"environment":{"name":"reservoir"},"algorithm":"mones","algorithm_config":{"seed":1},"seed":0,"output_dir":"o"}"#,
            r#"{"environment":{"name":"reservoir"},"algorithm":"mones","metrics":["mul"],"seed":0,"output_dir":"o"}"#,
            r#"{"environment":{"name":"reservoir"},"algorithm":"mones","algorithm_config":{"population":0},"seed":0,"output_dir":"o"}"#,
            r#"{"environment":{"name":"reservoir"},"algorithm":"mones","seed":0,"output_dir":"o","colour":1}"#,
            "{",
        ];
        for text in bad {
            assert!(matches!(parse(text, None), Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn metric_names_round_trip() {
        for m in MetricName::value_variants() {
            let json = serde_json::to_string(m).unwrap();
            assert_eq!(json, format!("\"{m}\""));
        }
    }
}
