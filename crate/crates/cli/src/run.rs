//! The `run` command.
//!
//! Everything is computed in memory before the output directory is
//! touched, so a failed run leaves no artifacts behind. Files written:
//!
//! | file | algorithms | contents |
//! |---|---|---|
//! | `archive.csv` | mones | mean return of every candidate of every iteration |
//! | `metrics_by_iteration.csv` | mones | front size, hypervolume and EUM per iteration |
//! | `distribution.json` | mones | final search distribution |
//! | `utilities.csv` | outer_nes | the utility each run optimised |
//! | `front.csv` | all | the reported set, unpruned |
//! | `front_pruned.csv` | mones, outer_nes | its Pareto front |
//! | `report.json` | all | requested metrics of the pruned front |
//! | `manifest.json` | all | config hash, seed, versions and file digests |
//!
//! Every CSV carries the config hash in a `config_hash` column. The
//! hypervolume reference point is the component-wise worst return seen
//! anywhere in the run.

use std::path::{Path, PathBuf};

use morl::algorithms::{mones_train, outer_loop_nes, set_value_iteration, SetPruning, Topology};
use morl::envs::{DeepSeaTreasure, Reservoir};
use morl::indicators::{eum_with, hypervolume, MetricReport, ReferencePoint, UtilityPrior};
use morl::io::{default_objective_names, write_solution_csv, RESERVOIR_OBJECTIVES};
use morl::rng::rng_from_seed;
use morl::{ccs_prune, pareto_prune, Environment, MomdpModel, SolutionSet, TabularEnv, ValueVector};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{AlgorithmSpec, EnvironmentSpec, ExperimentConfig, DEFAULT_EUM_SAMPLES};
use crate::error::{CliError, Result};
use crate::metrics::{read_front, score, ScoreInputs};

/// Runs per outer loop when the config names no utilities.
pub const DEFAULT_OUTER_RUNS: usize = 30;

pub const DST_OBJECTIVES: [&str; 2] = ["treasure", "time"];

/// A named file produced by a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

enum Problem {
    Simulator(Box<dyn Environment>),
    Tabular(MomdpModel),
}

struct Prepared {
    problem: Problem,
    objectives: Vec<String>,
    prior: UtilityPrior,
    reference: Option<SolutionSet>,
}

fn prepare(config: &ExperimentConfig) -> Result<Prepared> {
    let bad = |e: morl::Error| CliError::Config(e.to_string());
    let tabular = matches!(config.algorithm, AlgorithmSpec::Chvi(_));
    let (problem, objectives) = match &config.environment {
        EnvironmentSpec::Reservoir { config: c } => (
            Problem::Simulator(Box::new(Reservoir::new(c.clone()).map_err(bad)?)),
            RESERVOIR_OBJECTIVES.iter().map(|s| s.to_string()).collect(),
        ),
        EnvironmentSpec::DeepSeaTreasure { config: c } => {
            let env = DeepSeaTreasure::new(c.clone()).map_err(bad)?;
            let names = DST_OBJECTIVES.iter().map(|s| s.to_string()).collect();
            if tabular {
                (Problem::Tabular(env.to_momdp()), names)
            } else {
                (Problem::Simulator(Box::new(env)), names)
            }
        }
        EnvironmentSpec::Model { path, horizon } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let model = MomdpModel::from_json(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let names = default_objective_names(model.num_objectives());
            if tabular {
                (Problem::Tabular(model), names)
            } else {
                (Problem::Simulator(Box::new(TabularEnv::new(model, *horizon))), names)
            }
        }
    };
    let dim = objectives.len();
    let prior = config
        .prior
        .clone()
        .unwrap_or_else(|| UtilityPrior::uniform_linear(dim, DEFAULT_EUM_SAMPLES, config.seed));
    check_prior_dim(&prior, dim)?;
    if let AlgorithmSpec::OuterNes { utilities: Some(u), .. } = &config.algorithm {
        check_prior_dim(u, dim)?;
    }
    let reference = match &config.reference {
        Some(path) => {
            let (set, _) = read_front(path).map_err(|e| CliError::Config(e.to_string()))?;
            if set.dim() != Some(dim) {
                return Err(CliError::Config(format!("{}: expected {dim} objectives", path.display())));
            }
            Some(set)
        }
        None => None,
    };
    Ok(Prepared { problem, objectives, prior, reference })
}

fn check_prior_dim(prior: &UtilityPrior, dim: usize) -> Result<()> {
    let found = match prior {
        UtilityPrior::UniformLinear { dim, .. } | UtilityPrior::LinearGrid { dim, .. } => *dim,
        UtilityPrior::Explicit { .. } => return Ok(()),
    };
    if found != dim {
        return Err(CliError::Config(format!("prior has {found} objectives, the environment {dim}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct RunReport<'a> {
    config_hash: &'a str,
    seed: u64,
    algorithm: &'static str,
    environment: &'static str,
    objectives: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    iterations: Option<usize>,
    front_size: usize,
    pruned_size: usize,
    ref_point: Vec<f64>,
    metrics: MetricReport,
}

#[derive(Serialize)]
struct DistributionFile<'a> {
    config_hash: &'a str,
    topology: Topology,
    means: &'a [f64],
    log_stds: &'a [f64],
}

#[derive(Serialize)]
struct Versions {
    morl: &'static str,
    morl_cli: &'static str,
}

#[derive(Serialize)]
struct FileDigest<'a> {
    name: &'a str,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    config_hash: &'a str,
    seed: u64,
    versions: Versions,
    algorithm: &'static str,
    environment: &'static str,
    files: Vec<FileDigest<'a>>,
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("serialisable report");
    out.push(b'\n');
    out
}

fn csv_bytes(set: &SolutionSet, objectives: &[String], hash: &str) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_solution_csv(&mut buf, set, objectives, Some(hash))?;
    Ok(buf)
}

fn table_bytes(header: &[String], rows: &[Vec<String>]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory write")
}

/// The set of the initial state distribution: the cross sum of each
/// initial state's set scaled by its probability.
fn initial_set(model: &MomdpModel, sets: &[SolutionSet], pruning: SetPruning) -> Result<SolutionSet> {
    let mut acc: Option<Vec<ValueVector>> = None;
    for (s, &p) in model.initial().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let scaled: Vec<Vec<f64>> = sets[s].values().map(|v| v.iter().map(|x| p * x).collect()).collect();
        let next = match acc {
            None => scaled.into_iter().map(ValueVector::new).collect::<morl::Result<Vec<_>>>()?,
            Some(prev) => {
                let mut sum = SolutionSet::new();
                for a in &prev {
                    for b in &scaled {
                        let v = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        sum.push(sum.len() as u64, ValueVector::new(v)?)?;
                    }
                }
                let pruned = match pruning {
                    SetPruning::Ccs => ccs_prune(&sum),
                    SetPruning::Pareto => pareto_prune(&sum),
                };
                pruned.values().cloned().collect()
            }
        };
        acc = Some(next);
    }
    Ok(SolutionSet::from_values(acc.unwrap_or_default())?)
}

/// Runs the experiment and returns its artifacts without writing them.
pub fn execute(config: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let Prepared { problem, objectives, prior, reference } = prepare(config)?;
    let hash = config.hash.as_str();
    let mut artifacts = Vec::new();
    let mut add = |name: &str, bytes: Vec<u8>| artifacts.push(Artifact { name: name.into(), bytes });

    let (front, iterations, worst) = match (&config.algorithm, problem) {
        (AlgorithmSpec::Mones(evo), Problem::Simulator(mut env)) => {
            let topology =
                Topology::for_spaces(&env.observation_space(), &env.action_space(), evo.hidden_units);
            let (dist, archive) = mones_train(env.as_mut(), evo, &mut rng_from_seed(config.seed))?;
            let worst = ReferencePoint::worst_of(archive.iterations.iter().flat_map(|s| s.values()))?;

            let mut header = vec!["iteration".to_string(), "policy_index".to_string()];
            header.extend(objectives.iter().cloned());
            header.push("config_hash".into());
            let mut rows = Vec::new();
            for (it, set) in archive.iterations.iter().enumerate() {
                for e in set.entries() {
                    let mut row = vec![it.to_string(), e.policy_id.to_string()];
                    row.extend(e.value.iter().map(|x| x.to_string()));
                    row.push(hash.to_string());
                    rows.push(row);
                }
            }
            add("archive.csv", table_bytes(&header, &rows));

            let sample = prior.materialize()?;
            let header: Vec<String> = ["iteration", "size", "pareto_size", "hypervolume", "eum", "config_hash"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let mut rows = Vec::new();
            for (it, set) in archive.iterations.iter().enumerate() {
                let front = pareto_prune(set);
                rows.push(vec![
                    it.to_string(),
                    set.len().to_string(),
                    front.len().to_string(),
                    hypervolume(&front, &worst)?.to_string(),
                    eum_with(&front, &sample)?.to_string(),
                    hash.to_string(),
                ]);
            }
            add("metrics_by_iteration.csv", table_bytes(&header, &rows));
            add(
                "distribution.json",
                json_bytes(&DistributionFile { config_hash: hash, topology, means: &dist.means, log_stds: &dist.log_stds }),
            );
            let last = archive
                .last()
                .cloned()
                .ok_or_else(|| morl::Error::Contract("MONES ran no iterations".into()))?;
            (last, Some(archive.iterations.len()), worst)
        }
        (AlgorithmSpec::OuterNes { evolution, utilities }, Problem::Simulator(mut env)) => {
            let utilities = utilities
                .clone()
                .unwrap_or_else(|| UtilityPrior::uniform_linear(objectives.len(), DEFAULT_OUTER_RUNS, config.seed));
            let set = outer_loop_nes(env.as_mut(), &utilities, evolution, &mut rng_from_seed(config.seed))?;
            let rows: Vec<Vec<String>> = utilities
                .materialize()?
                .utilities
                .iter()
                .enumerate()
                .map(|(i, u)| vec![i.to_string(), u.to_string(), hash.to_string()])
                .collect();
            let header: Vec<String> = ["policy_id", "utility", "config_hash"].iter().map(|s| s.to_string()).collect();
            add("utilities.csv", table_bytes(&header, &rows));
            let worst = ReferencePoint::worst_of(set.values())?;
            (set, None, worst)
        }
        (AlgorithmSpec::Chvi(chvi), Problem::Tabular(model)) => {
            let sets = set_value_iteration(&model, chvi.tolerance, chvi.prune)?;
            let root = initial_set(&model, &sets, chvi.prune)?;
            let worst = ReferencePoint::worst_of(root.values())?;
            (root, None, worst)
        }
        _ => unreachable!("the environment form follows the algorithm"),
    };

    let pruned = pareto_prune(&front);
    add("front.csv", csv_bytes(&front, &objectives, hash)?);
    if !matches!(config.algorithm, AlgorithmSpec::Chvi(_)) {
        add("front_pruned.csv", csv_bytes(&pruned, &objectives, hash)?);
    }
    let inputs = ScoreInputs {
        ref_point: Some(&worst),
        reference: reference.as_ref(),
        prior: &prior,
        coverage_eps: config.coverage_eps,
    };
    let report = RunReport {
        config_hash: hash,
        seed: config.seed,
        algorithm: config.algorithm.name(),
        environment: config.environment.name(),
        objectives: &objectives,
        iterations,
        front_size: front.len(),
        pruned_size: pruned.len(),
        ref_point: worst.as_slice().to_vec(),
        metrics: score(&pruned, &config.metrics, inputs)?,
    };
    add("report.json", json_bytes(&report));

    let files = artifacts
        .iter()
        .map(|a| FileDigest { name: &a.name, sha256: hex::encode(Sha256::digest(&a.bytes)) })
        .collect();
    let manifest = json_bytes(&Manifest {
        config_hash: hash,
        seed: config.seed,
        versions: Versions { morl: morl::VERSION, morl_cli: env!("CARGO_PKG_VERSION") },
        algorithm: config.algorithm.name(),
        environment: config.environment.name(),
        files,
    });
    artifacts.push(Artifact { name: "manifest.json".into(), bytes: manifest });
    Ok(artifacts)
}

/// Writes artifacts into `dir`, creating it if needed.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    artifacts
        .iter()
        .map(|a| {
            let path = dir.join(&a.name);
            std::fs::write(&path, &a.bytes).map_err(|e| CliError::io(&path, e))?;
            Ok(path)
        })
        .collect()
}

/// Runs `config` and writes its artifacts to its output directory.
pub fn run(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let artifacts = execute(config)?;
    write_artifacts(&config.output_dir, &artifacts)
}
