//! Indicator report cards for fronts stored as CSV.

use std::fs::File;
use std::path::{Path, PathBuf};

use morl::indicators::{
    coverage_ratio, epsilon_additive, epsilon_multiplicative, hypervolume, maximum_utility_loss, sparsity,
    expected_utility_metric, EumReport, MetricReport, ReferencePoint, UtilityPrior,
};
use morl::io::Table;
use morl::{pareto_prune, SolutionSet};
use serde::Serialize;

use crate::config::MetricName;
use crate::error::{CliError, Result};

/// Everything a metric might compare against.
#[derive(Debug, Clone, Copy)]
pub struct ScoreInputs<'a> {
    pub ref_point: Option<&'a ReferencePoint>,
    pub reference: Option<&'a SolutionSet>,
    pub prior: &'a UtilityPrior,
    pub coverage_eps: f64,
}

/// Computes the requested metrics of `set`.
pub fn score(set: &SolutionSet, metrics: &[MetricName], inputs: ScoreInputs<'_>) -> Result<MetricReport> {
    let mut report = MetricReport::default();
    let reference = |m: MetricName| {
        inputs
            .reference
            .ok_or_else(|| CliError::Usage(format!("{m} needs a reference front (--reference)")))
    };
    for &m in metrics {
        match m {
            MetricName::Hypervolume => {
                let r = inputs
                    .ref_point
                    .ok_or_else(|| CliError::Usage("hypervolume needs a reference point (--ref-point)".into()))?;
                report.hypervolume = Some(hypervolume(set, r)?);
                report.ref_point = Some(r.as_slice().to_vec());
            }
            MetricName::Sparsity => report.sparsity = Some(sparsity(set)?),
            MetricName::EpsAdditive => report.eps_additive = Some(epsilon_additive(set, reference(m)?)?),
            MetricName::EpsMultiplicative => {
                report.eps_multiplicative = Some(epsilon_multiplicative(set, reference(m)?)?)
            }
            MetricName::CoverageRatio => {
                report.coverage_ratio = Some(coverage_ratio(set, reference(m)?, inputs.coverage_eps)?)
            }
            MetricName::Eum => {
                report.eum = Some(EumReport {
                    value: expected_utility_metric(set, inputs.prior)?,
                    samples: inputs.prior.sample_count(),
                    seed: inputs.prior.seed(),
                })
            }
            MetricName::Mul => report.mul = Some(maximum_utility_loss(set, reference(m)?, inputs.prior)?),
            MetricName::Size => {
                report.size = Some(set.len());
                report.pareto_size = Some(pareto_prune(set).len());
            }
        }
    }
    Ok(report)
}

/// Reads a front CSV, rejecting files without data rows.
pub fn read_front(path: &Path) -> Result<(SolutionSet, Vec<String>)> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let table = Table::read(file).map_err(|e| CliError::input(path, e))?;
    if table.rows.is_empty() {
        return Err(CliError::input(path, "no data rows"));
    }
    let set = table.to_solution_set().map_err(|e| CliError::input(path, e))?;
    Ok((set, table.objective_names()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRequest {
    pub fronts: Vec<PathBuf>,
    pub reference: Option<PathBuf>,
    pub ref_point: Option<Vec<f64>>,
    pub metrics: Vec<MetricName>,
    pub coverage_eps: f64,
    /// Draws of the uniform linear EUM/MUL prior.
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontReport {
    pub front: String,
    #[serde(flatten)]
    pub metrics: MetricReport,
}

/// Metrics of one front measured against another.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairReport {
    pub front: String,
    pub reference: String,
    #[serde(flatten)]
    pub metrics: MetricReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub fronts: Vec<FrontReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<PairReport>,
}

/// Scores every front. Reference-based metrics use `--reference` when
/// given and otherwise every ordered pair of distinct fronts.
pub fn run_metrics(req: &MetricsRequest) -> Result<MetricsReport> {
    if req.fronts.is_empty() {
        return Err(CliError::Usage("at least one --front is required".into()));
    }
    if req.metrics.is_empty() {
        return Err(CliError::Usage("at least one --metric is required".into()));
    }
    let (own, relative): (Vec<MetricName>, Vec<MetricName>) =
        req.metrics.iter().partition(|m| !m.needs_reference());
    if let Some(m) = relative.first() {
        if req.reference.is_none() && req.fronts.len() < 2 {
            return Err(CliError::Usage(format!("{m} needs --reference or a second --front")));
        }
    }
    if own.contains(&MetricName::Hypervolume) && req.ref_point.is_none() {
        return Err(CliError::Usage("hypervolume needs a reference point (--ref-point)".into()));
    }

    let fronts = req.fronts.iter().map(|p| read_front(p)).collect::<Result<Vec<_>>>()?;
    let reference = req.reference.as_deref().map(read_front).transpose()?;
    let dim = fronts[0].0.dim().expect("non-empty front");
    for (path, set) in req.fronts.iter().zip(&fronts).map(|(p, f)| (p, &f.0)).chain(
        req.reference.iter().zip(reference.iter().map(|r| &r.0)),
    ) {
        let d = set.dim().expect("non-empty front");
        if d != dim {
            return Err(CliError::input(path, format!("{d} objectives, expected {dim}")));
        }
    }
    let ref_point = req.ref_point.clone().map(ReferencePoint::new).transpose()?;
    if let Some(r) = &ref_point {
        if r.as_slice().len() != dim {
            return Err(CliError::Usage(format!("--ref-point has {} components, fronts have {dim}", r.as_slice().len())));
        }
    }
    let prior = UtilityPrior::uniform_linear(dim, req.samples, req.seed);
    let inputs = ScoreInputs {
        ref_point: ref_point.as_ref(),
        reference: reference.as_ref().map(|r| &r.0),
        prior: &prior,
        coverage_eps: req.coverage_eps,
    };

    let per_front = if req.reference.is_some() { req.metrics.clone() } else { own };
    let mut report = MetricsReport { fronts: Vec::new(), pairs: Vec::new() };
    for (path, (set, _)) in req.fronts.iter().zip(&fronts) {
        report.fronts.push(FrontReport { front: path.display().to_string(), metrics: score(set, &per_front, inputs)? });
    }
    if req.reference.is_none() && !relative.is_empty() {
        for (i, (a, _)) in fronts.iter().enumerate() {
            for (j, (b, _)) in fronts.iter().enumerate() {
                if i == j {
                    continue;
                }
                let pair_inputs = ScoreInputs { reference: Some(b), ..inputs };
                report.pairs.push(PairReport {
                    front: req.fronts[i].display().to_string(),
                    reference: req.fronts[j].display().to_string(),
                    metrics: score(a, &relative, pair_inputs)?,
                });
            }
        }
    }
    Ok(report)
}

/// Parses `x,y,…` into a point.
pub fn parse_point(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("'{text}' is not a comma-separated list of numbers")))
        })
        .collect()
}
