use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use morl_cli::metrics::parse_point;
use morl_cli::{CliError, MetricName, MetricsRequest};

#[derive(Parser)]
#[command(name = "morl", version, about = "Multi-objective RL experiments, metrics and plots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config. MORL_SEED overrides its seed.
    Run { config: PathBuf },
    /// Compute indicator values of front CSVs and print a JSON report.
    Metrics {
        #[arg(long = "front", required = true, num_args = 1..)]
        fronts: Vec<PathBuf>,
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Hypervolume reference point, e.g. `-200,-300`.
        #[arg(long = "ref-point", allow_hyphen_values = true)]
        ref_point: Option<String>,
        #[arg(long = "metric", required = true, num_args = 1..)]
        metrics: Vec<MetricName>,
        /// Relative L1 tolerance of the coverage ratio.
        #[arg(long, default_value_t = morl_cli::config::DEFAULT_COVERAGE_EPS)]
        eps: f64,
        /// Samples of the uniform linear prior used by eum and mul.
        #[arg(long, default_value_t = morl_cli::config::DEFAULT_EUM_SAMPLES)]
        samples: usize,
        /// Prior seed; defaults to MORL_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the report here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw front or metric-log CSVs into one SVG chart.
    Plot {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        /// Only this column of a metrics log.
        #[arg(long)]
        y: Option<String>,
    },
}

fn write_out(path: Option<&PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| CliError::Io { path: p.clone(), source }),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run { config } => {
            let seed = morl_cli::seed_from_env()?;
            let config = morl_cli::load(&config, seed)?;
            let files = morl_cli::run(&config)?;
            println!("wrote {} files to {}", files.len(), config.output_dir.display());
        }
        Command::Metrics { fronts, reference, ref_point, metrics, eps, samples, seed, output } => {
            let seed = match seed {
                Some(s) => s,
                None => morl_cli::seed_from_env()?.unwrap_or(0),
            };
            let request = MetricsRequest {
                fronts,
                reference,
                ref_point: ref_point.as_deref().map(parse_point).transpose()?,
                metrics,
                coverage_eps: eps,
                samples,
                seed,
            };
            let report = morl_cli::run_metrics(&request)?;
            let mut bytes = serde_json::to_vec_pretty(&report).expect("serialisable report");
            bytes.push(b'\n');
            write_out(output.as_ref(), &bytes)?;
        }
        Command::Plot { inputs, output, y } => {
            let svg = morl_cli::plot(&inputs, y.as_deref())?;
            write_out(Some(&output), svg.as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("morl: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
