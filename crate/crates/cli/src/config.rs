//! Argument structs shared by the command line and the JSON config file.
//!
//! Every field is optional so the two sources can be layered: a flag wins
//! over the file, the file wins over the built-in default.

use std::path::{Path, PathBuf};

use appraisal_dynamics::ModelKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "appraisal", version, about = "Signed-network appraisal dynamics experiments")]
pub struct Cli {
    /// JSON file with values for the chosen subcommand (flags take precedence).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate one model from a matrix file.
    Simulate(SimulateArgs),
    /// Estimate the probability that appraisals stay bounded away from zero.
    Mc(McArgs),
    /// Add a single link between two balanced subgraphs and evolve.
    Perturb(PerturbArgs),
    /// Two groups competing for a third as ally.
    Ally(AllyArgs),
    /// Faction-count sweep over network size and mean appraisal.
    Sweep(SweepArgs),
    /// Balance report and fixed-point classification of a matrix file.
    Classify(ClassifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelName {
    Hbm,
    Ibm,
    HbmMemory,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitName {
    NzRow,
    RsSymm,
    Interval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    Heatmap,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelName>,
    /// Memory weight for hbm-memory, in (0, 1].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Initial matrix (text or CSV).
    #[arg(long)]
    pub init: Option<PathBuf>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub convergence_tol: Option<f64>,
    #[arg(long)]
    pub record_every: Option<usize>,
    /// Times to render as heatmaps (default: first and last).
    #[arg(long, value_delimiter = ',')]
    pub frames: Option<Vec<usize>>,
    /// Report a zero row as a normal stop instead of a failure.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub allow_zero_row: Option<bool>,
    /// Directory for result files (created if missing).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of csv, json, heatmap.
    #[arg(long, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelName>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum)]
    pub init: Option<InitName>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Defaults to the Chernoff size for accuracy and confidence 0.01.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Entry bound for nz-row sampling.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub window_start: Option<usize>,
    #[arg(long)]
    pub window_end: Option<usize>,
    #[arg(long)]
    pub floor: Option<f64>,
    /// Also write one row per trial.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub per_trial: Option<bool>,
    /// Directory for result files (created if missing).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of csv, json, heatmap.
    #[arg(long, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbArgs {
    /// Base matrix file; when absent a two-subgraph base is built.
    #[arg(long)]
    pub init: Option<PathBuf>,
    /// Group sizes V1,V2,V3,V4 of the generated base.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Link weights inside the two generated subgraphs.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    #[arg(long)]
    pub from: Option<usize>,
    #[arg(long)]
    pub to: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub bilateral: Option<bool>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub frames: Option<Vec<usize>>,
    /// Directory for result files (created if missing).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of csv, json, heatmap.
    #[arg(long, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllyArgs {
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    #[arg(long)]
    pub n3: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub alpha_hat: Option<f64>,
    #[arg(long)]
    pub eps1: Option<f64>,
    #[arg(long)]
    pub eps2: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub frames: Option<Vec<usize>>,
    /// Directory for result files (created if missing).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of csv, json, heatmap.
    #[arg(long, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',')]
    pub n_values: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub ave_values: Option<Vec<f64>>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for result files (created if missing).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of csv, json, heatmap.
    #[arg(long, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyArgs {
    /// Matrix file (text or CSV).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Directory for result files (created if missing).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of csv, json, heatmap.
    #[arg(long, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
}

/// Field-wise `flag.or(file)`.
pub trait Layer: Sized {
    fn over(self, file: Self) -> Self;
}

pub trait Outputs {
    fn out(&self) -> Option<&Path>;
    fn formats(&self) -> Option<&[Format]>;
}

macro_rules! layer {
    ($ty:ty { $($field:ident),* $(,)? }) => {
        impl Layer for $ty {
            fn over(self, file: Self) -> Self {
                Self { $($field: self.$field.or(file.$field),)* }
            }
        }

        impl Outputs for $ty {
            fn out(&self) -> Option<&Path> {
                self.out.as_deref()
            }
            fn formats(&self) -> Option<&[Format]> {
                self.format.as_deref()
            }
        }
    };
}

layer!(SimulateArgs { model, epsilon, init, steps, convergence_tol, record_every, frames, allow_zero_row, out, format });
layer!(McArgs { model, epsilon, init, n, trials, seed, a, x_min, x_max, window_start, window_end, floor, per_trial, out, format });
layer!(PerturbArgs { init, sizes, alphas, from, to, eta, bilateral, steps, frames, out, format });
layer!(AllyArgs { n1, n2, n3, alpha, alpha_hat, eps1, eps2, steps, frames, out, format });
layer!(SweepArgs { n_values, ave_values, samples, horizon, seed, out, format });
layer!(ClassifyArgs { input, out, format });

/// Reads the config file as the argument struct of the running subcommand.
pub fn load_file<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

pub fn model_kind(model: Option<ModelName>, epsilon: Option<f64>) -> Result<ModelKind, CliError> {
    match model {
        None => Err(CliError::Usage("missing --model (hbm, ibm or hbm-memory)".into())),
        Some(ModelName::Hbm) => Ok(ModelKind::Hbm),
        Some(ModelName::Ibm) => Ok(ModelKind::Ibm),
        Some(ModelName::HbmMemory) => {
            let eps = epsilon.ok_or_else(|| CliError::Usage("hbm-memory needs --epsilon".into()))?;
            ModelKind::hbm_memory(eps).map_err(|e| CliError::Usage(e.to_string()))
        }
    }
}

pub fn existing(path: Option<PathBuf>, flag: &str) -> Result<PathBuf, CliError> {
    let path = path.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))?;
    if !path.is_file() {
        return Err(CliError::Usage(format!("--{flag} {} does not exist", path.display())));
    }
    Ok(path)
}
