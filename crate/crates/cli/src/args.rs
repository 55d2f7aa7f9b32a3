use std::path::PathBuf;

use analogq::channels::Predictor;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{ExperimentConfig, NoiseSpec};
use crate::error::{CliError, Result};
use crate::presets::PRESETS;

#[derive(Debug, Parser)]
#[command(name = "analogq", version, about = "Signal-based quantum emulator experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// State tomography of the configured state.
    Qst {
        #[command(flatten)]
        common: CommonArgs,
        /// Reconstruct from an existing Pauli mean table instead of simulating.
        #[arg(long, value_name = "PATH")]
        table: Option<PathBuf>,
    },
    /// Process tomography of the configured single-qubit gate.
    Qpt {
        #[command(flatten)]
        common: CommonArgs,
        /// Reconstruct from an existing counts table instead of simulating.
        #[arg(long, value_name = "PATH")]
        counts: Option<PathBuf>,
    },
    /// Process tomography after 1..=iterations repetitions of the gate, with forecasts.
    Iterate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Deutsch's algorithm success rates for the four one-bit oracles.
    Deutsch {
        #[command(flatten)]
        common: CommonArgs,
        /// Runs per oracle.
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Fit depolarizing and process-matrix models to a fidelity series (CSV or JSON).
    Fit {
        series: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        predictor: Option<PredictorArg>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PredictorArg {
    GateForm,
    ProcessForm,
}

impl From<PredictorArg> for Predictor {
    fn from(p: PredictorArg) -> Self {
        match p {
            PredictorArg::GateForm => Predictor::GateForm,
            PredictorArg::ProcessForm => Predictor::ProcessForm,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON experiment configuration.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Preset name (ideal, calibrated, heavy) or path to a noise model JSON file.
    #[arg(long, value_name = "PRESET|PATH")]
    pub noise: Option<String>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Use outcome probabilities instead of sampled shots where supported.
    #[arg(long)]
    pub exact: bool,
}

impl CommonArgs {
    /// Configuration file (or defaults) with command-line overrides applied.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(s) = self.shots {
            cfg.shots = s;
        }
        if let Some(n) = self.iterations {
            cfg.iterations = n;
        }
        if let Some(noise) = &self.noise {
            let is_path = noise.contains(std::path::MAIN_SEPARATOR) || noise.ends_with(".json");
            cfg.noise = if PRESETS.iter().any(|(n, _)| n == noise) {
                NoiseSpec::Preset(noise.clone())
            } else if !is_path && !std::path::Path::new(noise).exists() {
                let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
                return Err(CliError::Config(format!("unknown noise preset {noise:?} (expected one of {names:?} or a file)")));
            } else {
                let path = PathBuf::from(noise);
                let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
                NoiseSpec::Model(
                    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?,
                )
            };
        }
        if let Some(out) = &self.out {
            cfg.output_dir = out.clone();
        }
        if self.exact {
            cfg.exact = true;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
