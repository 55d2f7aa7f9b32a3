pub mod deutsch;
pub mod fit;
pub mod iterate;
pub mod qpt;
pub mod qst;

use std::path::PathBuf;

use analogq::optimizer::Status;
use analogq::NoiseModel;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::Result;

/// Files written and a short human-readable summary.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}

/// Configuration echo embedded in every JSON artifact.
#[derive(Debug, Clone, Serialize)]
pub struct Echo {
    pub config: ExperimentConfig,
    pub noise_model: NoiseModel,
}

impl Echo {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        Ok(Self {
            config: cfg.clone(),
            noise_model: cfg.noise.resolve()?,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizerReport {
    pub status: Status,
    pub evaluations: usize,
    pub objective: f64,
}
