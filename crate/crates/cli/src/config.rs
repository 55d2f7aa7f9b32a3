//! Experiment configuration file.
//!
//! A single JSON object; every field is optional and falls back to the default
//! shown by `ExperimentConfig::default()`. Unknown keys are rejected.
//!
//! ```json
//! {
//!   "seed": 7,
//!   "noise": "calibrated",
//!   "shots": 1000,
//!   "iterations": 90,
//!   "gate": "identity",
//!   "output_dir": "out"
//! }
//! ```
//!
//! `noise` is a preset name or an explicit noise model object. `gate` is a gate
//! name (`identity`, `x`, `y`, `z`, `h`, `s`, `sdg`, `t`) or a 2×2 matrix literal
//! `[[[re, im], [re, im]], [[re, im], [re, im]]]`. `state` (state tomography) is
//! `singlet`, `bell`, `zero`, `plus`, or an amplitude list `[[re, im], ...]`.

use std::path::{Path, PathBuf};

use analogq::channels::{FidelityKind, Predictor};
use analogq::linalg::c;
use analogq::qmath::gates;
use analogq::signal::{Circuit, NoiseModel, SignalConfig};
use analogq::tomography::StatePrep;
use analogq::{AmplitudeVector, CMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::presets;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NoiseSpec {
    Preset(String),
    Model(NoiseModel),
}

impl NoiseSpec {
    pub fn resolve(&self) -> Result<NoiseModel> {
        let model = match self {
            NoiseSpec::Preset(name) => presets::noise_preset(name)?,
            NoiseSpec::Model(m) => *m,
        };
        model.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(model)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GateSpec {
    Named(String),
    Matrix([[[f64; 2]; 2]; 2]),
}

impl GateSpec {
    pub fn matrix(&self) -> Result<CMatrix> {
        let m = match self {
            GateSpec::Named(name) => gates::named(name).map_err(|e| CliError::Config(e.to_string()))?,
            GateSpec::Matrix(rows) => CMatrix::from_fn(2, 2, |i, j| c(rows[i][j][0], rows[i][j][1])),
        };
        gates::check_unitary(&m).map_err(|e| CliError::Config(format!("gate: {e}")))?;
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Named(String),
    Amplitudes(Vec<[f64; 2]>),
}

impl StateSpec {
    /// Preparation on the signal engine and the ideal target state.
    pub fn resolve(&self) -> Result<(StatePrep, AmplitudeVector)> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amps = |v: &[(f64, f64)]| AmplitudeVector::new(v.iter().map(|&(r, i)| c(r, i)).collect());
        let out = match self {
            StateSpec::Named(name) => match name.to_ascii_lowercase().as_str() {
                "singlet" => (
                    Circuit::new()
                        .single(gates::pauli_x(), 0)
                        .single(gates::hadamard(), 0)
                        .controlled(gates::pauli_x())
                        .single(gates::pauli_x(), 1),
                    amps(&[(0.0, 0.0), (h, 0.0), (-h, 0.0), (0.0, 0.0)]),
                ),
                "bell" => (
                    Circuit::new().single(gates::hadamard(), 0).controlled(gates::pauli_x()),
                    amps(&[(h, 0.0), (0.0, 0.0), (0.0, 0.0), (h, 0.0)]),
                ),
                "zero" => (Circuit::new(), amps(&[(1.0, 0.0), (0.0, 0.0)])),
                "plus" => (Circuit::new().single(gates::hadamard(), 0), amps(&[(h, 0.0), (h, 0.0)])),
                other => return Err(CliError::Config(format!("unknown state {other:?}"))),
            },
            StateSpec::Amplitudes(v) => {
                let a = AmplitudeVector::new(v.iter().map(|z| c(z[0], z[1])).collect())
                    .and_then(|a| a.check_normalized().map(|_| a))
                    .map_err(|e| CliError::Config(format!("state: {e}")))?;
                return Ok((StatePrep::Amplitudes(a.clone()), a));
            }
        };
        let target = out.1.map_err(|e| CliError::Config(e.to_string()))?;
        Ok((StatePrep::Circuit(out.0), target))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub noise: NoiseSpec,
    /// Shots per measurement setting (tomography) or per cell (process tomography).
    pub shots: u64,
    pub iterations: usize,
    pub gate: GateSpec,
    pub output_dir: PathBuf,
    /// Use outcome probabilities instead of sampled shots where supported.
    pub exact: bool,
    pub state: StateSpec,
    /// Runs per oracle in the Deutsch experiment.
    pub trials: u64,
    pub base_frequency_hz: f64,
    /// Defaults to 64·2^(n-1) for an n-qubit register.
    pub samples_per_period: Option<usize>,
    /// Fidelity recorded per iteration.
    pub fidelity_kind: FidelityKind,
    /// Depolarizing forecast form; defaults to the one matching `fidelity_kind`.
    pub predictor: Option<Predictor>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            noise: NoiseSpec::Preset("ideal".into()),
            shots: 1000,
            iterations: 10,
            gate: GateSpec::Named("identity".into()),
            output_dir: PathBuf::from("out"),
            exact: false,
            state: StateSpec::Named("singlet".into()),
            trials: 10_000,
            base_frequency_hz: 1000.0,
            samples_per_period: None,
            fidelity_kind: FidelityKind::ProcessFidelity,
            predictor: None,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(CliError::Config("shots must be at least 1".into()));
        }
        if self.iterations == 0 {
            return Err(CliError::Config("iterations must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(CliError::Config("trials must be at least 1".into()));
        }
        self.noise.resolve()?;
        self.gate.matrix()?;
        self.state.resolve()?;
        self.signal_config(1)?;
        Ok(())
    }

    pub fn signal_config(&self, qubits: usize) -> Result<SignalConfig> {
        let r = match self.samples_per_period {
            Some(s) => SignalConfig::with_samples(self.base_frequency_hz, qubits, s),
            None => SignalConfig::new(self.base_frequency_hz, qubits),
        };
        r.map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn predictor(&self) -> Predictor {
        self.predictor.unwrap_or(Predictor::for_kind(self.fidelity_kind))
    }
}
