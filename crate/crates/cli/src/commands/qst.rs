use std::path::Path;

use analogq::qmath::state_fidelity;
use analogq::rng::seeded;
use analogq::tomography::{estimate_pauli_expectations, qst_mle, PauliMeanTable, Shots};
use serde::Serialize;

use super::{Echo, OptimizerReport, Outcome};
use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::output::{self, ComplexMatrixJson};

#[derive(Serialize)]
struct QstReport {
    #[serde(flatten)]
    echo: Echo,
    qubits: usize,
    shots_per_setting: Option<u64>,
    rho_hat: ComplexMatrixJson,
    linear_inversion: ComplexMatrixJson,
    target: Vec<[f64; 2]>,
    fidelity: f64,
    optimizer: OptimizerReport,
    projection_objective: f64,
}

pub fn run(cfg: &ExperimentConfig, table_path: Option<&Path>) -> Result<Outcome> {
    let echo = Echo::new(cfg)?;
    let (prep, target) = cfg.state.resolve()?;
    let table = match table_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let t: PauliMeanTable =
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            if t.qubits() != target.qubit_count() {
                return Err(CliError::Config(format!(
                    "table has {} qubits, configured state has {}",
                    t.qubits(),
                    target.qubit_count()
                )));
            }
            t
        }
        None => {
            let signal = cfg.signal_config(target.qubit_count())?;
            let shots = if cfg.exact { Shots::Exact } else { Shots::Finite(cfg.shots) };
            let mut t = estimate_pauli_expectations(&prep, &signal, &echo.noise_model, shots, &mut seeded(cfg.seed))?;
            t.provenance.seed = Some(cfg.seed);
            t
        }
    };
    let est = qst_mle(&table)?;
    let fidelity = state_fidelity(&est.rho, &target)?;

    output::ensure_dir(&cfg.output_dir)?;
    let dir = &cfg.output_dir;
    let mut files = vec![output::write_json(dir, "pauli_means.json", &table)?];
    let report = QstReport {
        qubits: table.qubits(),
        shots_per_setting: table.shots_per_setting(),
        rho_hat: est.rho.matrix().into(),
        linear_inversion: (&est.linear_inversion).into(),
        target: target.entries().iter().map(|z| [z.re, z.im]).collect(),
        fidelity,
        optimizer: OptimizerReport {
            status: est.status,
            evaluations: est.evals,
            objective: est.objective,
        },
        projection_objective: est.projection_objective,
        echo,
    };
    files.push(output::write_json(dir, "rho_hat.json", &report)?);
    files.push(output::write_csv(dir, "cityscape.csv", &output::cityscape(est.rho.matrix()))?);
    Ok(Outcome {
        files,
        summary: vec![format!("state fidelity {fidelity:.6}")],
    })
}
