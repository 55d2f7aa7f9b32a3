use std::path::Path;

use analogq::qmath::{gate_fidelity, process_fidelity, GateFidelity};
use analogq::rng::seeded;
use analogq::signal::Circuit;
use analogq::tomography::{qpt_collect_counts, qpt_mle, CountsTable, Shots};
use analogq::ChiMatrix;
use serde::Serialize;

use super::{Echo, OptimizerReport, Outcome};
use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::output::{self, ComplexMatrixJson};

#[derive(Serialize)]
struct QptReport {
    #[serde(flatten)]
    echo: Echo,
    gate: ComplexMatrixJson,
    shots: u64,
    chi_hat: ChiMatrix,
    gate_fidelity: GateFidelity,
    process_fidelity: f64,
    tp_residual: f64,
    raw_tp_residual: f64,
    optimizer: OptimizerReport,
}

fn read_counts(path: &Path) -> Result<CountsTable> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn run(cfg: &ExperimentConfig, counts_path: Option<&Path>) -> Result<Outcome> {
    let echo = Echo::new(cfg)?;
    let u = cfg.gate.matrix()?;
    let counts = match counts_path {
        Some(path) => read_counts(path)?,
        None => {
            let channel = Circuit::new().single(u.clone(), 0);
            let shots = if cfg.exact { Shots::Exact } else { Shots::Finite(cfg.shots) };
            let mut t = qpt_collect_counts(
                &channel,
                &cfg.signal_config(1)?,
                &echo.noise_model,
                shots,
                &mut seeded(cfg.seed),
            )?;
            t.provenance.seed = Some(cfg.seed);
            t
        }
    };
    let est = qpt_mle(&counts)?;
    let gf = gate_fidelity(&est.chi, &u)?;
    let pf = process_fidelity(&est.chi, &u);

    output::ensure_dir(&cfg.output_dir)?;
    let dir = &cfg.output_dir;
    let mut files = vec![output::write_json(dir, "counts.json", &counts)?];
    let report = QptReport {
        gate: (&u).into(),
        shots: counts.shots(),
        gate_fidelity: gf,
        process_fidelity: pf,
        tp_residual: est.tp_residual,
        raw_tp_residual: est.raw_tp_residual,
        optimizer: OptimizerReport {
            status: est.status,
            evaluations: est.evals,
            objective: est.objective,
        },
        chi_hat: est.chi.clone(),
        echo,
    };
    files.push(output::write_json(dir, "chi_hat.json", &report)?);
    files.push(output::write_csv(dir, "chi_cityscape.csv", &output::cityscape(est.chi.matrix()))?);
    Ok(Outcome {
        files,
        summary: vec![format!("gate fidelity {:.6}, process fidelity {pf:.6}", gf.value)],
    })
}
