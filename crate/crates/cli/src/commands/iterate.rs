use analogq::channels::{
    fit_chi_to_series, fit_depolarizing, forecast_chi, forecast_depolarizing, ChiFit, DepolarizingFit, FidelityKind,
    IterationRecord, IterationSeries, Predictor,
};
use analogq::qmath::fidelity::GateFidelityOptions;
use analogq::qmath::gates::matrix_power;
use analogq::qmath::{gate_fidelity, process_fidelity};
use analogq::rng::seeded;
use analogq::signal::Circuit;
use analogq::tomography::{qpt_collect_series, qpt_mle, Shots};
use analogq::optimizer::Status;
use analogq::{ChiMatrix, CMatrix};
use serde::Serialize;

use super::{Echo, Outcome};
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::output;

#[derive(Serialize)]
struct FidelityPair {
    n: usize,
    gate_fidelity: f64,
    process_fidelity: f64,
}

#[derive(Serialize)]
struct SeriesReport<'a> {
    #[serde(flatten)]
    echo: Echo,
    kind: FidelityKind,
    series: &'a IterationSeries,
    fidelities: Vec<FidelityPair>,
}

#[derive(Serialize)]
struct SeriesCsvRow {
    n: usize,
    fidelity: f64,
    kind: &'static str,
}

#[derive(Serialize)]
pub struct ChiFitReport {
    pub chi: ChiMatrix,
    pub rss: f64,
    pub status: Status,
    pub evaluations: usize,
}

impl From<&ChiFit> for ChiFitReport {
    fn from(f: &ChiFit) -> Self {
        Self {
            chi: f.chi.clone(),
            rss: f.rss,
            status: f.status,
            evaluations: f.evals,
        }
    }
}

#[derive(Serialize)]
struct ForecastRow {
    n: usize,
    measured: f64,
    single_chi: f64,
    depolarizing_first_point: f64,
    depolarizing_full: f64,
    chi_fit: f64,
}

#[derive(Serialize)]
struct ForecastFits {
    first_point: DepolarizingFit,
    full: DepolarizingFit,
    chi_fit: ChiFitReport,
}

#[derive(Serialize)]
struct ForecastReport {
    #[serde(flatten)]
    echo: Echo,
    kind: FidelityKind,
    predictor: Predictor,
    fits: ForecastFits,
    rows: Vec<ForecastRow>,
}

pub fn measure_series(cfg: &ExperimentConfig, u: &CMatrix) -> Result<(IterationSeries, Vec<(f64, f64)>)> {
    let noise = cfg.noise.resolve()?;
    let step = Circuit::new().single(u.clone(), 0);
    let shots = if cfg.exact { Shots::Exact } else { Shots::Finite(cfg.shots) };
    let tables = qpt_collect_series(&step, cfg.iterations, &cfg.signal_config(1)?, &noise, shots, &mut seeded(cfg.seed))?;
    let mut records = Vec::with_capacity(tables.len());
    let mut pairs = Vec::with_capacity(tables.len());
    for (k, counts) in tables.iter().enumerate() {
        let n = k + 1;
        let est = qpt_mle(counts)?;
        let target = matrix_power(u, n);
        let gf = gate_fidelity(&est.chi, &target)?.value;
        let pf = process_fidelity(&est.chi, &target).clamp(0.0, 1.0);
        pairs.push((gf, pf));
        records.push(IterationRecord {
            n,
            fidelity: match cfg.fidelity_kind {
                FidelityKind::GateFidelity => gf,
                FidelityKind::ProcessFidelity => pf,
            },
            kind: cfg.fidelity_kind,
            chi_hat: Some(est.chi),
        });
    }
    Ok((IterationSeries::new(records)?, pairs))
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let echo = Echo::new(cfg)?;
    let u = cfg.gate.matrix()?;
    let (series, pairs) = measure_series(cfg, &u)?;
    let kind = cfg.fidelity_kind;
    let predictor = cfg.predictor();
    let ns: Vec<usize> = series.records().iter().map(|r| r.n).collect();

    let first_chi = series.records()[0].chi_hat.clone().expect("measured series carries estimates");
    let single = forecast_chi(&first_chi, &u, kind, &ns, &GateFidelityOptions::default())?;
    let first_point = fit_depolarizing(&series.truncated(1), predictor)?;
    let full = fit_depolarizing(&series, predictor)?;
    let chi_fit = fit_chi_to_series(&series, &u)?;
    let dep_first = forecast_depolarizing(first_point.p_hat, predictor, &ns);
    let dep_full = forecast_depolarizing(full.p_hat, predictor, &ns);

    let rows: Vec<ForecastRow> = series
        .records()
        .iter()
        .enumerate()
        .map(|(k, r)| ForecastRow {
            n: r.n,
            measured: r.fidelity,
            single_chi: single[k],
            depolarizing_first_point: dep_first[k],
            depolarizing_full: dep_full[k],
            chi_fit: chi_fit.predicted[k],
        })
        .collect();

    output::ensure_dir(&cfg.output_dir)?;
    let dir = &cfg.output_dir;
    let csv_rows: Vec<SeriesCsvRow> = series
        .records()
        .iter()
        .map(|r| SeriesCsvRow {
            n: r.n,
            fidelity: r.fidelity,
            kind: r.kind.label(),
        })
        .collect();
    let mut files = vec![output::write_csv(dir, "series.csv", &csv_rows)?];
    files.push(output::write_json(
        dir,
        "series.json",
        &SeriesReport {
            echo: echo.clone(),
            kind,
            series: &series,
            fidelities: pairs
                .iter()
                .enumerate()
                .map(|(k, &(g, p))| FidelityPair {
                    n: k + 1,
                    gate_fidelity: g,
                    process_fidelity: p,
                })
                .collect(),
        },
    )?);
    files.push(output::write_csv(dir, "forecast.csv", &rows)?);
    let last = rows.last().map(|r| (r.n, r.measured)).unwrap_or_default();
    files.push(output::write_json(
        dir,
        "forecast.json",
        &ForecastReport {
            echo,
            kind,
            predictor,
            fits: ForecastFits {
                first_point,
                full,
                chi_fit: (&chi_fit).into(),
            },
            rows,
        },
    )?);
    Ok(Outcome {
        files,
        summary: vec![
            format!("{} at n = {}: {:.4}", kind.label(), last.0, last.1),
            format!(
                "depolarizing p from first point {:.5}, from full series {:.5}",
                first_point.p_hat.value(),
                full.p_hat.value()
            ),
        ],
    })
}
