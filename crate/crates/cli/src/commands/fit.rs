use std::path::Path;

use analogq::channels::{
    fit_chi_to_series, fit_depolarizing, forecast_chi, forecast_depolarizing, DepolarizingFit, FidelityKind,
    IterationSeries, Predictor,
};
use analogq::qmath::fidelity::GateFidelityOptions;
use serde::{Deserialize, Serialize};

use super::iterate::ChiFitReport;
use super::{Echo, Outcome};
use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::output;

#[derive(Deserialize)]
struct CsvRow {
    n: usize,
    fidelity: f64,
    kind: String,
}

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Reads a series from CSV (`n,fidelity,kind` header) or JSON (a bare series
/// object, or any object holding one under `"series"`).
pub fn read_series(path: &Path) -> Result<IterationSeries> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        parse_json_series(path, &text)
    } else {
        parse_csv_series(path, &text)
    }
}

fn parse_json_series(path: &Path, text: &str) -> Result<IterationSeries> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| parse_error(path, e.line() as u64, e.to_string()))?;
    let inner = value.get("series").cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|e| parse_error(path, 1, e.to_string()))
}

fn parse_csv_series(path: &Path, text: &str) -> Result<IterationSeries> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| parse_error(path, 1, e.to_string()))?.clone();
    for want in ["n", "fidelity", "kind"] {
        if !headers.iter().any(|h| h == want) {
            return Err(parse_error(path, 1, format!("missing column {want:?}")));
        }
    }
    let mut points = Vec::new();
    let mut kind: Option<FidelityKind> = None;
    let mut last_n = 0usize;
    for row in reader.deserialize::<CsvRow>() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            parse_error(path, line, e.to_string())
        })?;
        // header is line 1
        let line = points.len() as u64 + 2;
        let k = FidelityKind::from_label(&row.kind).map_err(|e| parse_error(path, line, e.to_string()))?;
        if *kind.get_or_insert(k) != k {
            return Err(parse_error(path, line, "mixed fidelity kinds"));
        }
        if row.n == 0 || row.n <= last_n {
            return Err(parse_error(path, line, "iteration indices must be ≥ 1 and strictly increasing"));
        }
        if !(row.fidelity.is_finite() && (0.0..=1.0).contains(&row.fidelity)) {
            return Err(parse_error(path, line, format!("fidelity {} outside [0, 1]", row.fidelity)));
        }
        last_n = row.n;
        points.push((row.n, row.fidelity));
    }
    let kind = kind.ok_or_else(|| parse_error(path, 2, "series has no rows"))?;
    Ok(IterationSeries::from_points(kind, &points)?)
}

#[derive(Serialize)]
struct FitPair {
    full: DepolarizingFit,
    first_point: DepolarizingFit,
}

#[derive(Serialize)]
struct FitRow {
    n: usize,
    measured: Option<f64>,
    depolarizing_full: f64,
    depolarizing_first_point: f64,
    alternate_full: f64,
    chi_fit: f64,
}

#[derive(Serialize)]
struct FitReport {
    #[serde(flatten)]
    echo: Echo,
    input: String,
    kind: FidelityKind,
    points: usize,
    predictor: Predictor,
    depolarizing: FitPair,
    alternate: FitPair,
    chi_fit: ChiFitReport,
    forecast: Vec<FitRow>,
}

pub fn run(cfg: &ExperimentConfig, series_path: &Path, predictor: Option<Predictor>) -> Result<Outcome> {
    let echo = Echo::new(cfg)?;
    let series = read_series(series_path)?;
    let kind = series.kind().expect("parsed series is non-empty");
    let u = cfg.gate.matrix()?;
    let predictor = predictor.or(cfg.predictor).unwrap_or(Predictor::for_kind(kind));
    let alternate_predictor = match predictor {
        Predictor::GateForm => Predictor::ProcessForm,
        Predictor::ProcessForm => Predictor::GateForm,
    };
    let pair = |p: Predictor| -> Result<FitPair> {
        Ok(FitPair {
            full: fit_depolarizing(&series, p)?,
            first_point: fit_depolarizing(&series.truncated(1), p)?,
        })
    };
    let main = pair(predictor)?;
    let alternate = pair(alternate_predictor)?;
    let chi_fit = fit_chi_to_series(&series, &u)?;

    let n_max = series.records().last().map(|r| r.n).unwrap_or(1);
    let ns: Vec<usize> = (1..=n_max).collect();
    let full = forecast_depolarizing(main.full.p_hat, predictor, &ns);
    let first = forecast_depolarizing(main.first_point.p_hat, predictor, &ns);
    let alt = forecast_depolarizing(alternate.full.p_hat, alternate_predictor, &ns);
    let chi = forecast_chi(&chi_fit.chi, &u, kind, &ns, &GateFidelityOptions::default())?;
    let forecast = ns
        .iter()
        .enumerate()
        .map(|(k, &n)| FitRow {
            n,
            measured: series.records().iter().find(|r| r.n == n).map(|r| r.fidelity),
            depolarizing_full: full[k],
            depolarizing_first_point: first[k],
            alternate_full: alt[k],
            chi_fit: chi[k],
        })
        .collect::<Vec<_>>();

    let summary = vec![
        format!(
            "{:?}: p from full series {:.6} (rss {:.3e}), from first point {:.6}",
            predictor,
            main.full.p_hat.value(),
            main.full.rss,
            main.first_point.p_hat.value()
        ),
        format!("chi fit rss {:.3e}", chi_fit.rss),
    ];
    output::ensure_dir(&cfg.output_dir)?;
    let dir = &cfg.output_dir;
    let mut files = vec![output::write_csv(dir, "fit_forecast.csv", &forecast)?];
    files.push(output::write_json(
        dir,
        "fit.json",
        &FitReport {
            echo,
            input: series_path.display().to_string(),
            kind,
            points: series.len(),
            predictor,
            depolarizing: main,
            alternate,
            chi_fit: (&chi_fit).into(),
            forecast,
        },
    )?);
    Ok(Outcome { files, summary })
}
