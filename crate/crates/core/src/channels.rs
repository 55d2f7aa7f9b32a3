//! Depolarizing channel model, channel iteration and fits to fidelity series.
//!
//! The depolarizing channel around a target unitary `U` is
//! `E(ρ) = (1-p) UρU† + (p/3) Σ_{σ∈{X,Y,Z}} σUρU†σ`. Composing it `n` times
//! (for `U = I`) gives the same family with `1 - 4p_n/3 = (1 - 4p/3)^n`.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};
use crate::optimizer::{bounded_scalar, minimize, MinimizeOptions, ObjectiveSpec, Status};
use crate::qmath::fidelity::{gate_fidelity_ptm, GateFidelityOptions};
use crate::qmath::gates::{check_unitary, matrix_power};
use crate::qmath::pauli::pauli_basis;
use crate::qmath::{ChiMatrix, DensityMatrix, PauliTransferMatrix};
use crate::tomography::{product_from_params, CholeskyFactor};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct DepolarizingParam(f64);

impl DepolarizingParam {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("depolarizing parameter must lie in [0, 1], got {p}")));
        }
        Ok(Self(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for DepolarizingParam {
    type Error = Error;
    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<DepolarizingParam> for f64 {
    fn from(p: DepolarizingParam) -> f64 {
        p.0
    }
}

/// Which fidelity a series records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FidelityKind {
    GateFidelity,
    ProcessFidelity,
}

impl FidelityKind {
    pub fn label(self) -> &'static str {
        match self {
            FidelityKind::GateFidelity => "gate-fidelity",
            FidelityKind::ProcessFidelity => "process-fidelity",
        }
    }

    pub fn from_label(s: &str) -> Result<Self> {
        match s {
            "gate-fidelity" => Ok(FidelityKind::GateFidelity),
            "process-fidelity" => Ok(FidelityKind::ProcessFidelity),
            other => Err(Error::Domain(format!("unknown fidelity kind {other:?}"))),
        }
    }
}

/// Closed-form depolarizing forecast.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Predictor {
    /// `√(1 − ½[1 − (1 − 4p/3)^n])`
    GateForm,
    /// `1 − p_n`
    ProcessForm,
}

impl Predictor {
    pub fn for_kind(kind: FidelityKind) -> Self {
        match kind {
            FidelityKind::GateFidelity => Predictor::GateForm,
            FidelityKind::ProcessFidelity => Predictor::ProcessForm,
        }
    }

    pub fn predict(self, p: f64, n: usize) -> f64 {
        match self {
            Predictor::GateForm => cumulative_fidelity_raw(p, n),
            Predictor::ProcessForm => 1.0 - effective_p_raw(p, n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub n: usize,
    pub fidelity: f64,
    pub kind: FidelityKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_hat: Option<ChiMatrix>,
}

/// Per-iteration fidelities of one kind, strictly increasing in `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesWire", into = "SeriesWire")]
pub struct IterationSeries {
    records: Vec<IterationRecord>,
}

#[derive(Serialize, Deserialize)]
struct SeriesWire {
    records: Vec<IterationRecord>,
}

impl TryFrom<SeriesWire> for IterationSeries {
    type Error = Error;
    fn try_from(w: SeriesWire) -> Result<Self> {
        Self::new(w.records)
    }
}

impl From<IterationSeries> for SeriesWire {
    fn from(s: IterationSeries) -> Self {
        Self { records: s.records }
    }
}

impl IterationSeries {
    pub fn new(records: Vec<IterationRecord>) -> Result<Self> {
        for (k, r) in records.iter().enumerate() {
            if r.n == 0 {
                return Err(Error::Domain(format!("record {k}: iteration index must be ≥ 1")));
            }
            if !(r.fidelity.is_finite() && (0.0..=1.0).contains(&r.fidelity)) {
                return Err(Error::Domain(format!("record {k}: fidelity {} outside [0, 1]", r.fidelity)));
            }
            if k > 0 {
                if r.n <= records[k - 1].n {
                    return Err(Error::Domain(format!("record {k}: iteration indices must strictly increase")));
                }
                if r.kind != records[0].kind {
                    return Err(Error::Domain(format!("record {k}: mixed fidelity kinds")));
                }
            }
        }
        Ok(Self { records })
    }

    /// Series without process estimates.
    pub fn from_points(kind: FidelityKind, points: &[(usize, f64)]) -> Result<Self> {
        Self::new(
            points
                .iter()
                .map(|&(n, fidelity)| IterationRecord {
                    n,
                    fidelity,
                    kind,
                    chi_hat: None,
                })
                .collect(),
        )
    }

    pub fn records(&self) -> &[IterationRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn kind(&self) -> Option<FidelityKind> {
        self.records.first().map(|r| r.kind)
    }

    /// The first `k` records.
    pub fn truncated(&self, k: usize) -> Self {
        Self {
            records: self.records[..k.min(self.records.len())].to_vec(),
        }
    }
}

/// χ of the depolarizing channel around `u`.
pub fn depolarizing_chi(p: DepolarizingParam, u: &CMatrix) -> Result<ChiMatrix> {
    check_unitary(u)?;
    let p = p.value();
    let sig = pauli_basis();
    let mut kraus = vec![u * c((1.0 - p).sqrt(), 0.0)];
    for s in &sig[1..] {
        kraus.push(s * u * c((p / 3.0).sqrt(), 0.0));
    }
    ChiMatrix::from_kraus(&kraus)
}

/// `ρ_k = E(ρ_{k-1})` for `k = 1..=n`.
pub fn iterate_channel(chi: &ChiMatrix, rho0: &DensityMatrix, n: usize) -> Result<Vec<DensityMatrix>> {
    chi.validate()?;
    if n == 0 {
        return Err(Error::Domain("iteration count must be ≥ 1".into()));
    }
    let mut out = Vec::with_capacity(n);
    let mut rho = rho0.clone();
    for k in 1..=n {
        rho = chi.apply(&rho).map_err(|e| Error::Iteration {
            iteration: k,
            detail: e.to_string(),
        })?;
        out.push(rho.clone());
    }
    Ok(out)
}

fn effective_p_raw(p: f64, n: usize) -> f64 {
    0.75 * (1.0 - (1.0 - 4.0 * p / 3.0).powi(n as i32))
}

fn cumulative_fidelity_raw(p: f64, n: usize) -> f64 {
    (1.0 - 0.5 * (1.0 - (1.0 - 4.0 * p / 3.0).powi(n as i32))).sqrt()
}

/// `p_n = ¾[1 − (1 − 4p/3)^n]`
pub fn effective_p(p: DepolarizingParam, n: usize) -> f64 {
    effective_p_raw(p.value(), n)
}

/// `F_n = √(1 − ½[1 − (1 − 4p/3)^n])`
pub fn cumulative_fidelity(p: DepolarizingParam, n: usize) -> f64 {
    cumulative_fidelity_raw(p.value(), n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepolarizingFit {
    pub p_hat: DepolarizingParam,
    pub rss: f64,
    pub predictor: Predictor,
}

/// Tolerance of the scalar search. Tighter than strictly needed for the
/// parameter so that noiseless self-fits leave residuals near round-off.
const SCALAR_TOL: f64 = 1e-12;

/// Least-squares depolarizing parameter for the whole series.
pub fn fit_depolarizing(series: &IterationSeries, predictor: Predictor) -> Result<DepolarizingFit> {
    if series.is_empty() {
        return Err(Error::Domain("cannot fit an empty series".into()));
    }
    let rss = |p: f64| {
        series
            .records()
            .iter()
            .map(|r| (predictor.predict(p, r.n) - r.fidelity).powi(2))
            .sum::<f64>()
    };
    let (p, f) = bounded_scalar(rss, 0.0, 1.0, 200, SCALAR_TOL);
    Ok(DepolarizingFit {
        p_hat: DepolarizingParam::new(p.clamp(0.0, 1.0))?,
        rss: f,
        predictor,
    })
}

pub fn forecast_depolarizing(p: DepolarizingParam, predictor: Predictor, ns: &[usize]) -> Vec<f64> {
    ns.iter().map(|&n| predictor.predict(p.value(), n)).collect()
}

/// Grid used when a fidelity series is evaluated many times inside a fit.
pub const FIT_GATE_FIDELITY: GateFidelityOptions = GateFidelityOptions {
    theta_steps: 9,
    phi_steps: 16,
    refine_starts: 0,
};

/// Fidelity of `E^n` against `U^n` for each `n` in `ns`.
pub fn forecast_chi(
    chi: &ChiMatrix,
    u: &CMatrix,
    kind: FidelityKind,
    ns: &[usize],
    gate_opts: &GateFidelityOptions,
) -> Result<Vec<f64>> {
    check_unitary(u)?;
    let target = Targets::new(u, ns);
    Ok(target.evaluate(&PauliTransferMatrix::from_chi(chi), kind, gate_opts))
}

/// Precomputed target transfer matrices for every `n` of a series.
struct Targets {
    ns: Vec<usize>,
    ptms: Vec<PauliTransferMatrix>,
    rotations: Vec<Matrix3<f64>>,
}

impl Targets {
    fn new(u: &CMatrix, ns: &[usize]) -> Self {
        let ptms: Vec<PauliTransferMatrix> = ns
            .iter()
            .map(|&n| PauliTransferMatrix::from_unitary(&matrix_power(u, n)))
            .collect();
        Self {
            ns: ns.to_vec(),
            rotations: ptms.iter().map(|p| p.rotation_block()).collect(),
            ptms,
        }
    }

    fn evaluate(&self, ptm: &PauliTransferMatrix, kind: FidelityKind, gate_opts: &GateFidelityOptions) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.ns.len());
        let mut power = PauliTransferMatrix::identity();
        let mut done = 0;
        for (k, &n) in self.ns.iter().enumerate() {
            while done < n {
                power = ptm.then(&power);
                done += 1;
            }
            out.push(match kind {
                FidelityKind::ProcessFidelity => power.process_fidelity(&self.ptms[k]),
                FidelityKind::GateFidelity => gate_fidelity_ptm(&power, &self.rotations[k], gate_opts).value,
            });
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct ChiFit {
    pub chi: ChiMatrix,
    pub rss: f64,
    /// Model fidelities at the series' iteration indices.
    pub predicted: Vec<f64>,
    pub status: Status,
    pub evals: usize,
}

fn chi_from_params(params: &[f64]) -> Option<ChiMatrix> {
    let raw = product_from_params(params, 4).ok()?;
    ChiMatrix::trace_preserving_from(&raw).ok()
}

/// Least-squares χ for a fidelity series.
///
/// The model fidelity at `n` is that of `E^n` against `U^n`, of the same kind as
/// the series. Starts: the depolarizing fit, depolarizing channels composed with
/// small rotations about z and x (mixed slightly with the fully depolarizing
/// channel so every Cholesky column is populated), and the first record's χ̂ if
/// present. The two best starts are refined and the better result is returned.
pub fn fit_chi_to_series(series: &IterationSeries, u: &CMatrix) -> Result<ChiFit> {
    fit_chi_to_series_with(series, u, &MinimizeOptions::default())
}

pub fn fit_chi_to_series_with(series: &IterationSeries, u: &CMatrix, opts: &MinimizeOptions) -> Result<ChiFit> {
    check_unitary(u)?;
    let kind = series
        .kind()
        .ok_or_else(|| Error::Domain("cannot fit an empty series".into()))?;
    let ns: Vec<usize> = series.records().iter().map(|r| r.n).collect();
    let measured: Vec<f64> = series.records().iter().map(|r| r.fidelity).collect();
    let targets = Targets::new(u, &ns);
    let gate_opts = FIT_GATE_FIDELITY;
    let rss_of = |chi: &ChiMatrix| -> f64 {
        let pred = targets.evaluate(&PauliTransferMatrix::from_chi(chi), kind, &gate_opts);
        pred.iter().zip(&measured).map(|(a, b)| (a - b).powi(2)).sum()
    };

    let dep = fit_depolarizing(series, Predictor::for_kind(kind))?;
    let mut starts: Vec<ChiMatrix> = Vec::new();
    let mix = |chi: &ChiMatrix| -> Result<ChiMatrix> {
        let eps = 1e-3;
        let m = chi.matrix() * c(1.0 - eps, 0.0) + CMatrix::identity(4, 4) * c(eps / 4.0, 0.0);
        ChiMatrix::new_unchecked(m)
    };
    starts.push(mix(&depolarizing_chi(dep.p_hat, u)?)?);
    let ps = [dep.p_hat.value(), 0.5 * dep.p_hat.value(), 2.0 * dep.p_hat.value()];
    for &p in &ps {
        let p = DepolarizingParam::new(p.clamp(0.0, 0.75))?;
        for k in 1..=8 {
            let theta = 0.02 * k as f64;
            for axis in [crate::qmath::gates::rz(theta), crate::qmath::gates::rx(theta)] {
                starts.push(mix(&depolarizing_chi(p, &(&axis * u))?)?);
            }
        }
    }
    if let Some(chi) = series.records().first().and_then(|r| r.chi_hat.clone()) {
        starts.push(mix(&chi)?);
    }
    let mut scored: Vec<(f64, ChiMatrix)> = starts.into_iter().map(|s| (rss_of(&s), s)).collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));

    let spec = ObjectiveSpec::new(16, |p: &[f64]| match chi_from_params(p) {
        Some(chi) => rss_of(&chi),
        None => f64::INFINITY,
    });
    let mut best: Option<(f64, Vec<f64>, Status, usize)> = None;
    let mut total_evals = 0;
    for (_, start) in scored.iter().take(2) {
        let x0 = CholeskyFactor::factor(start.matrix())?.params();
        let m = minimize(&spec, &x0, opts)?;
        total_evals += m.evals;
        if best.as_ref().is_none_or(|b| m.f < b.0) {
            best = Some((m.f, m.x, m.status, m.evals));
        }
    }
    let (f, x, status, _) = best.expect("at least one start");
    if status == Status::MaxEvals {
        return Err(Error::Optimizer {
            reason: format!("chi fit exhausted its budget after {total_evals} evaluations"),
            best_value: f,
            best_point: x,
        });
    }
    let chi = chi_from_params(&x).ok_or(Error::DegenerateState)?;
    let predicted = targets.evaluate(&PauliTransferMatrix::from_chi(&chi), kind, &gate_opts);
    Ok(ChiFit {
        chi,
        rss: f,
        predicted,
        status,
        evals: total_evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius_distance;
    use crate::qmath::{gate_fidelity, gates};

    fn dp(p: f64) -> DepolarizingParam {
        DepolarizingParam::new(p).unwrap()
    }

    #[test]
    fn param_bounds() {
        assert!(DepolarizingParam::new(-0.1).is_err());
        assert!(DepolarizingParam::new(1.1).is_err());
        assert!(DepolarizingParam::new(f64::NAN).is_err());
        assert!(serde_json::from_str::<DepolarizingParam>("1.5").is_err());
    }

    #[test]
    fn identity_limits() {
        let chi = depolarizing_chi(dp(0.0), &gates::identity()).unwrap();
        assert!(frobenius_distance(chi.matrix(), ChiMatrix::identity_process().matrix()) < 1e-15);
        let full = depolarizing_chi(dp(0.75), &gates::identity()).unwrap();
        let rho = DensityMatrix::new(CMatrix::from_row_slice(2, 2, &[c(0.8, 0.0), c(0.1, 0.3), c(0.1, -0.3), c(0.2, 0.0)]))
            .unwrap();
        let out = full.apply(&rho).unwrap();
        assert!(frobenius_distance(out.matrix(), &(CMatrix::identity(2, 2) * c(0.5, 0.0))) < 1e-14);
    }

    #[test]
    fn gate_fidelity_closed_form() {
        for p in [0.1, 0.3, 0.6] {
            let chi = depolarizing_chi(dp(p), &gates::identity()).unwrap();
            let f = gate_fidelity(&chi, &gates::identity()).unwrap().value;
            assert!((f - (1.0 - 2.0 * p / 3.0).sqrt()).abs() < 1e-6);
        }
    }

    #[test]
    fn checkpoints() {
        assert!((effective_p(dp(0.006), 90) - 0.3860).abs() < 1e-4);
        assert!((cumulative_fidelity(dp(0.006), 90) - 0.8618).abs() < 2e-4);
        assert!((cumulative_fidelity(dp(0.010), 1) - 0.99666).abs() < 1e-5);
        assert_eq!(cumulative_fidelity(dp(0.3), 0), 1.0);
        assert!((effective_p(dp(0.2), 1) - 0.2).abs() < 1e-15);
        assert!((effective_p(dp(0.75), 7) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn hadamard_involution() {
        let chi = ChiMatrix::from_unitary(&gates::hadamard()).unwrap();
        let rho = DensityMatrix::new(CMatrix::from_row_slice(2, 2, &[c(0.7, 0.0), c(0.2, 0.1), c(0.2, -0.1), c(0.3, 0.0)]))
            .unwrap();
        let seq = iterate_channel(&chi, &rho, 2).unwrap();
        assert!(frobenius_distance(seq[1].matrix(), rho.matrix()) < 1e-14);
    }

    #[test]
    fn iteration_error_names_index() {
        // trace-increasing map passes shape checks but not validation
        let bad = ChiMatrix::new_unchecked(CMatrix::identity(4, 4) * c(0.5, 0.0)).unwrap();
        let rho = DensityMatrix::maximally_mixed(1);
        assert!(iterate_channel(&bad, &rho, 3).is_err());
    }

    #[test]
    fn series_validation() {
        assert!(IterationSeries::from_points(FidelityKind::GateFidelity, &[(1, 0.9), (1, 0.8)]).is_err());
        assert!(IterationSeries::from_points(FidelityKind::GateFidelity, &[(0, 0.9)]).is_err());
        assert!(IterationSeries::from_points(FidelityKind::GateFidelity, &[(1, 1.2)]).is_err());
        let s = IterationSeries::from_points(FidelityKind::ProcessFidelity, &[(1, 0.9), (3, 0.8)]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        let back: IterationSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"records":[{"n":2,"fidelity":0.9,"kind":"gate-fidelity"},{"n":1,"fidelity":0.9,"kind":"gate-fidelity"}]}"#;
        assert!(serde_json::from_str::<IterationSeries>(bad).is_err());
    }

    #[test]
    fn noiseless_self_fit() {
        let pts: Vec<(usize, f64)> = (1..=90).map(|n| (n, cumulative_fidelity(dp(0.006), n))).collect();
        let s = IterationSeries::from_points(FidelityKind::GateFidelity, &pts).unwrap();
        let fit = fit_depolarizing(&s, Predictor::GateForm).unwrap();
        assert!((fit.p_hat.value() - 0.006).abs() < 1e-6);
        assert!(fit.rss <= 1e-12);
        let empty = IterationSeries::new(vec![]).unwrap();
        assert!(fit_depolarizing(&empty, Predictor::GateForm).is_err());
    }

    #[test]
    fn chi_fit_recovers_depolarizing() {
        let truth = depolarizing_chi(dp(0.01), &gates::identity()).unwrap();
        let ns: Vec<usize> = (1..=30).collect();
        let f = forecast_chi(&truth, &gates::identity(), FidelityKind::ProcessFidelity, &ns, &FIT_GATE_FIDELITY).unwrap();
        let pts: Vec<(usize, f64)> = ns.iter().copied().zip(f).collect();
        let s = IterationSeries::from_points(FidelityKind::ProcessFidelity, &pts).unwrap();
        let fit = fit_chi_to_series(&s, &gates::identity()).unwrap();
        assert!(fit.chi.validate().is_ok());
        for (a, b) in fit.predicted.iter().zip(&pts) {
            assert!((a - b.1).abs() < 1e-4);
        }
        assert!(frobenius_distance(fit.chi.matrix(), truth.matrix()) < 0.02);
    }
}
