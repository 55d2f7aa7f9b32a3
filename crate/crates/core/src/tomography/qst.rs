//! Quantum state tomography on the signal engine.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use super::cholesky::{product_from_params, CholeskyFactor};
use super::tables::{setting_label, PauliMeanTable, Provenance};
use super::Shots;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};
use crate::optimizer::{minimize, MinimizeOptions, ObjectiveSpec, Status};
use crate::qmath::gates;
use crate::qmath::pauli::{pauli_strings, pauli_tensor, Pauli};
use crate::qmath::{AmplitudeVector, DensityMatrix};
use crate::rng::substream;
use crate::signal::{measure_all, outcome_distribution, synthesize, Circuit, NoiseModel, SignalConfig, StateSignal};

/// How the state under study is produced on every shot.
#[derive(Debug, Clone, PartialEq)]
pub enum StatePrep {
    /// Injected directly as a waveform (no gate noise).
    Amplitudes(AmplitudeVector),
    /// Built by running gates on `|0…0⟩`.
    Circuit(Circuit),
}

impl StatePrep {
    pub fn prepare<R: Rng + ?Sized>(&self, config: &SignalConfig, noise: &NoiseModel, rng: &mut R) -> Result<StateSignal> {
        match self {
            StatePrep::Amplitudes(a) => {
                if a.qubit_count() != config.qubit_count {
                    return Err(Error::Domain(format!(
                        "state has {} qubits, register has {}",
                        a.qubit_count(),
                        config.qubit_count
                    )));
                }
                synthesize(a, config)
            }
            StatePrep::Circuit(circ) => circ.prepare(config, noise, rng),
        }
    }
}

/// Basis change that maps the eigenbasis of `setting` onto the computational basis.
pub fn measurement_rotation(setting: &[Pauli]) -> Circuit {
    let n = setting.len();
    let mut circ = Circuit::new();
    for (pos, p) in setting.iter().enumerate() {
        let qubit = n - 1 - pos;
        match p {
            Pauli::X => circ = circ.single(gates::hadamard(), qubit),
            Pauli::Y => circ = circ.single(gates::phase_s_dagger(), qubit).single(gates::hadamard(), qubit),
            Pauli::I | Pauli::Z => {}
        }
    }
    circ
}

/// Eigenvalue (±1) of the Pauli string on little-endian outcome `index`.
fn parity(setting: &[Pauli], index: usize) -> f64 {
    let n = setting.len();
    let mut sign = 1.0;
    for (pos, p) in setting.iter().enumerate() {
        if *p != Pauli::I && (index >> (n - 1 - pos)) & 1 == 1 {
            sign = -sign;
        }
    }
    sign
}

fn cumulative_draw(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (k, p) in probs.iter().enumerate() {
        acc += p;
        if u <= acc {
            return k;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Estimates `B̄_P = ⟨P⟩/2^n` for every non-identity Pauli string.
///
/// Each setting runs on its own random substream derived from one draw of
/// `rng`, so results do not depend on thread scheduling. With an ideal noise
/// model the prepared signal is identical on every shot and is built once; the
/// shots then draw from its RMS outcome distribution.
pub fn estimate_pauli_expectations<R: Rng + ?Sized>(
    prep: &StatePrep,
    config: &SignalConfig,
    noise: &NoiseModel,
    shots: Shots,
    rng: &mut R,
) -> Result<PauliMeanTable> {
    noise.validate()?;
    config.validate()?;
    let n = config.qubit_count;
    let mut table = PauliMeanTable::new(n, shots.count())?;
    if let StatePrep::Circuit(circ) = prep {
        circ.validate(n)?;
    }
    let base: u64 = rng.random();
    let scale = 1.0 / (1u64 << n) as f64;
    let settings: Vec<Vec<Pauli>> = pauli_strings(n).into_iter().skip(1).collect();
    let means: Vec<Result<f64>> = settings
        .par_iter()
        .enumerate()
        .map(|(k, setting)| {
            let mut rng = substream(base, k as u64);
            let rotation = measurement_rotation(setting);
            let mean = match shots {
                Shots::Exact => {
                    let sig = rotation.run(&prep.prepare(config, noise, &mut rng)?, noise, &mut rng)?;
                    let probs = outcome_distribution(&sig, noise, &mut rng)?;
                    probs.iter().enumerate().map(|(i, p)| p * parity(setting, i)).sum::<f64>()
                }
                Shots::Finite(count) if noise.is_ideal() => {
                    let sig = rotation.run(&prep.prepare(config, noise, &mut rng)?, noise, &mut rng)?;
                    let probs = outcome_distribution(&sig, noise, &mut rng)?;
                    let mut total = 0.0;
                    for _ in 0..count {
                        total += parity(setting, cumulative_draw(&probs, rng.random()));
                    }
                    total / count as f64
                }
                Shots::Finite(count) => {
                    let mut total = 0.0;
                    for _ in 0..count {
                        let sig = rotation.run(&prep.prepare(config, noise, &mut rng)?, noise, &mut rng)?;
                        let (index, _) = measure_all(&sig, noise, &mut rng)?;
                        total += parity(setting, index);
                    }
                    total / count as f64
                }
            };
            Ok(mean * scale)
        })
        .collect();
    for (setting, mean) in settings.iter().zip(means) {
        table.set(setting, mean.map_err(|e| annotate(e, setting))?)?;
    }
    table.provenance = Provenance {
        seed: None,
        noise: Some(*noise),
    };
    Ok(table)
}

fn annotate(e: Error, setting: &[Pauli]) -> Error {
    match e {
        Error::DegenerateState => Error::Domain(format!("degenerate state while measuring {}", setting_label(setting))),
        other => other,
    }
}

/// Exact table for a known density matrix.
pub fn exact_pauli_means(rho: &DensityMatrix) -> Result<PauliMeanTable> {
    let n = rho.qubit_count();
    let mut table = PauliMeanTable::new(n, None)?;
    let scale = 1.0 / (1u64 << n) as f64;
    for s in pauli_strings(n).into_iter().skip(1) {
        table.set(&s, rho.expectation(&pauli_tensor(&s)).re * scale)?;
    }
    Ok(table)
}

/// `ρ̄ = Σ_P B̄_P P`. Hermitian with unit trace; not necessarily positive.
pub fn qst_linear_inversion(table: &PauliMeanTable) -> Result<CMatrix> {
    let n = table.qubits();
    let d = 1usize << n;
    let mut rho = CMatrix::zeros(d, d);
    for (s, mean) in table.entries()? {
        rho += pauli_tensor(&s) * c(mean, 0.0);
    }
    Ok(rho)
}

/// Least-squares misfit `Σ_P (Tr(ρP)/2^n − B̄_P)²` with unit weights.
pub fn qst_objective(rho: &CMatrix, table: &PauliMeanTable) -> Result<f64> {
    let data = Fit::new(table)?;
    Ok(data.misfit(rho))
}

struct Fit {
    ops: Vec<CMatrix>,
    targets: Vec<f64>,
    scale: f64,
}

impl Fit {
    fn new(table: &PauliMeanTable) -> Result<Self> {
        let entries = table.entries()?;
        Ok(Self {
            ops: entries.iter().map(|(s, _)| pauli_tensor(s).transpose()).collect(),
            targets: entries.iter().map(|(_, m)| *m).collect(),
            scale: 1.0 / (1u64 << table.qubits()) as f64,
        })
    }

    fn misfit(&self, rho: &CMatrix) -> f64 {
        self.ops
            .iter()
            .zip(&self.targets)
            .map(|(op, t)| {
                // Tr(ρP) = Σ ρ_ij (Pᵀ)_ij
                let tr: Complex64 = rho.iter().zip(op.iter()).map(|(a, b)| a * b).sum();
                let r = tr.re * self.scale - t;
                r * r
            })
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct QstEstimate {
    pub rho: DensityMatrix,
    pub linear_inversion: CMatrix,
    pub objective: f64,
    /// Misfit of the PSD projection of the linear-inversion estimate.
    pub projection_objective: f64,
    pub status: Status,
    pub evals: usize,
    pub history: Vec<f64>,
}

/// Eigenvalue floor of the optimizer start; keeps every Cholesky column alive.
const START_FLOOR: f64 = 1e-8;

fn normalized_psd(m: &CMatrix, floor: f64) -> CMatrix {
    let p = linalg::psd_clip(&linalg::hermitian_part(m), floor);
    let tr = linalg::trace(&p).re;
    p / c(tr, 0.0)
}

fn normalized_product(params: &[f64], d: usize) -> Option<CMatrix> {
    let m = product_from_params(params, d).ok()?;
    let tr = linalg::trace(&m).re;
    if !(tr > 1e-300 && tr.is_finite()) {
        return None;
    }
    Some(m / c(tr, 0.0))
}

/// Maximum-likelihood estimate with `ρ = ΔΔ†/Tr(ΔΔ†)`.
pub fn qst_mle(table: &PauliMeanTable) -> Result<QstEstimate> {
    qst_mle_with(table, &MinimizeOptions::default())
}

pub fn qst_mle_with(table: &PauliMeanTable, opts: &MinimizeOptions) -> Result<QstEstimate> {
    let fit = Fit::new(table)?;
    let d = 1usize << table.qubits();
    let linear = qst_linear_inversion(table)?;
    let projection = normalized_psd(&linear, 0.0);
    let projection_objective = fit.misfit(&projection);

    let start = CholeskyFactor::factor(&normalized_psd(&linear, START_FLOOR))?.params();
    let spec = ObjectiveSpec::new(d * d, |p: &[f64]| match normalized_product(p, d) {
        Some(rho) => fit.misfit(&rho),
        None => f64::INFINITY,
    });
    let min = minimize(&spec, &start, opts)?.require_converged()?;
    let fitted = normalized_product(&min.x, d).ok_or(Error::DegenerateState)?;
    let (rho, objective) = if min.f <= projection_objective {
        (fitted, min.f)
    } else {
        (projection, projection_objective)
    };
    let rho = linalg::hermitian_part(&rho);
    Ok(QstEstimate {
        rho: DensityMatrix::new(rho)?,
        linear_inversion: linear,
        objective,
        projection_objective,
        status: min.status,
        evals: min.evals,
        history: min.history,
    })
}
