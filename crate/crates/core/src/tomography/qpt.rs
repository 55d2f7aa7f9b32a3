//! Single-qubit quantum process tomography.
//!
//! Inputs and measurement settings are the probe states |0⟩, |1⟩, |+⟩, |+i⟩.
//! Cell `(α, β)` prepares `φ_α`, runs the channel, undoes the preparation of
//! `ψ_β` and counts outcome 0, i.e. a projective test onto `ψ_β`.

use nalgebra::Matrix4;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use super::cholesky::{product_from_params, CholeskyFactor};
use super::tables::{CountsTable, ProbeState, Provenance};
use super::Shots;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};
use crate::optimizer::{minimize, MinimizeOptions, ObjectiveSpec, Status};
use crate::qmath::gates;
use crate::qmath::pauli::pauli_basis;
use crate::qmath::{AmplitudeVector, ChiMatrix};
use crate::rng::substream;
use crate::signal::{measure_qubit, outcome_probability, Circuit, NoiseModel, SignalConfig};

/// Nominal shot count used to express infinite-shot probabilities as integer counts.
pub const EXACT_SHOTS: u64 = 1_000_000_000_000;

/// Shots per parallel work unit; fixed so results do not depend on thread count.
const CHUNK: u64 = 64;

impl ProbeState {
    pub fn amplitudes(self) -> AmplitudeVector {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let e = match self {
            ProbeState::Zero => vec![c(1.0, 0.0), c(0.0, 0.0)],
            ProbeState::One => vec![c(0.0, 0.0), c(1.0, 0.0)],
            ProbeState::Plus => vec![c(h, 0.0), c(h, 0.0)],
            ProbeState::PlusI => vec![c(h, 0.0), c(0.0, h)],
        };
        AmplitudeVector::new(e).expect("unit vector")
    }

    /// Gates taking |0⟩ to this state.
    pub fn preparation(self) -> Circuit {
        match self {
            ProbeState::Zero => Circuit::new(),
            ProbeState::One => Circuit::new().single(gates::pauli_x(), 0),
            ProbeState::Plus => Circuit::new().single(gates::hadamard(), 0),
            ProbeState::PlusI => Circuit::new().single(gates::hadamard(), 0).single(gates::phase_s(), 0),
        }
    }
}

/// Runs QPT on `channel`.
pub fn qpt_collect_counts<R: Rng + ?Sized>(
    channel: &Circuit,
    config: &SignalConfig,
    noise: &NoiseModel,
    shots: Shots,
    rng: &mut R,
) -> Result<CountsTable> {
    let mut tables = qpt_collect_series(channel, 1, config, noise, shots, rng)?;
    Ok(tables.remove(0))
}

/// QPT of `step` repeated `k` times, for every `k = 1..=max_repeats`.
///
/// Each trial prepares `φ_α` once and applies `step` repeatedly, taking the
/// four measurements after every repetition, so one trajectory serves all
/// repeat counts. Counts at different `k` are therefore correlated.
pub fn qpt_collect_series<R: Rng + ?Sized>(
    step: &Circuit,
    max_repeats: usize,
    config: &SignalConfig,
    noise: &NoiseModel,
    shots: Shots,
    rng: &mut R,
) -> Result<Vec<CountsTable>> {
    if config.qubit_count != 1 {
        return Err(Error::UnsupportedConfiguration(format!(
            "process tomography is single-qubit, register has {} qubits",
            config.qubit_count
        )));
    }
    if max_repeats == 0 {
        return Err(Error::Domain("need at least one repetition".into()));
    }
    noise.validate()?;
    step.validate(1)?;
    let base: u64 = rng.random();
    let unmeasure: Vec<Circuit> = ProbeState::ALL.iter().map(|b| b.preparation().inverse()).collect();

    // one trajectory: success flags or probabilities, indexed [k][β]
    let trajectory = |alpha: usize, rng: &mut crate::rng::Rng, exact: bool| -> Result<Vec<[f64; 4]>> {
        let mut sig = ProbeState::ALL[alpha].preparation().prepare(config, noise, rng)?;
        let mut out = Vec::with_capacity(max_repeats);
        for _ in 0..max_repeats {
            sig = step.run(&sig, noise, rng)?;
            let mut row = [0.0; 4];
            for (b, undo) in unmeasure.iter().enumerate() {
                let probe = undo.run(&sig, noise, rng)?;
                row[b] = if exact {
                    outcome_probability(&probe, 0, noise, rng)?
                } else {
                    let (bit, _) = measure_qubit(&probe, 0, noise, rng)?;
                    if bit == 0 { 1.0 } else { 0.0 }
                };
            }
            out.push(row);
        }
        Ok(out)
    };

    let mut counts = vec![[[0u64; 4]; 4]; max_repeats];
    let total = match shots {
        Shots::Exact => {
            let rows: Vec<Result<Vec<[f64; 4]>>> = (0..4)
                .into_par_iter()
                .map(|a| trajectory(a, &mut substream(base, a as u64), true))
                .collect();
            for (a, r) in rows.into_iter().enumerate() {
                for (k, row) in r?.into_iter().enumerate() {
                    for b in 0..4 {
                        counts[k][a][b] = (row[b].clamp(0.0, 1.0) * EXACT_SHOTS as f64).round() as u64;
                    }
                }
            }
            EXACT_SHOTS
        }
        Shots::Finite(count) if noise.is_ideal() => {
            // every trial is identical: compute the probabilities once, then draw
            for a in 0..4 {
                let mut rng = substream(base, a as u64);
                let probs = trajectory(a, &mut rng, true)?;
                for (k, row) in probs.iter().enumerate() {
                    for b in 0..4 {
                        let p = row[b];
                        counts[k][a][b] = (0..count).filter(|_| rng.random::<f64>() <= p).count() as u64;
                    }
                }
            }
            count
        }
        Shots::Finite(count) => {
            let chunks = count.div_ceil(CHUNK);
            let jobs: Vec<(usize, u64)> = (0..4).flat_map(|a| (0..chunks).map(move |j| (a, j))).collect();
            let partial: Vec<Result<(usize, Vec<[u64; 4]>)>> = jobs
                .par_iter()
                .map(|&(a, j)| {
                    let mut rng = substream(base, ((a as u64) << 40) | j);
                    let n = CHUNK.min(count - j * CHUNK);
                    let mut acc = vec![[0u64; 4]; max_repeats];
                    for _ in 0..n {
                        for (k, row) in trajectory(a, &mut rng, false)?.into_iter().enumerate() {
                            for b in 0..4 {
                                acc[k][b] += row[b] as u64;
                            }
                        }
                    }
                    Ok((a, acc))
                })
                .collect();
            for r in partial {
                let (a, acc) = r?;
                for (k, row) in acc.into_iter().enumerate() {
                    for b in 0..4 {
                        counts[k][a][b] += row[b];
                    }
                }
            }
            count
        }
    };
    counts
        .into_iter()
        .map(|cells| {
            let mut t = CountsTable::new(total, cells)?;
            t.provenance = Provenance {
                seed: None,
                noise: Some(*noise),
            };
            Ok(t)
        })
        .collect()
}

/// Coefficients `M[αβ]_ij = ⟨ψ_β|σ_i|φ_α⟩⟨φ_α|σ_j|ψ_β⟩`, so that the predicted
/// success probability is `Re Σ_ij M_ij χ_ij`.
fn likelihood_kernel() -> Vec<Matrix4<Complex64>> {
    let sig = pauli_basis();
    let mut out = Vec::with_capacity(16);
    for a in ProbeState::ALL {
        let phi = a.amplitudes().to_column();
        for b in ProbeState::ALL {
            let psi = b.amplitudes().to_column();
            let left: Vec<Complex64> = sig.iter().map(|s| (psi.adjoint() * s * &phi)[(0, 0)]).collect();
            out.push(Matrix4::from_fn(|i, j| left[i] * left[j].conj()));
        }
    }
    out
}

/// Predicted success probabilities `p[α][β]` for a process matrix.
pub fn predicted_probabilities(chi: &CMatrix) -> [[f64; 4]; 4] {
    let kernel = likelihood_kernel();
    let mut p = [[0.0; 4]; 4];
    for (k, m) in kernel.iter().enumerate() {
        p[k / 4][k % 4] = kernel_dot(m, chi);
    }
    p
}

fn kernel_dot(m: &Matrix4<Complex64>, chi: &CMatrix) -> f64 {
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            s += m[(i, j)] * chi[(i, j)];
        }
    }
    s.re
}

/// Counts rounded from the exact probabilities of `chi`.
pub fn expected_counts(chi: &ChiMatrix, shots: u64) -> Result<CountsTable> {
    let p = predicted_probabilities(chi.matrix());
    let mut counts = [[0u64; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            counts[a][b] = (p[a][b].clamp(0.0, 1.0) * shots as f64).round() as u64;
        }
    }
    CountsTable::new(shots, counts)
}

/// Linear-inversion estimate: rebuilds the output Bloch vector of each input
/// from the frequencies, extends the channel linearly to all 2×2 matrices and
/// reads off χ. Hermitian but not necessarily positive or trace preserving.
pub fn qpt_linear_inversion(counts: &CountsTable) -> Result<CMatrix> {
    let sig = pauli_basis();
    let outputs: Vec<CMatrix> = (0..4)
        .map(|a| {
            let f = |b: usize| counts.frequency(a, b);
            let z = f(0) - f(1);
            let x = 2.0 * f(2) - 1.0;
            let y = 2.0 * f(3) - 1.0;
            (&sig[0] + &sig[1] * c(x, 0.0) + &sig[2] * c(y, 0.0) + &sig[3] * c(z, 0.0)) * c(0.5, 0.0)
        })
        .collect();
    let i = c(0.0, 1.0);
    let sum01 = &outputs[0] + &outputs[1];
    // |0⟩⟨1| = |+⟩⟨+| + i|+i⟩⟨+i| − (1+i)/2 (|0⟩⟨0| + |1⟩⟨1|), and its adjoint for |1⟩⟨0|
    let e01 = &outputs[2] + &outputs[3] * i - &sum01 * c(0.5, 0.5);
    let e10 = &outputs[2] - &outputs[3] * i - &sum01 * c(0.5, -0.5);
    let images = [[outputs[0].clone(), e01], [e10, outputs[1].clone()]];
    let chi = ChiMatrix::from_map(|m: &CMatrix| {
        let mut out = CMatrix::zeros(2, 2);
        for r in 0..2 {
            for s in 0..2 {
                out += &images[r][s] * m[(r, s)];
            }
        }
        out
    })?;
    Ok(linalg::hermitian_part(chi.matrix()))
}

#[derive(Debug, Clone)]
pub struct QptEstimate {
    pub chi: ChiMatrix,
    pub objective: f64,
    /// Trace-preservation residual of `ΔΔ†` before normalization.
    pub raw_tp_residual: f64,
    /// Residual of the returned χ.
    pub tp_residual: f64,
    pub status: Status,
    pub evals: usize,
    pub history: Vec<f64>,
}

struct Likelihood {
    kernel: Vec<Matrix4<Complex64>>,
    counts: Vec<f64>,
    shots: f64,
}

impl Likelihood {
    fn value(&self, chi: &CMatrix) -> f64 {
        let floor = 1.0 / (10.0 * self.shots);
        self.kernel
            .iter()
            .zip(&self.counts)
            .map(|(m, &n)| {
                let p = kernel_dot(m, chi);
                let r = n - self.shots * p;
                0.5 * r * r / (self.shots * p.max(floor))
            })
            .sum()
    }
}

fn chi_from_params(params: &[f64]) -> Option<ChiMatrix> {
    let raw = product_from_params(params, 4).ok()?;
    ChiMatrix::trace_preserving_from(&raw).ok()
}

const START_FLOOR: f64 = 1e-8;

fn start_params(counts: &CountsTable) -> Vec<f64> {
    let attempt = || -> Result<Vec<f64>> {
        let lin = qpt_linear_inversion(counts)?;
        let psd = linalg::psd_clip(&lin, START_FLOOR);
        let chi = ChiMatrix::trace_preserving_from(&psd)?;
        Ok(CholeskyFactor::factor(chi.matrix())?.params())
    };
    attempt().unwrap_or_else(|_| {
        let mut ideal = ChiMatrix::identity_process().into_matrix();
        for k in 0..4 {
            ideal[(k, k)] += c(START_FLOOR, 0.0);
        }
        CholeskyFactor::factor(&ideal).expect("positive definite").params()
    })
}

/// Likelihood of `chi` given the counts (the objective minimized by [`qpt_mle`]).
pub fn qpt_objective(chi: &ChiMatrix, counts: &CountsTable) -> f64 {
    likelihood(counts).value(chi.matrix())
}

fn likelihood(counts: &CountsTable) -> Likelihood {
    Likelihood {
        kernel: likelihood_kernel(),
        counts: counts.counts().iter().flatten().map(|&n| n as f64).collect(),
        shots: counts.shots() as f64,
    }
}

/// Maximum-likelihood χ over the Cholesky parameterization with
/// trace preservation enforced on every evaluation.
pub fn qpt_mle(counts: &CountsTable) -> Result<QptEstimate> {
    qpt_mle_with(counts, &MinimizeOptions::default())
}

pub fn qpt_mle_with(counts: &CountsTable, opts: &MinimizeOptions) -> Result<QptEstimate> {
    if counts.counts().iter().flatten().all(|&n| n == 0) {
        return Err(Error::Domain("all counts are zero".into()));
    }
    let lik = likelihood(counts);
    let start = start_params(counts);
    let spec = ObjectiveSpec::new(16, |p: &[f64]| match chi_from_params(p) {
        Some(chi) => lik.value(chi.matrix()),
        None => f64::INFINITY,
    });
    let min = minimize(&spec, &start, opts)?.require_converged()?;
    let raw = product_from_params(&min.x, 4)?;
    let raw_tp_residual = crate::qmath::chi::tp_operator(&raw)
        .iter()
        .zip(linalg::identity(2).iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let chi = chi_from_params(&min.x).ok_or(Error::DegenerateState)?;
    chi.validate()?;
    Ok(QptEstimate {
        tp_residual: chi.tp_residual(),
        chi,
        objective: min.f,
        raw_tp_residual,
        status: min.status,
        evals: min.evals,
        history: min.history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn cfg() -> SignalConfig {
        SignalConfig::new(1000.0, 1).unwrap()
    }

    #[test]
    fn probe_preparations_match_amplitudes() {
        let mut rng = seeded(0);
        for p in ProbeState::ALL {
            let sig = p.preparation().prepare(&cfg(), &NoiseModel::ideal(), &mut rng).unwrap();
            let got = crate::signal::decompose(&sig);
            for (a, b) in got.entries().iter().zip(p.amplitudes().entries()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_counts() {
        let t = qpt_collect_counts(&Circuit::new(), &cfg(), &NoiseModel::ideal(), Shots::Finite(4000), &mut seeded(1))
            .unwrap();
        assert_eq!(t.counts()[0][0], 4000);
        assert_eq!(t.counts()[0][1], 0);
        let f = t.frequency(0, 2);
        assert!((f - 0.5).abs() < 4.0 * 0.5 / (4000f64).sqrt());
    }

    #[test]
    fn x_gate_counts() {
        let t = qpt_collect_counts(
            &Circuit::new().single(gates::pauli_x(), 0),
            &cfg(),
            &NoiseModel::ideal(),
            Shots::Exact,
            &mut seeded(2),
        )
        .unwrap();
        assert_eq!(t.counts()[0][1], EXACT_SHOTS);
        let est = qpt_mle(&t).unwrap();
        assert!(est.chi.matrix()[(1, 1)].re > 0.999);
    }

    #[test]
    fn linear_inversion_exact_for_unitary() {
        let u = gates::ry(0.7) * gates::rz(0.3);
        let chi = ChiMatrix::from_unitary(&u).unwrap();
        let t = expected_counts(&chi, EXACT_SHOTS).unwrap();
        let lin = qpt_linear_inversion(&t).unwrap();
        assert!(linalg::frobenius_distance(&lin, chi.matrix()) < 1e-9);
    }

    #[test]
    fn predicted_probabilities_match_channel_action() {
        let u = gates::rx(0.4);
        let chi = ChiMatrix::from_unitary(&u).unwrap();
        let p = predicted_probabilities(chi.matrix());
        for (a, pa) in ProbeState::ALL.iter().enumerate() {
            let out = pa.amplitudes().apply(&u).unwrap();
            for (b, pb) in ProbeState::ALL.iter().enumerate() {
                let ov: Complex64 = pb.amplitudes().entries().iter().zip(out.entries()).map(|(x, y)| x.conj() * y).sum();
                assert!((p[a][b] - ov.norm_sqr()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_counts_rejected() {
        let t = CountsTable::new(10, [[0; 4]; 4]).unwrap();
        assert!(matches!(qpt_mle(&t), Err(Error::Domain(_))));
    }

    #[test]
    fn series_determinism_and_length() {
        let noise = NoiseModel {
            awgn_sigma: 0.05,
            ..NoiseModel::ideal()
        };
        let step = Circuit::new().single(gates::identity(), 0);
        let a = qpt_collect_series(&step, 3, &cfg(), &noise, Shots::Finite(100), &mut seeded(5)).unwrap();
        let b = qpt_collect_series(&step, 3, &cfg(), &noise, Shots::Finite(100), &mut seeded(5)).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a, b);
    }
}
