//! Classical signal representation of qubit registers.
//!
//! Basis state `x` of an n-qubit register is the sampled waveform
//! `φ_x(t) = Π_k exp((-1)^{x_k} i ω_k t)` with `ω_k = 2^k ω₀`, sampled on a uniform
//! grid over one period `T = 2π/ω₀`. Superpositions are linear combinations of these.
//!
//! A signal carries the set of qubits whose carriers it contains. Full-register
//! signals carry every qubit; the partial projections produced by
//! [`partial_project`] drop the addressed qubit but keep the others on their
//! original frequencies, so multiplying by the dropped qubit's carrier and
//! summing reassembles the parent signal.
//!
//! Phases are evaluated as `exp(2πi (m·j mod S)/S)` from an exact integer
//! frequency multiplier `m`, so no rounding accumulates across samples.

mod circuit;

pub use circuit::{Circuit, GateOp};

use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};
use crate::qmath::gates::check_unitary;
use crate::qmath::AmplitudeVector;

/// Highest supported register size; bandwidth grows as `2^n`.
pub const MAX_QUBITS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalConfig {
    pub base_frequency_hz: f64,
    pub qubit_count: usize,
    pub samples_per_period: usize,
}

impl SignalConfig {
    /// Default sampling: `64 · 2^(n-1)` samples per period.
    pub fn new(base_frequency_hz: f64, qubit_count: usize) -> Result<Self> {
        let samples = 64usize << qubit_count.saturating_sub(1);
        Self::with_samples(base_frequency_hz, qubit_count, samples)
    }

    pub fn with_samples(base_frequency_hz: f64, qubit_count: usize, samples_per_period: usize) -> Result<Self> {
        if !(base_frequency_hz.is_finite() && base_frequency_hz > 0.0) {
            return Err(Error::Domain(format!("base frequency must be positive, got {base_frequency_hz}")));
        }
        if qubit_count == 0 || qubit_count > MAX_QUBITS {
            return Err(Error::UnsupportedConfiguration(format!(
                "qubit count {qubit_count} not in 1..={MAX_QUBITS}"
            )));
        }
        let min = 4usize << (qubit_count - 1);
        if samples_per_period < min || !samples_per_period.is_power_of_two() {
            return Err(Error::Domain(format!(
                "samples_per_period must be a power of two ≥ {min}, got {samples_per_period}"
            )));
        }
        Ok(Self {
            base_frequency_hz,
            qubit_count,
            samples_per_period,
        })
    }

    pub fn validate(&self) -> Result<()> {
        Self::with_samples(self.base_frequency_hz, self.qubit_count, self.samples_per_period).map(|_| ())
    }

    /// Angular frequency of qubit `k`, `2^k ω₀`.
    pub fn omega(&self, k: usize) -> f64 {
        std::f64::consts::TAU * self.base_frequency_hz * (1u64 << k) as f64
    }

    pub fn period(&self) -> f64 {
        1.0 / self.base_frequency_hz
    }

    pub fn sample_times(&self) -> Vec<f64> {
        let dt = self.period() / self.samples_per_period as f64;
        (0..self.samples_per_period).map(|j| j as f64 * dt).collect()
    }

    fn full_mask(&self) -> u8 {
        ((1u16 << self.qubit_count) - 1) as u8
    }
}

/// Device imperfections. The all-zero model is exactly noiseless.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Per-quadrature std of complex Gaussian noise added to every sample after each gate.
    pub awgn_sigma: f64,
    /// Relative gain error per gate branch.
    pub gate_amplitude_error_sigma: f64,
    /// Phase error per gate branch, radians.
    pub gate_phase_error_sigma: f64,
    /// Relative error of each RMS reading.
    pub rms_meter_error_sigma: f64,
}

impl NoiseModel {
    pub fn ideal() -> Self {
        Self::default()
    }

    pub fn is_ideal(&self) -> bool {
        *self == Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("awgn_sigma", self.awgn_sigma),
            ("gate_amplitude_error_sigma", self.gate_amplitude_error_sigma),
            ("gate_phase_error_sigma", self.gate_phase_error_sigma),
            ("rms_meter_error_sigma", self.rms_meter_error_sigma),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Validation(format!("noise parameter {name} must be finite and ≥ 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Sampled waveform over one period.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSignal {
    samples: Vec<Complex64>,
    config: SignalConfig,
    /// Bit k set when the signal carries qubit k's carrier.
    active: u8,
}

impl StateSignal {
    /// All-zero signal on the full register.
    pub fn zeros(config: &SignalConfig) -> Self {
        Self {
            samples: vec![c(0.0, 0.0); config.samples_per_period],
            config: *config,
            active: config.full_mask(),
        }
    }

    /// Wraps raw samples as a full-register signal.
    pub fn from_samples(samples: Vec<Complex64>, config: &SignalConfig) -> Result<Self> {
        if samples.len() != config.samples_per_period {
            return Err(Error::Domain(format!(
                "expected {} samples, got {}",
                config.samples_per_period,
                samples.len()
            )));
        }
        Ok(Self {
            samples,
            config: *config,
            active: config.full_mask(),
        })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn config(&self) -> &SignalConfig {
        &self.config
    }

    /// Qubits whose carriers are present, ascending.
    pub fn active_qubits(&self) -> Vec<usize> {
        (0..self.config.qubit_count).filter(|k| self.active >> k & 1 == 1).collect()
    }

    pub fn is_full_register(&self) -> bool {
        self.active == self.config.full_mask()
    }

    /// `sqrt(mean |sample|²)`
    pub fn rms_exact(&self) -> f64 {
        (self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.samples.len() as f64).sqrt()
    }

    fn scaled(mut self, k: f64) -> Self {
        self.samples.iter_mut().for_each(|s| *s *= k);
        self
    }
}

fn unit_phasor(samples: usize, k: i64) -> Complex64 {
    let s = samples as i64;
    let r = k.rem_euclid(s);
    let angle = std::f64::consts::TAU * r as f64 / samples as f64;
    c(angle.cos(), angle.sin())
}

/// Integer frequency multiplier of local basis index `y` over the active qubits.
fn frequency_multiplier(active: &[usize], y: usize) -> i64 {
    active
        .iter()
        .enumerate()
        .map(|(m, &q)| {
            let w = 1i64 << q;
            if y >> m & 1 == 1 {
                -w
            } else {
                w
            }
        })
        .sum()
}

/// `exp(2πi k/S)` for `k = 0..S`, built once per power-of-two size.
fn phasor_table(samples: usize) -> &'static [Complex64] {
    static TABLES: [OnceLock<Vec<Complex64>>; 64] = [const { OnceLock::new() }; 64];
    TABLES[samples.trailing_zeros() as usize]
        .get_or_init(|| (0..samples as i64).map(|k| unit_phasor(samples, k)).collect())
}

fn synth_on(amps: &[Complex64], config: &SignalConfig, active: u8) -> StateSignal {
    let s = config.samples_per_period;
    let table = phasor_table(s);
    let qubits: Vec<usize> = (0..config.qubit_count).filter(|k| active >> k & 1 == 1).collect();
    let mut samples = vec![c(0.0, 0.0); s];
    for (y, &a) in amps.iter().enumerate() {
        if a == c(0.0, 0.0) {
            continue;
        }
        let m = frequency_multiplier(&qubits, y).rem_euclid(s as i64) as usize;
        for (j, out) in samples.iter_mut().enumerate() {
            *out += a * table[(m * j) % s];
        }
    }
    StateSignal {
        samples,
        config: *config,
        active,
    }
}

/// Basis signal `φ_x`.
pub fn basis_signal(x: usize, config: &SignalConfig) -> Result<StateSignal> {
    let amps = AmplitudeVector::basis(config.qubit_count, x)?;
    Ok(synth_on(amps.entries(), config, config.full_mask()))
}

/// `ψ(t) = Σ_x α_x φ_x(t)` for a normalized amplitude vector.
pub fn synthesize(amps: &AmplitudeVector, config: &SignalConfig) -> Result<StateSignal> {
    amps.check_normalized()?;
    synthesize_unnormalized(amps, config)
}

/// Same as [`synthesize`] without the norm check.
pub fn synthesize_unnormalized(amps: &AmplitudeVector, config: &SignalConfig) -> Result<StateSignal> {
    if amps.len() != 1usize << config.qubit_count {
        return Err(Error::Domain(format!(
            "expected {} amplitudes, got {}",
            1usize << config.qubit_count,
            amps.len()
        )));
    }
    Ok(synth_on(amps.entries(), config, config.full_mask()))
}

fn check_compatible(a: &StateSignal, b: &StateSignal) -> Result<()> {
    if a.config != b.config || a.active != b.active {
        return Err(Error::Domain("signals have different configurations".into()));
    }
    Ok(())
}

/// Discrete-time `(1/T)∫ a*(t) b(t) dt`: the mean of `conj(a_j) b_j`.
pub fn inner_product(a: &StateSignal, b: &StateSignal) -> Result<Complex64> {
    check_compatible(a, b)?;
    let sum: Complex64 = a.samples.iter().zip(&b.samples).map(|(x, y)| x.conj() * y).sum();
    Ok(sum / a.samples.len() as f64)
}

/// Amplitudes of the signal on its active carriers (`2^active` entries, not normalized).
pub fn decompose(sig: &StateSignal) -> AmplitudeVector {
    let qubits = sig.active_qubits();
    let s = sig.samples.len();
    let table = phasor_table(s);
    let amps = (0..1usize << qubits.len())
        .map(|y| {
            let m = (-frequency_multiplier(&qubits, y)).rem_euclid(s as i64) as usize;
            let sum: Complex64 = sig.samples.iter().enumerate().map(|(j, v)| v * table[(m * j) % s]).sum();
            sum / s as f64
        })
        .collect();
    AmplitudeVector::new(amps).expect("power-of-two length")
}

fn local_position(sig: &StateSignal, qubit: usize) -> Result<usize> {
    if qubit >= sig.config.qubit_count || sig.active >> qubit & 1 == 0 {
        return Err(Error::Domain(format!(
            "qubit {qubit} is not carried by this signal (active {:?})",
            sig.active_qubits()
        )));
    }
    Ok((0..qubit).filter(|k| sig.active >> k & 1 == 1).count())
}

/// Splits the signal into the partial projections `ψ₀⁽ⁱ⁾`, `ψ₁⁽ⁱ⁾` on the remaining carriers.
pub fn partial_project(sig: &StateSignal, qubit: usize) -> Result<(StateSignal, StateSignal)> {
    let pos = local_position(sig, qubit)?;
    let amps = decompose(sig);
    let half = amps.len() / 2;
    let low = (1usize << pos) - 1;
    let mut branches = [Vec::with_capacity(half), Vec::with_capacity(half)];
    for (b, branch) in branches.iter_mut().enumerate() {
        for y in 0..half {
            let x = (y & low) | (b << pos) | ((y & !low) << 1);
            branch.push(amps.entries()[x]);
        }
    }
    let active = sig.active & !(1u8 << qubit);
    let [b0, b1] = branches;
    Ok((synth_on(&b0, &sig.config, active), synth_on(&b1, &sig.config, active)))
}

/// Carrier `exp((-1)^bit i ω_qubit t)` sampled on the configuration grid.
pub fn carrier(config: &SignalConfig, qubit: usize, bit: u8) -> Vec<Complex64> {
    let s = config.samples_per_period;
    let w = 1i64 << qubit;
    let m = (if bit == 0 { w } else { -w }).rem_euclid(s as i64) as usize;
    let table = phasor_table(s);
    (0..s).map(|j| table[(m * j) % s]).collect()
}

/// Inverse of [`partial_project`]: `carrier₀·ψ₀ + carrier₁·ψ₁`.
pub fn reassemble(psi0: &StateSignal, psi1: &StateSignal, qubit: usize) -> Result<StateSignal> {
    check_compatible(psi0, psi1)?;
    if qubit >= psi0.config.qubit_count || psi0.active >> qubit & 1 == 1 {
        return Err(Error::Domain(format!("qubit {qubit} cannot be re-attached")));
    }
    let c0 = carrier(&psi0.config, qubit, 0);
    let c1 = carrier(&psi0.config, qubit, 1);
    let samples = (0..c0.len())
        .map(|j| c0[j] * psi0.samples[j] + c1[j] * psi1.samples[j])
        .collect();
    Ok(StateSignal {
        samples,
        config: psi0.config,
        active: psi0.active | (1u8 << qubit),
    })
}

fn normal<R: Rng + ?Sized>(rng: &mut R, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return 0.0;
    }
    Normal::new(0.0, sigma).expect("finite sigma").sample(rng)
}

/// Applies `U` to `qubit` through partial projection, four analog gains and remodulation.
/// No additive noise.
fn gate_core<R: Rng + ?Sized>(
    sig: &StateSignal,
    u: &CMatrix,
    qubit: usize,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<StateSignal> {
    let (psi0, psi1) = partial_project(sig, qubit)?;
    let mut gains = [[c(0.0, 0.0); 2]; 2];
    for (a, row) in gains.iter_mut().enumerate() {
        for (b, g) in row.iter_mut().enumerate() {
            let amp = 1.0 + normal(rng, noise.gate_amplitude_error_sigma);
            let phase = normal(rng, noise.gate_phase_error_sigma);
            *g = u[(a, b)] * amp * c(0.0, phase).exp();
        }
    }
    let branch = |a: usize| {
        let samples = psi0
            .samples
            .iter()
            .zip(&psi1.samples)
            .map(|(x0, x1)| gains[a][0] * x0 + gains[a][1] * x1)
            .collect();
        StateSignal {
            samples,
            config: psi0.config,
            active: psi0.active,
        }
    };
    reassemble(&branch(0), &branch(1), qubit)
}

/// Single-qubit gate on `qubit`, followed by additive noise.
pub fn apply_1q_gate<R: Rng + ?Sized>(
    sig: &StateSignal,
    u: &CMatrix,
    qubit: usize,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<StateSignal> {
    check_unitary(u)?;
    let out = gate_core(sig, u, qubit, noise, rng)?;
    Ok(add_noise(&out, noise, rng))
}

/// Controlled-U with qubit 0 as control and qubit 1 as target (two-qubit registers only).
pub fn apply_controlled_gate<R: Rng + ?Sized>(
    sig: &StateSignal,
    u: &CMatrix,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<StateSignal> {
    if sig.config.qubit_count != 2 || !sig.is_full_register() {
        return Err(Error::UnsupportedConfiguration(format!(
            "controlled gates need a full two-qubit register, got {} qubit(s)",
            sig.config.qubit_count
        )));
    }
    check_unitary(u)?;
    let (psi0, psi1) = partial_project(sig, 0)?;
    let target = gate_core(&psi1, u, 1, noise, rng)?;
    let out = reassemble(&psi0, &target, 0)?;
    Ok(add_noise(&out, noise, rng))
}

/// Adds i.i.d. complex Gaussian noise (std `awgn_sigma` per quadrature) to every sample.
pub fn add_noise<R: Rng + ?Sized>(sig: &StateSignal, noise: &NoiseModel, rng: &mut R) -> StateSignal {
    let mut out = sig.clone();
    if noise.awgn_sigma > 0.0 {
        let dist = Normal::new(0.0, noise.awgn_sigma).expect("finite sigma");
        for s in out.samples.iter_mut() {
            let re = dist.sample(rng);
            let im = dist.sample(rng);
            *s += c(re, im);
        }
    }
    out
}

/// RMS reading including meter error.
pub fn rms<R: Rng + ?Sized>(sig: &StateSignal, noise: &NoiseModel, rng: &mut R) -> f64 {
    let v = sig.rms_exact();
    if noise.rms_meter_error_sigma > 0.0 {
        (v * (1.0 + normal(rng, noise.rms_meter_error_sigma))).max(0.0)
    } else {
        v
    }
}

/// Probability of outcome 0 on `qubit` from the two RMS readings, with both branches.
fn measurement_split<R: Rng + ?Sized>(
    sig: &StateSignal,
    qubit: usize,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<(f64, StateSignal, StateSignal)> {
    let (psi0, psi1) = partial_project(sig, qubit)?;
    let v0 = rms(&psi0, noise, rng);
    let v1 = rms(&psi1, noise, rng);
    let total = v0 * v0 + v1 * v1;
    if !(total > 1e-24) {
        return Err(Error::DegenerateState);
    }
    Ok((v0 * v0 / total, psi0, psi1))
}

fn collapse(branch: &StateSignal, qubit: usize, bit: u8) -> Result<StateSignal> {
    let zero = StateSignal {
        samples: vec![c(0.0, 0.0); branch.samples.len()],
        config: branch.config,
        active: branch.active,
    };
    let norm = branch.rms_exact();
    if norm == 0.0 {
        return Err(Error::DegenerateState);
    }
    let joined = if bit == 0 {
        reassemble(branch, &zero, qubit)?
    } else {
        reassemble(&zero, branch, qubit)?
    };
    Ok(joined.scaled(1.0 / norm))
}

/// Probability `v₀²/(v₀²+v₁²)` of reading 0 on `qubit`.
pub fn outcome_probability<R: Rng + ?Sized>(
    sig: &StateSignal,
    qubit: usize,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<f64> {
    measurement_split(sig, qubit, noise, rng).map(|(p, _, _)| p)
}

/// Measures one qubit: draws `u ~ U[0,1)`, reads 0 iff `u ≤ p`, and returns the
/// surviving branch re-attached to its carrier at unit RMS.
pub fn measure_qubit<R: Rng + ?Sized>(
    sig: &StateSignal,
    qubit: usize,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<(u8, StateSignal)> {
    let (p, psi0, psi1) = measurement_split(sig, qubit, noise, rng)?;
    let u: f64 = rng.random();
    let mut bit = if u <= p { 0 } else { 1 };
    // a zero-RMS branch can only be drawn on the measure-zero edge u == p ∈ {0, 1}
    if bit == 0 && psi0.rms_exact() == 0.0 {
        bit = 1;
    } else if bit == 1 && psi1.rms_exact() == 0.0 {
        bit = 0;
    }
    let collapsed = if bit == 0 {
        collapse(&psi0, qubit, 0)?
    } else {
        collapse(&psi1, qubit, 1)?
    };
    Ok((bit, collapsed))
}

/// Measures qubits 0..n-1 in order; returns the outcome as a little-endian basis index.
pub fn measure_all<R: Rng + ?Sized>(sig: &StateSignal, noise: &NoiseModel, rng: &mut R) -> Result<(usize, StateSignal)> {
    let mut state = sig.clone();
    let mut index = 0usize;
    for q in 0..sig.config.qubit_count {
        let (bit, next) = measure_qubit(&state, q, noise, rng)?;
        index |= (bit as usize) << q;
        state = next;
    }
    Ok((index, state))
}

/// Joint outcome distribution of sequentially measuring qubits 0..n-1, computed
/// from the RMS probabilities instead of sampled draws (infinite-shot limit).
pub fn outcome_distribution<R: Rng + ?Sized>(sig: &StateSignal, noise: &NoiseModel, rng: &mut R) -> Result<Vec<f64>> {
    let n = sig.config.qubit_count;
    let mut probs = vec![0.0; 1 << n];
    fn walk<R: Rng + ?Sized>(
        state: &StateSignal,
        qubit: usize,
        prefix: usize,
        weight: f64,
        probs: &mut [f64],
        noise: &NoiseModel,
        rng: &mut R,
    ) -> Result<()> {
        if qubit == state.config.qubit_count {
            probs[prefix] += weight;
            return Ok(());
        }
        let (p, psi0, psi1) = measurement_split(state, qubit, noise, rng)?;
        for (bit, pb, branch) in [(0u8, p, &psi0), (1u8, 1.0 - p, &psi1)] {
            if pb <= 0.0 || branch.rms_exact() == 0.0 {
                continue;
            }
            let next = collapse(branch, qubit, bit)?;
            walk(&next, qubit + 1, prefix | (bit as usize) << qubit, weight * pb, probs, noise, rng)?;
        }
        Ok(())
    }
    walk(sig, 0, 0, 1.0, &mut probs, noise, rng)?;
    Ok(probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::gates;

    fn cfg(n: usize) -> SignalConfig {
        SignalConfig::new(1000.0, n).unwrap()
    }

    fn amps(v: &[(f64, f64)]) -> AmplitudeVector {
        AmplitudeVector::new(v.iter().map(|&(r, i)| c(r, i)).collect()).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SignalConfig::new(1000.0, 0).is_err());
        assert!(SignalConfig::new(1000.0, 4).is_err());
        assert!(SignalConfig::new(-1.0, 1).is_err());
        assert!(SignalConfig::with_samples(1000.0, 2, 4).is_err());
        assert!(SignalConfig::with_samples(1000.0, 2, 24).is_err());
        assert!(SignalConfig::with_samples(1000.0, 2, 8).is_ok());
        assert_eq!(cfg(2).samples_per_period, 128);
        assert!((cfg(2).omega(1) - 2.0 * cfg(2).omega(0)).abs() < 1e-9);
    }

    #[test]
    fn basis_zero_and_one_are_conjugate_unit_phasors() {
        let c1 = cfg(1);
        let z = basis_signal(0, &c1).unwrap();
        let o = basis_signal(1, &c1).unwrap();
        for (j, (a, b)) in z.samples().iter().zip(o.samples()).enumerate() {
            let t = c1.sample_times()[j];
            assert!((a.norm() - 1.0).abs() < 1e-12);
            assert!((a - c(0.0, c1.omega(0) * t).exp()).norm() < 1e-12);
            assert!((b - a.conj()).norm() < 1e-15);
        }
        assert!(basis_signal(2, &c1).is_err());
    }

    #[test]
    fn basis_two_of_two_qubits() {
        let c2 = cfg(2);
        let s = basis_signal(2, &c2).unwrap();
        for (j, v) in s.samples().iter().enumerate() {
            let t = c2.sample_times()[j];
            let expect = c(0.0, -c2.omega(1) * t).exp() * c(0.0, c2.omega(0) * t).exp();
            assert!((v - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn orthonormal_basis_up_to_three_qubits() {
        for n in 1..=3 {
            let c = cfg(n);
            let basis: Vec<_> = (0..1 << n).map(|x| basis_signal(x, &c).unwrap()).collect();
            for (x, a) in basis.iter().enumerate() {
                for (y, b) in basis.iter().enumerate() {
                    let ip = inner_product(a, b).unwrap();
                    let expect = if x == y { 1.0 } else { 0.0 };
                    assert!((ip - crate::linalg::c(expect, 0.0)).norm() < 1e-12, "n={n} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn equal_superposition_is_scaled_cosine() {
        let c1 = cfg(1);
        let h = 0.5f64.sqrt();
        let s = synthesize(&amps(&[(h, 0.0), (h, 0.0)]), &c1).unwrap();
        for (j, v) in s.samples().iter().enumerate() {
            let t = c1.sample_times()[j];
            assert!((v.re - 2f64.sqrt() * (c1.omega(0) * t).cos()).abs() < 1e-12);
            assert!(v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn synthesize_rejects_unnormalized() {
        assert!(synthesize(&amps(&[(1.0, 0.0), (1.0, 0.0)]), &cfg(1)).is_err());
        assert!(synthesize_unnormalized(&amps(&[(1.0, 0.0), (1.0, 0.0)]), &cfg(1)).is_ok());
        assert!(synthesize(&amps(&[(1.0, 0.0), (0.0, 0.0)]), &cfg(2)).is_err());
    }

    #[test]
    fn singlet_inner_products() {
        let h = 0.5f64.sqrt();
        let c2 = cfg(2);
        let s = synthesize(&amps(&[(0.0, 0.0), (h, 0.0), (-h, 0.0), (0.0, 0.0)]), &c2).unwrap();
        let p1 = inner_product(&basis_signal(1, &c2).unwrap(), &s).unwrap();
        let p2 = inner_product(&basis_signal(2, &c2).unwrap(), &s).unwrap();
        assert!((p1 - crate::linalg::c(h, 0.0)).norm() < 1e-12);
        assert!((p2 - crate::linalg::c(-h, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn mismatched_configs_rejected() {
        let a = basis_signal(0, &cfg(1)).unwrap();
        let b = basis_signal(0, &cfg(2)).unwrap();
        assert!(inner_product(&a, &b).is_err());
    }

    #[test]
    fn decompose_basis() {
        let d = decompose(&basis_signal(3, &cfg(2)).unwrap());
        for (x, a) in d.entries().iter().enumerate() {
            let e = if x == 3 { 1.0 } else { 0.0 };
            assert!((a - crate::linalg::c(e, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_projection_of_zero_state() {
        let (p0, p1) = partial_project(&basis_signal(0, &cfg(1)).unwrap(), 0).unwrap();
        assert!(p0.active_qubits().is_empty());
        for v in p0.samples() {
            assert!((v - crate::linalg::c(1.0, 0.0)).norm() < 1e-12);
        }
        assert!(p1.rms_exact() < 1e-15);
        assert!(partial_project(&basis_signal(0, &cfg(1)).unwrap(), 1).is_err());
    }

    #[test]
    fn partial_projection_of_singlet() {
        let h = 0.5f64.sqrt();
        let s = synthesize(&amps(&[(0.0, 0.0), (h, 0.0), (-h, 0.0), (0.0, 0.0)]), &cfg(2)).unwrap();
        let (p0, p1) = partial_project(&s, 0).unwrap();
        // qubit 0 = 0 leaves qubit 1 = 1 with amplitude -1/√2
        let a0 = decompose(&p0);
        let a1 = decompose(&p1);
        assert!((a0.entries()[1] - crate::linalg::c(-h, 0.0)).norm() < 1e-12);
        assert!(a0.entries()[0].norm() < 1e-12);
        assert!((a1.entries()[0] - crate::linalg::c(h, 0.0)).norm() < 1e-12);
        assert!(a1.entries()[1].norm() < 1e-12);
        let back = reassemble(&p0, &p1, 0).unwrap();
        for (a, b) in back.samples().iter().zip(s.samples()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn identity_gate_is_samplewise_identity() {
        let mut rng = crate::rng::seeded(0);
        let s = synthesize(&amps(&[(0.6, 0.0), (0.0, 0.8)]), &cfg(1)).unwrap();
        let out = apply_1q_gate(&s, &gates::identity(), 0, &NoiseModel::ideal(), &mut rng).unwrap();
        for (a, b) in out.samples().iter().zip(s.samples()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn hadamard_and_x() {
        let mut rng = crate::rng::seeded(0);
        let h = 0.5f64.sqrt();
        let out = apply_1q_gate(&basis_signal(0, &cfg(1)).unwrap(), &gates::hadamard(), 0, &NoiseModel::ideal(), &mut rng)
            .unwrap();
        let a = decompose(&out);
        assert!((a.entries()[0].re - h).abs() < 1e-12 && (a.entries()[1].re - h).abs() < 1e-12);
        let out = apply_1q_gate(&basis_signal(0, &cfg(2)).unwrap(), &gates::pauli_x(), 0, &NoiseModel::ideal(), &mut rng)
            .unwrap();
        let a = decompose(&out);
        assert!((a.entries()[1].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_unitary_gate_rejected() {
        let mut rng = crate::rng::seeded(0);
        let m = CMatrix::identity(2, 2) * crate::linalg::c(2.0, 0.0);
        let s = basis_signal(0, &cfg(1)).unwrap();
        assert!(matches!(
            apply_1q_gate(&s, &m, 0, &NoiseModel::ideal(), &mut rng),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn controlled_not_truth_table_and_bell_state() {
        let mut rng = crate::rng::seeded(0);
        let c2 = cfg(2);
        let x = gates::pauli_x();
        // control is qubit 0 (bit 0 of the index)
        for (input, expect) in [(0, 0), (1, 3), (2, 2), (3, 1)] {
            let out = apply_controlled_gate(&basis_signal(input, &c2).unwrap(), &x, &NoiseModel::ideal(), &mut rng).unwrap();
            let a = decompose(&out);
            assert!((a.entries()[expect].re - 1.0).abs() < 1e-12, "{input} -> {expect}");
        }
        let plus = apply_1q_gate(&basis_signal(0, &c2).unwrap(), &gates::hadamard(), 0, &NoiseModel::ideal(), &mut rng).unwrap();
        let bell = decompose(&apply_controlled_gate(&plus, &x, &NoiseModel::ideal(), &mut rng).unwrap());
        let h = 0.5f64.sqrt();
        for (k, e) in [h, 0.0, 0.0, h].iter().enumerate() {
            assert!((bell.entries()[k] - crate::linalg::c(*e, 0.0)).norm() < 1e-12);
        }
        let one = basis_signal(0, &cfg(1)).unwrap();
        assert!(matches!(
            apply_controlled_gate(&one, &x, &NoiseModel::ideal(), &mut rng),
            Err(Error::UnsupportedConfiguration(_))
        ));
    }

    #[test]
    fn rms_values() {
        let mut rng = crate::rng::seeded(0);
        let n = NoiseModel::ideal();
        assert!((rms(&basis_signal(1, &cfg(2)).unwrap(), &n, &mut rng) - 1.0).abs() < 1e-12);
        assert_eq!(rms(&StateSignal::zeros(&cfg(1)), &n, &mut rng), 0.0);
        let h = 0.5f64.sqrt();
        let plus = synthesize(&amps(&[(h, 0.0), (h, 0.0)]), &cfg(1)).unwrap();
        let (p0, _) = partial_project(&plus, 0).unwrap();
        assert!((rms(&p0, &n, &mut rng) - h).abs() < 1e-12);
    }

    #[test]
    fn measurement_of_basis_and_biased_state() {
        let mut rng = crate::rng::seeded(0);
        let n = NoiseModel::ideal();
        let zero = basis_signal(0, &cfg(1)).unwrap();
        for _ in 0..100 {
            let (b, col) = measure_qubit(&zero, 0, &n, &mut rng).unwrap();
            assert_eq!(b, 0);
            assert!((decompose(&col).entries()[0].re - 1.0).abs() < 1e-12);
        }
        let biased = synthesize(&amps(&[(0.3f64.sqrt(), 0.0), (0.7f64.sqrt(), 0.0)]), &cfg(1)).unwrap();
        let p = outcome_probability(&biased, 0, &n, &mut rng).unwrap();
        assert!((p - 0.3).abs() < 1e-12);
        assert!(matches!(
            measure_qubit(&StateSignal::zeros(&cfg(1)), 0, &n, &mut rng),
            Err(Error::DegenerateState)
        ));
    }

    #[test]
    fn plus_state_statistics() {
        let mut rng = crate::rng::seeded(42);
        let n = NoiseModel::ideal();
        let h = 0.5f64.sqrt();
        let plus = synthesize(&amps(&[(h, 0.0), (h, 0.0)]), &cfg(1)).unwrap();
        let trials = 100_000;
        let zeros = (0..trials)
            .filter(|_| measure_qubit(&plus, 0, &n, &mut rng).unwrap().0 == 0)
            .count();
        assert!((zeros as f64 / trials as f64 - 0.5).abs() < 0.006);
    }

    #[test]
    fn collapsed_state_has_unit_rms() {
        let mut rng = crate::rng::seeded(5);
        let h = 0.5f64.sqrt();
        let s = synthesize(&amps(&[(h, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, h)]), &cfg(2)).unwrap();
        let (b, col) = measure_qubit(&s, 0, &NoiseModel::ideal(), &mut rng).unwrap();
        assert!((col.rms_exact() - 1.0).abs() < 1e-12);
        let a = decompose(&col);
        let idx = if b == 0 { 0 } else { 3 };
        assert!((a.entries()[idx].norm() - 1.0).abs() < 1e-12);
        let (b2, _) = measure_qubit(&col, 1, &NoiseModel::ideal(), &mut rng).unwrap();
        assert_eq!(b, b2);
    }

    #[test]
    fn zero_noise_is_identity_and_awgn_power() {
        let mut rng = crate::rng::seeded(1);
        let s = basis_signal(0, &cfg(1)).unwrap();
        assert_eq!(add_noise(&s, &NoiseModel::ideal(), &mut rng), s);
        let sigma = 0.1;
        let noise = NoiseModel {
            awgn_sigma: sigma,
            ..NoiseModel::ideal()
        };
        let trials = 10_000;
        let mean: f64 = (0..trials)
            .map(|_| {
                let noisy = add_noise(&s, &noise, &mut rng);
                let diff: Vec<_> = noisy.samples().iter().zip(s.samples()).map(|(a, b)| a - b).collect();
                StateSignal::from_samples(diff, &cfg(1)).unwrap().rms_exact().powi(2)
            })
            .sum::<f64>()
            / trials as f64;
        assert!((mean / (2.0 * sigma * sigma) - 1.0).abs() < 0.05);
    }

    #[test]
    fn noisy_decomposition_off_diagonal_scale() {
        let mut rng = crate::rng::seeded(2);
        let c1 = cfg(1);
        let sigma = 0.2;
        let noise = NoiseModel {
            awgn_sigma: sigma,
            ..NoiseModel::ideal()
        };
        let s = basis_signal(0, &c1).unwrap();
        let trials = 4000;
        let mut norms = 0.0;
        let mut leak = 0.0;
        for _ in 0..trials {
            let a = decompose(&add_noise(&s, &noise, &mut rng));
            leak += a.entries()[1].norm_sqr();
            norms += (a.norm() - 1.0).abs();
        }
        // each amplitude picks up complex noise of variance 2σ²/S
        let expect = 2.0 * sigma * sigma / c1.samples_per_period as f64;
        assert!((leak / trials as f64 / expect - 1.0).abs() < 0.1);
        assert!(norms / trials as f64 > 0.0);
    }

    #[test]
    fn noisy_gates_are_reproducible() {
        let noise = NoiseModel {
            awgn_sigma: 0.05,
            gate_amplitude_error_sigma: 0.01,
            gate_phase_error_sigma: 0.01,
            rms_meter_error_sigma: 0.01,
        };
        let run = || {
            let mut rng = crate::rng::seeded(77);
            let s = basis_signal(0, &cfg(2)).unwrap();
            let s = apply_1q_gate(&s, &gates::hadamard(), 0, &noise, &mut rng).unwrap();
            let s = apply_controlled_gate(&s, &gates::pauli_x(), &noise, &mut rng).unwrap();
            measure_all(&s, &noise, &mut rng).unwrap()
        };
        let (a, sa) = run();
        let (b, sb) = run();
        assert_eq!(a, b);
        assert_eq!(sa, sb);
    }

    #[test]
    fn exact_distribution_matches_amplitudes() {
        let mut rng = crate::rng::seeded(0);
        let s = synthesize(&amps(&[(0.5, 0.0), (0.0, 0.5), (-0.5, 0.0), (0.5, 0.0)]), &cfg(2)).unwrap();
        let d = outcome_distribution(&s, &NoiseModel::ideal(), &mut rng).unwrap();
        for p in d {
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn noise_model_validation() {
        assert!(NoiseModel::ideal().validate().is_ok());
        let bad = NoiseModel {
            awgn_sigma: -1.0,
            ..NoiseModel::ideal()
        };
        assert!(bad.validate().is_err());
        let nan = NoiseModel {
            gate_phase_error_sigma: f64::NAN,
            ..NoiseModel::ideal()
        };
        assert!(nan.validate().is_err());
    }
}
