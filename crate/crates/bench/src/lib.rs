//! Fixed workloads shared by the benchmarks.

use analogq::channels::{depolarizing_chi, DepolarizingParam, FidelityKind, IterationSeries, Predictor};
use analogq::qmath::gates;
use analogq::rng::seeded;
use analogq::signal::{Circuit, NoiseModel, SignalConfig};
use analogq::tomography::{estimate_pauli_expectations, expected_counts, CountsTable, PauliMeanTable, Shots, StatePrep};

/// Bell-pair preparation on two qubits.
pub fn bell_circuit() -> Circuit {
    Circuit::new().single(gates::hadamard(), 0).controlled(gates::pauli_x())
}

/// Noisy identity-gate counts at `shots` per cell.
pub fn depolarized_counts(p: f64, shots: u64) -> CountsTable {
    let chi = depolarizing_chi(DepolarizingParam::new(p).expect("p in range"), &gates::identity()).expect("valid chi");
    expected_counts(&chi, shots).expect("valid counts")
}

/// Sampled Pauli means of the Bell state.
pub fn bell_table(shots: u64) -> PauliMeanTable {
    let cfg = SignalConfig::new(1000.0, 2).expect("valid config");
    estimate_pauli_expectations(
        &StatePrep::Circuit(bell_circuit()),
        &cfg,
        &NoiseModel::ideal(),
        Shots::Finite(shots),
        &mut seeded(1),
    )
    .expect("estimation succeeds")
}

/// Noise-free 90-point process-fidelity series of a depolarizing channel.
pub fn depolarizing_series(p: f64) -> IterationSeries {
    let points: Vec<(usize, f64)> = (1..=90).map(|n| (n, Predictor::ProcessForm.predict(p, n))).collect();
    IterationSeries::from_points(FidelityKind::ProcessFidelity, &points).expect("valid series")
}
