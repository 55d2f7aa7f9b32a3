//! Scans the additive-noise level and prints, for each candidate, the Deutsch
//! success rate, the identity-gate fidelities from process tomography and the
//! singlet state-tomography fidelity. The shipped `calibrated` preset is the
//! row closest to a 96% Deutsch success rate.
//!
//! ```text
//! cargo run --release -p analogq-cli --example calibrate [-- SIGMA...]
//! ```

use analogq::qmath::{gate_fidelity, gates, process_fidelity, state_fidelity};
use analogq::rng::seeded;
use analogq::signal::{Circuit, NoiseModel, SignalConfig};
use analogq::tomography::{estimate_pauli_expectations, qpt_collect_counts, qpt_mle, qst_mle, Shots};
use analogq_cli::commands::deutsch::success_counts;
use analogq_cli::config::StateSpec;

const DEUTSCH_TRIALS: u64 = 4000;
const QPT_SHOTS: u64 = 10_000;
const QST_SHOTS: u64 = 2000;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sigmas: Vec<f64> = {
        let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
        if args.is_empty() {
            (1..=12).map(|k| 0.05 * k as f64).collect()
        } else {
            args
        }
    };
    let two = SignalConfig::new(1000.0, 2)?;
    let one = SignalConfig::new(1000.0, 1)?;
    let (singlet, target) = StateSpec::Named("singlet".into()).resolve()?;
    println!("awgn_sigma  deutsch  qpt_gate_F  qpt_process_F  qst_F");
    for sigma in sigmas {
        let noise = NoiseModel {
            awgn_sigma: sigma,
            gate_amplitude_error_sigma: 0.01,
            gate_phase_error_sigma: 0.01,
            rms_meter_error_sigma: 0.01,
        };
        let hits = success_counts(&noise, &two, DEUTSCH_TRIALS, 1)?;
        let deutsch = hits.iter().sum::<u64>() as f64 / (4 * DEUTSCH_TRIALS) as f64;
        let channel = Circuit::new().single(gates::identity(), 0);
        let counts = qpt_collect_counts(&channel, &one, &noise, Shots::Finite(QPT_SHOTS), &mut seeded(2))?;
        let chi = qpt_mle(&counts)?.chi;
        let gf = gate_fidelity(&chi, &gates::identity())?.value;
        let pf = process_fidelity(&chi, &gates::identity());
        let table = estimate_pauli_expectations(&singlet, &two, &noise, Shots::Finite(QST_SHOTS), &mut seeded(3))?;
        let qf = state_fidelity(&qst_mle(&table)?.rho, &target)?;
        println!("{sigma:10.4}  {deutsch:7.4}  {gf:10.5}  {pf:13.5}  {qf:.5}");
    }
    Ok(())
}
