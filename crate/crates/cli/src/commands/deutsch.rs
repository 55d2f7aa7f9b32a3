//! Deutsch's algorithm on the two-qubit register.
//!
//! Qubit 0 holds the query bit x, qubit 1 the answer bit y. The register starts
//! in |x=0, y=1⟩, both qubits get a Hadamard, the oracle maps
//! |x, y⟩ → |x, y ⊕ f(x)⟩, and a final Hadamard on x leaves x = 0 for constant f
//! and x = 1 for balanced f. Oracle decompositions:
//!
//! | f        | gates                        |
//! |----------|------------------------------|
//! | 0        | none                         |
//! | 1        | X on y                       |
//! | x        | CNOT (x controls y)          |
//! | 1 − x    | CNOT, then X on y            |

use analogq::qmath::gates;
use analogq::rng::substream;
use analogq::signal::{basis_signal, measure_qubit, Circuit, NoiseModel, SignalConfig};
use rayon::prelude::*;
use serde::Serialize;

use super::{Echo, Outcome};
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::output;
use crate::stats::Proportion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Oracle {
    ConstantZero,
    ConstantOne,
    Identity,
    Negation,
}

impl Oracle {
    pub const ALL: [Oracle; 4] = [Oracle::ConstantZero, Oracle::ConstantOne, Oracle::Identity, Oracle::Negation];

    pub fn is_constant(self) -> bool {
        matches!(self, Oracle::ConstantZero | Oracle::ConstantOne)
    }

    fn gates(self) -> Circuit {
        match self {
            Oracle::ConstantZero => Circuit::new(),
            Oracle::ConstantOne => Circuit::new().single(gates::pauli_x(), 1),
            Oracle::Identity => Circuit::new().controlled(gates::pauli_x()),
            Oracle::Negation => Circuit::new().controlled(gates::pauli_x()).single(gates::pauli_x(), 1),
        }
    }

    /// Full program: preparation, oracle, final Hadamard on the query bit.
    pub fn program(self) -> Circuit {
        Circuit::new()
            .single(gates::pauli_x(), 1)
            .single(gates::hadamard(), 0)
            .single(gates::hadamard(), 1)
            .then(&self.gates())
            .single(gates::hadamard(), 0)
    }
}

const CHUNK: u64 = 256;

/// Number of correct classifications out of `trials` runs of each oracle.
pub fn success_counts(noise: &NoiseModel, signal: &SignalConfig, trials: u64, seed: u64) -> Result<[u64; 4]> {
    let zero = basis_signal(0, signal)?;
    let chunks = trials.div_ceil(CHUNK);
    let jobs: Vec<(usize, u64)> = (0..4).flat_map(|o| (0..chunks).map(move |j| (o, j))).collect();
    let partial: Vec<analogq::Result<(usize, u64)>> = jobs
        .par_iter()
        .map(|&(o, j)| {
            let oracle = Oracle::ALL[o];
            let program = oracle.program();
            let want = if oracle.is_constant() { 0 } else { 1 };
            let mut rng = substream(seed, ((o as u64) << 40) | j);
            let mut hits = 0;
            for _ in 0..CHUNK.min(trials - j * CHUNK) {
                let sig = program.run(&zero, noise, &mut rng)?;
                let (bit, _) = measure_qubit(&sig, 0, noise, &mut rng)?;
                if bit == want {
                    hits += 1;
                }
            }
            Ok((o, hits))
        })
        .collect();
    let mut out = [0u64; 4];
    for r in partial {
        let (o, hits) = r?;
        out[o] += hits;
    }
    Ok(out)
}

#[derive(Serialize)]
struct OracleResult {
    oracle: Oracle,
    constant: bool,
    #[serde(flatten)]
    success: Proportion,
}

#[derive(Serialize)]
struct DeutschReport {
    #[serde(flatten)]
    echo: Echo,
    trials_per_oracle: u64,
    oracles: Vec<OracleResult>,
    aggregate: Proportion,
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let echo = Echo::new(cfg)?;
    let counts = success_counts(&echo.noise_model, &cfg.signal_config(2)?, cfg.trials, cfg.seed)?;
    let oracles: Vec<OracleResult> = Oracle::ALL
        .iter()
        .zip(counts)
        .map(|(&oracle, hits)| OracleResult {
            oracle,
            constant: oracle.is_constant(),
            success: Proportion::new(hits, cfg.trials),
        })
        .collect();
    let aggregate = Proportion::new(counts.iter().sum(), 4 * cfg.trials);
    output::ensure_dir(&cfg.output_dir)?;
    let path = output::write_json(
        &cfg.output_dir,
        "deutsch.json",
        &DeutschReport {
            echo,
            trials_per_oracle: cfg.trials,
            oracles,
            aggregate,
        },
    )?;
    Ok(Outcome {
        files: vec![path],
        summary: vec![format!(
            "aggregate success {:.4} (95% CI {:.4}-{:.4})",
            aggregate.rate, aggregate.ci_low, aggregate.ci_high
        )],
    })
}
