use rand::Rng;

use super::{apply_1q_gate, apply_controlled_gate, basis_signal, NoiseModel, SignalConfig, StateSignal};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::qmath::gates::check_unitary;

/// One device operation.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    Single { gate: CMatrix, qubit: usize },
    /// Controlled-U, control qubit 0, target qubit 1.
    Controlled { gate: CMatrix },
}

/// A gate sequence executed on the signal engine.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(mut self, gate: CMatrix, qubit: usize) -> Self {
        self.ops.push(GateOp::Single { gate, qubit });
        self
    }

    pub fn controlled(mut self, gate: CMatrix) -> Self {
        self.ops.push(GateOp::Controlled { gate });
        self
    }

    pub fn push(&mut self, op: GateOp) {
        self.ops.push(op);
    }

    /// `self` followed by `other`.
    pub fn then(mut self, other: &Circuit) -> Self {
        self.ops.extend(other.ops.iter().cloned());
        self
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Reversed sequence of adjoint gates.
    pub fn inverse(&self) -> Self {
        let ops = self
            .ops
            .iter()
            .rev()
            .map(|op| match op {
                GateOp::Single { gate, qubit } => GateOp::Single {
                    gate: gate.adjoint(),
                    qubit: *qubit,
                },
                GateOp::Controlled { gate } => GateOp::Controlled { gate: gate.adjoint() },
            })
            .collect();
        Self { ops }
    }

    pub fn validate(&self, qubits: usize) -> Result<()> {
        for op in &self.ops {
            match op {
                GateOp::Single { gate, qubit } => {
                    check_unitary(gate)?;
                    if *qubit >= qubits {
                        return Err(Error::Domain(format!("gate on qubit {qubit} in a {qubits}-qubit circuit")));
                    }
                }
                GateOp::Controlled { gate } => {
                    check_unitary(gate)?;
                    if qubits != 2 {
                        return Err(Error::UnsupportedConfiguration(
                            "controlled gates need a two-qubit register".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn run<R: Rng + ?Sized>(&self, sig: &StateSignal, noise: &NoiseModel, rng: &mut R) -> Result<StateSignal> {
        let mut state = sig.clone();
        for op in &self.ops {
            state = match op {
                GateOp::Single { gate, qubit } => apply_1q_gate(&state, gate, *qubit, noise, rng)?,
                GateOp::Controlled { gate } => apply_controlled_gate(&state, gate, noise, rng)?,
            };
        }
        Ok(state)
    }

    /// Runs the circuit on `|0…0⟩`.
    pub fn prepare<R: Rng + ?Sized>(&self, config: &SignalConfig, noise: &NoiseModel, rng: &mut R) -> Result<StateSignal> {
        self.run(&basis_signal(0, config)?, noise, rng)
    }
}
