//! Dense linear algebra for one- and two-qubit objects.

pub mod chi;
pub mod fidelity;
pub mod gates;
pub mod pauli;
pub mod ptm;
pub mod state;

pub use chi::ChiMatrix;
pub use fidelity::{gate_fidelity, process_fidelity, state_fidelity, GateFidelity};
pub use pauli::{pauli_tensor, Pauli};
pub use ptm::PauliTransferMatrix;
pub use state::{AmplitudeVector, DensityMatrix};
