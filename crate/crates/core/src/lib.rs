//! Emulation of a small gate-based quantum computer with classical signals,
//! plus the tomography and channel-fitting tools used to characterize its errors.
//!
//! * [`signal`]: sampled-waveform registers, gates, noise and RMS-ratio measurement.
//! * [`qmath`]: Pauli bases, density and process matrices, fidelities.
//! * [`tomography`]: state and process tomography (linear inversion and maximum likelihood).
//! * [`channels`]: depolarizing channel algebra, forecasting and least-squares fits.
//! * [`optimizer`]: deterministic local minimizers.

pub mod channels;
pub mod error;
pub mod linalg;
pub mod optimizer;
pub mod qmath;
pub mod rng;
pub mod signal;
pub mod tomography;

pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use qmath::{AmplitudeVector, ChiMatrix, DensityMatrix, Pauli, PauliTransferMatrix};
pub use signal::{NoiseModel, SignalConfig, StateSignal};
