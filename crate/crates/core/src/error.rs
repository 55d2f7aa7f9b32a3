use thiserror::Error;

/// Errors raised by the emulator, tomography and fitting routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An input object violates one of its invariants (normalization, unitarity, PSD, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// A measurement was requested on a signal with (numerically) zero norm.
    #[error("degenerate state: both partial projections have zero RMS")]
    DegenerateState,

    /// The operation is not available for this register size.
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    /// A minimizer did not reach its tolerances. Carries the best iterate found.
    #[error("optimizer failed ({reason}); best objective {best_value:e}")]
    Optimizer {
        reason: String,
        best_value: f64,
        best_point: Vec<f64>,
    },

    /// A channel iteration produced an invalid density matrix.
    #[error("invariant violated at iteration {iteration}: {detail}")]
    Iteration { iteration: usize, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
