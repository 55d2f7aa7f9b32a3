//! State and process tomography.

mod cholesky;
mod qpt;
mod qst;
mod tables;

pub use cholesky::{pack, product_from_params, CholeskyFactor};
pub use qpt::{
    expected_counts, predicted_probabilities, qpt_collect_counts, qpt_collect_series, qpt_linear_inversion, qpt_mle,
    qpt_mle_with, qpt_objective, QptEstimate, EXACT_SHOTS,
};
pub use qst::{
    estimate_pauli_expectations, exact_pauli_means, measurement_rotation, qst_linear_inversion, qst_mle, qst_mle_with,
    qst_objective, QstEstimate, StatePrep,
};
pub use tables::{parse_setting, setting_index, setting_label, CountsTable, PauliMeanTable, ProbeState, Provenance};

/// Shots per measurement setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    Finite(u64),
    /// Infinite-shot limit: outcome probabilities are used directly. Device
    /// noise, if any, is still applied once.
    Exact,
}

impl Shots {
    pub fn count(self) -> Option<u64> {
        match self {
            Shots::Finite(n) => Some(n),
            Shots::Exact => None,
        }
    }
}
