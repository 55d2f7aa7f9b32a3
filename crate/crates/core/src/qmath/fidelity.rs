//! State, gate and process fidelities.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::chi::{unitary_pauli_vector, ChiMatrix};
use super::gates::check_unitary;
use super::ptm::PauliTransferMatrix;
use super::state::{AmplitudeVector, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::optimizer::{minimize, MinimizeOptions, ObjectiveSpec, Status};

/// `√⟨ψ|ρ|ψ⟩`.
pub fn state_fidelity(rho: &DensityMatrix, psi: &AmplitudeVector) -> Result<f64> {
    rho.validate()?;
    psi.check_normalized()?;
    if rho.dim() != psi.len() {
        return Err(Error::Domain("state and density matrix dimensions differ".into()));
    }
    Ok(rho.expectation_pure(psi).clamp(0.0, 1.0).sqrt())
}

/// Root Uhlmann fidelity `Tr √(√ρ σ √ρ)` of two PSD matrices.
pub fn uhlmann_fidelity(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    let root = linalg::psd_sqrt(rho)?;
    let inner = linalg::hermitian_part(&(&root * sigma * &root));
    Ok(linalg::psd_sqrt(&inner)?.trace().re)
}

/// Uhlmann fidelity between `E(ρ)` and `UρU†` for one input state.
pub fn channel_fidelity_at(chi: &ChiMatrix, u: &CMatrix, rho: &CMatrix) -> Result<f64> {
    let out = chi.apply_raw(rho);
    let ideal = u * rho * u.adjoint();
    uhlmann_fidelity(&out, &ideal)
}

/// `Tr(χ u u†)` where `u` is the Pauli coefficient vector of the target unitary.
pub fn process_fidelity(chi: &ChiMatrix, u: &CMatrix) -> f64 {
    let v = unitary_pauli_vector(u);
    (v.adjoint() * chi.matrix() * &v)[(0, 0)].re
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateFidelityOptions {
    pub theta_steps: usize,
    pub phi_steps: usize,
    /// Number of best grid points refined with Nelder-Mead (0 disables refinement).
    pub refine_starts: usize,
}

impl Default for GateFidelityOptions {
    fn default() -> Self {
        Self {
            theta_steps: 32,
            phi_steps: 64,
            refine_starts: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateFidelity {
    pub value: f64,
    /// Bloch angles of the minimizing pure input.
    pub theta: f64,
    pub phi: f64,
    /// False when the local refinement hit its budget.
    pub converged: bool,
}

pub fn bloch(theta: f64, phi: f64) -> Vector3<f64> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Vector3::new(st * cp, st * sp, ct)
}

/// Worst-case fidelity of the channel against the target unitary, minimized over pure inputs.
pub fn gate_fidelity(chi: &ChiMatrix, u: &CMatrix) -> Result<GateFidelity> {
    gate_fidelity_with(chi, u, &GateFidelityOptions::default())
}

pub fn gate_fidelity_with(chi: &ChiMatrix, u: &CMatrix, opts: &GateFidelityOptions) -> Result<GateFidelity> {
    chi.validate()?;
    check_unitary(u)?;
    let ptm = PauliTransferMatrix::from_chi(chi);
    let rot = PauliTransferMatrix::from_unitary(u).rotation_block();
    Ok(gate_fidelity_ptm(&ptm, &rot, opts))
}

/// Same minimization on precomputed transfer matrices (no validation).
pub fn gate_fidelity_ptm(
    ptm: &PauliTransferMatrix,
    target_rotation: &nalgebra::Matrix3<f64>,
    opts: &GateFidelityOptions,
) -> GateFidelity {
    let overlap = |theta: f64, phi: f64| {
        let r = bloch(theta, phi);
        ptm.pure_overlap(&r, &(target_rotation * r))
    };
    let nt = opts.theta_steps.max(2);
    let np = opts.phi_steps.max(1);
    let mut grid = Vec::with_capacity(nt * np);
    for i in 0..nt {
        let theta = std::f64::consts::PI * i as f64 / (nt - 1) as f64;
        for j in 0..np {
            let phi = std::f64::consts::TAU * j as f64 / np as f64;
            grid.push((overlap(theta, phi), theta, phi));
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (mut best, mut bt, mut bp) = grid[0];
    let mut converged = true;
    let nm = MinimizeOptions {
        max_evals: 4000,
        f_tol: 1e-15,
        x_tol: 1e-10,
        ..MinimizeOptions::nelder_mead(0.05)
    };
    for &(_, t0, p0) in grid.iter().take(opts.refine_starts) {
        let spec = ObjectiveSpec::new(2, |x: &[f64]| overlap(x[0], x[1]));
        if let Ok(m) = minimize(&spec, &[t0, p0], &nm) {
            if m.f < best {
                best = m.f;
                bt = m.x[0];
                bp = m.x[1];
                converged = m.status != Status::MaxEvals;
            }
        }
    }
    GateFidelity {
        value: best.clamp(0.0, 1.0).sqrt(),
        theta: bt,
        phi: bp,
        converged,
    }
}
