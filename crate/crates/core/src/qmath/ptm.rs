//! Pauli transfer matrices: the real 4x4 representation `R_kl = ½ Tr(σ_k E(σ_l))`.
//!
//! Composition of channels is matrix multiplication, which makes long channel
//! iterations cheap compared with repeated χ application.

use nalgebra::{Matrix4, Vector3, Vector4};

use super::chi::ChiMatrix;
use super::pauli::pauli_basis;
use crate::error::Result;
use crate::linalg::{c, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTransferMatrix(pub Matrix4<f64>);

impl PauliTransferMatrix {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn from_chi(chi: &ChiMatrix) -> Self {
        let sig = pauli_basis();
        let mut r = Matrix4::zeros();
        for l in 0..4 {
            let out = chi.apply_raw(&sig[l]);
            for k in 0..4 {
                r[(k, l)] = 0.5 * (&sig[k] * &out).trace().re;
            }
        }
        Self(r)
    }

    pub fn from_unitary(u: &CMatrix) -> Self {
        let sig = pauli_basis();
        let mut r = Matrix4::zeros();
        for l in 0..4 {
            let out = u * &sig[l] * u.adjoint();
            for k in 0..4 {
                r[(k, l)] = 0.5 * (&sig[k] * &out).trace().re;
            }
        }
        Self(r)
    }

    pub fn to_chi(&self) -> Result<ChiMatrix> {
        let sig = pauli_basis();
        ChiMatrix::from_map(|m| {
            let mut out = CMatrix::zeros(2, 2);
            for l in 0..4 {
                let coef = (&sig[l] * m).trace() * 0.5;
                for k in 0..4 {
                    let w = self.0[(k, l)];
                    if w != 0.0 {
                        out += &sig[k] * (coef * c(w, 0.0));
                    }
                }
            }
            out
        })
    }

    /// `self` applied after `first`.
    pub fn then(&self, first: &Self) -> Self {
        Self(self.0 * first.0)
    }

    pub fn power(&self, n: usize) -> Self {
        let mut out = Matrix4::identity();
        for _ in 0..n {
            out = self.0 * out;
        }
        Self(out)
    }

    /// `Tr(R_Uᵀ R) / 4`, equal to `Tr(χ u u†)` for the target unitary's PTM `R_U`.
    pub fn process_fidelity(&self, target: &Self) -> f64 {
        (target.0.transpose() * self.0).trace() / 4.0
    }

    /// `⟨φ|E(ρ)|φ⟩` for pure input with Bloch vector `r` and pure reference with Bloch vector `s`.
    pub fn pure_overlap(&self, r: &Vector3<f64>, s: &Vector3<f64>) -> f64 {
        let input = Vector4::new(1.0, r.x, r.y, r.z);
        let reference = Vector4::new(1.0, s.x, s.y, s.z);
        0.5 * reference.dot(&(self.0 * input))
    }

    /// Bloch-vector rotation block of a unitary PTM.
    pub fn rotation_block(&self) -> nalgebra::Matrix3<f64> {
        self.0.fixed_view::<3, 3>(1, 1).into_owned()
    }
}
