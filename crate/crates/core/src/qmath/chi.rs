//! Single-qubit process matrices in the Pauli basis.
//!
//! A channel acts as `E(ρ) = Σ_ij χ_ij σ_i ρ σ_j` with σ = (I, X, Y, Z).
//! A unitary `U = Σ u_i σ_i` (`u_i = Tr(σ_i U)/2`) has `χ = u u†`, which has unit trace.

use nalgebra::DVector;
use num_complex::Complex64;

use super::pauli::{pauli_basis, pauli_coefficients};
use super::state::{validate_density, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};

pub const CHI_TOL: f64 = 1e-9;
pub const TP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix {
    matrix: CMatrix,
}

impl ChiMatrix {
    /// Validates Hermiticity, positivity and trace preservation.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let chi = Self::new_unchecked(matrix)?;
        chi.validate()?;
        Ok(chi)
    }

    /// Checks only the shape.
    pub fn new_unchecked(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != 4 || matrix.ncols() != 4 {
            return Err(Error::Domain(format!(
                "chi matrix must be 4x4, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { matrix })
    }

    pub fn validate(&self) -> Result<()> {
        let herm = linalg::hermiticity_error(&self.matrix);
        if herm > CHI_TOL {
            return Err(Error::Validation(format!("chi not Hermitian (deviation {herm:e})")));
        }
        let min = linalg::min_eigenvalue(&self.matrix);
        if min < -CHI_TOL {
            return Err(Error::Validation(format!("chi not PSD (min eigenvalue {min:e})")));
        }
        let tp = self.tp_residual();
        if tp > TP_TOL {
            return Err(Error::Validation(format!("chi not trace preserving (residual {tp:e})")));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// The ideal identity process, `χ = e₁e₁†`.
    pub fn identity_process() -> Self {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = c(1.0, 0.0);
        Self { matrix: m }
    }

    /// Rank-one process matrix of a 2x2 unitary.
    pub fn from_unitary(u: &CMatrix) -> Result<Self> {
        super::gates::check_unitary(u)?;
        let v = unitary_pauli_vector(u);
        Ok(Self { matrix: &v * v.adjoint() })
    }

    /// `χ = Σ_k k k†` with `k` the Pauli coefficients of each Kraus operator.
    pub fn from_kraus(ops: &[CMatrix]) -> Result<Self> {
        let mut m = CMatrix::zeros(4, 4);
        for k in ops {
            if k.nrows() != 2 || k.ncols() != 2 {
                return Err(Error::Domain("Kraus operators must be 2x2".into()));
            }
            let v = DVector::from_column_slice(&pauli_coefficients(k));
            m += &v * v.adjoint();
        }
        Self::new(m)
    }

    /// Builds χ from the action of a linear map on 2x2 matrices.
    pub fn from_map<F: Fn(&CMatrix) -> CMatrix>(map: F) -> Result<Self> {
        let mut choi = CMatrix::zeros(4, 4);
        for a in 0..2 {
            for b in 0..2 {
                let mut unit = CMatrix::zeros(2, 2);
                unit[(a, b)] = c(1.0, 0.0);
                let out = map(&unit);
                choi += out.kronecker(&unit);
            }
        }
        Self::new_unchecked(chi_from_choi(&choi))
    }

    /// `Σ_ij χ_ij σ_j σ_i`; equals the identity for trace-preserving channels.
    pub fn tp_operator(&self) -> CMatrix {
        tp_operator(&self.matrix)
    }

    /// Largest elementwise deviation of [`Self::tp_operator`] from the identity.
    pub fn tp_residual(&self) -> f64 {
        let d = self.tp_operator() - CMatrix::identity(2, 2);
        d.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Applies the channel to an arbitrary 2x2 operator, no validation.
    pub fn apply_raw(&self, rho: &CMatrix) -> CMatrix {
        let sig = pauli_basis();
        let mut out = CMatrix::zeros(2, 2);
        for i in 0..4 {
            let left = &sig[i] * rho;
            for j in 0..4 {
                let w = self.matrix[(i, j)];
                if w == c(0.0, 0.0) {
                    continue;
                }
                out += (&left * &sig[j]) * w;
            }
        }
        out
    }

    /// Applies the channel to a single-qubit state.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != 2 {
            return Err(Error::Domain("chi channel acts on single-qubit states only".into()));
        }
        let tp = self.tp_residual();
        if tp > TP_TOL {
            return Err(Error::Validation(format!("chi not trace preserving (residual {tp:e})")));
        }
        let out = self.apply_raw(rho.matrix());
        validate_density(&out)?;
        Ok(DensityMatrix::new_unchecked(out))
    }

    /// Choi matrix `Σ_ab E(|a⟩⟨b|) ⊗ |a⟩⟨b|`.
    pub fn to_choi(&self) -> CMatrix {
        let v = vectorized_paulis();
        &v * &self.matrix * v.adjoint()
    }

    pub fn from_choi(choi: &CMatrix) -> Result<Self> {
        if choi.nrows() != 4 || choi.ncols() != 4 {
            return Err(Error::Domain("Choi matrix must be 4x4".into()));
        }
        Self::new_unchecked(chi_from_choi(choi))
    }

    /// Rescales a PSD matrix so that it describes a trace-preserving channel.
    ///
    /// The channel `E` is replaced by `ρ ↦ E(T^{-1/2} ρ T^{-1/2})` with
    /// `T = Σ_ij χ_ij σ_j σ_i`. This is a congruence `χ' = Cᵀ χ C̄`, so positivity
    /// is kept and `T' = I` exactly.
    pub fn trace_preserving_from(raw: &CMatrix) -> Result<Self> {
        if raw.nrows() != 4 || raw.ncols() != 4 {
            return Err(Error::Domain("chi matrix must be 4x4".into()));
        }
        let t = tp_operator(raw);
        let (vals, vecs) = linalg::hermitian_eigen(&t);
        if vals[0] <= 1e-300 || !vals.iter().all(|v| v.is_finite()) {
            return Err(Error::Validation(format!(
                "cannot normalize a channel with singular Σχσσ (eigenvalues {vals:?})"
            )));
        }
        let mut m = CMatrix::zeros(2, 2);
        for (k, &v) in vals.iter().enumerate() {
            let col = vecs.column(k);
            m += (&col * col.adjoint()).scale(1.0 / v.sqrt());
        }
        let sig = pauli_basis();
        // σ_i M = Σ_l coef[i][l] σ_l
        let coef = CMatrix::from_fn(4, 4, |i, l| (&sig[l] * &sig[i] * &m).trace() * 0.5);
        let chi = coef.transpose() * raw * coef.map(|z| z.conj());
        Self::new_unchecked(linalg::hermitian_part(&chi))
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

/// Pauli coefficient vector `u_i = Tr(σ_i U)/2`.
pub fn unitary_pauli_vector(u: &CMatrix) -> DVector<Complex64> {
    DVector::from_column_slice(&pauli_coefficients(u))
}

pub fn tp_operator(chi: &CMatrix) -> CMatrix {
    let sig = pauli_basis();
    let mut t = CMatrix::zeros(2, 2);
    for i in 0..4 {
        for j in 0..4 {
            t += (&sig[j] * &sig[i]) * chi[(i, j)];
        }
    }
    t
}

/// Columns are the row-major flattenings of σ_i.
fn vectorized_paulis() -> CMatrix {
    let sig = pauli_basis();
    CMatrix::from_fn(4, 4, |r, i| sig[i][(r / 2, r % 2)])
}

fn chi_from_choi(choi: &CMatrix) -> CMatrix {
    let v = vectorized_paulis();
    (v.adjoint() * choi * &v).scale(0.25)
}


/// JSON form: `{"re": [[...]; 4], "im": [[...]; 4]}`, row-major.
#[derive(serde::Serialize, serde::Deserialize)]
struct ChiWire {
    re: [[f64; 4]; 4],
    im: [[f64; 4]; 4],
}

impl serde::Serialize for ChiMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut w = ChiWire {
            re: [[0.0; 4]; 4],
            im: [[0.0; 4]; 4],
        };
        for i in 0..4 {
            for j in 0..4 {
                w.re[i][j] = self.matrix[(i, j)].re;
                w.im[i][j] = self.matrix[(i, j)].im;
            }
        }
        w.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for ChiMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = ChiWire::deserialize(d)?;
        let m = CMatrix::from_fn(4, 4, |i, j| c(w.re[i][j], w.im[i][j]));
        ChiMatrix::new(m).map_err(serde::de::Error::custom)
    }
}
