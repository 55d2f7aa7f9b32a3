//! Pure-state amplitudes and density matrices.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

pub const NORM_TOL: f64 = 1e-9;
pub const DENSITY_TOL: f64 = 1e-9;

/// Computational-basis amplitudes, little-endian: entry `x` has qubit k equal to bit k of x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeVector {
    entries: Vec<Complex64>,
}

impl AmplitudeVector {
    /// Wraps amplitudes without normalization checks. Length must be a power of two.
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() || !entries.len().is_power_of_two() {
            return Err(Error::Domain(format!(
                "amplitude vector length {} is not a power of two",
                entries.len()
            )));
        }
        Ok(Self { entries })
    }

    /// Wraps amplitudes and requires unit Euclidean norm.
    pub fn normalized(entries: Vec<Complex64>) -> Result<Self> {
        let v = Self::new(entries)?;
        v.check_normalized()?;
        Ok(v)
    }

    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << qubits;
        if index >= dim {
            return Err(Error::Domain(format!("basis index {index} out of range for {qubits} qubits")));
        }
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        e[index] = Complex64::new(1.0, 0.0);
        Ok(Self { entries: e })
    }

    /// Scales to unit norm. Fails on the zero vector.
    pub fn renormalize(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::DegenerateState);
        }
        Ok(Self {
            entries: self.entries.iter().map(|a| a / n).collect(),
        })
    }

    pub fn check_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!("amplitude vector has norm {n}, expected 1")));
        }
        Ok(())
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn qubit_count(&self) -> usize {
        self.entries.len().trailing_zeros() as usize
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn to_column(&self) -> DVector<Complex64> {
        DVector::from_column_slice(&self.entries)
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector.
    pub fn projector(&self) -> Result<DensityMatrix> {
        self.check_normalized()?;
        let v = self.to_column();
        Ok(DensityMatrix { matrix: &v * v.adjoint() })
    }

    pub fn apply(&self, op: &CMatrix) -> Result<Self> {
        if op.nrows() != self.len() || op.ncols() != self.len() {
            return Err(Error::Domain("operator dimension does not match state".into()));
        }
        let out = op * self.to_column();
        Ok(Self { entries: out.iter().copied().collect() })
    }
}

/// Mixed state: Hermitian, PSD, unit trace (tolerance 1e-9).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        validate_density(&matrix)?;
        Ok(Self { matrix })
    }

    /// Skips validation. Used for intermediate results that are validated later.
    pub fn new_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed(qubits: usize) -> Self {
        let d = 1usize << qubits;
        Self {
            matrix: CMatrix::identity(d, d).scale(1.0 / d as f64),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn qubit_count(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn validate(&self) -> Result<()> {
        validate_density(&self.matrix)
    }

    /// `⟨ψ|ρ|ψ⟩`
    pub fn expectation_pure(&self, psi: &AmplitudeVector) -> f64 {
        let v = psi.to_column();
        (v.adjoint() * &self.matrix * &v)[(0, 0)].re
    }

    /// `Tr(ρ A)`
    pub fn expectation(&self, op: &CMatrix) -> Complex64 {
        (&self.matrix * op).trace()
    }
}

pub fn validate_density(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() || !m.nrows().is_power_of_two() {
        return Err(Error::Validation(format!(
            "density matrix must be square with power-of-two dimension, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let herm = linalg::hermiticity_error(m);
    if herm > DENSITY_TOL {
        return Err(Error::Validation(format!("density matrix not Hermitian (deviation {herm:e})")));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
        return Err(Error::Validation(format!("density matrix trace is {tr}, expected 1")));
    }
    let min = linalg::min_eigenvalue(m);
    if min < -DENSITY_TOL {
        return Err(Error::Validation(format!("density matrix has negative eigenvalue {min:e}")));
    }
    Ok(())
}
