//! Named single-qubit unitaries and helpers.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};

pub const UNITARY_TOL: f64 = 1e-9;

pub fn identity() -> CMatrix {
    CMatrix::identity(2, 2)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

pub fn hadamard() -> CMatrix {
    let h = FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)])
}

/// Phase gate diag(1, i).
pub fn phase_s() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)])
}

pub fn phase_s_dagger() -> CMatrix {
    phase_s().adjoint()
}

pub fn phase_t() -> CMatrix {
    let w = c(0.0, std::f64::consts::FRAC_PI_4).exp();
    CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), w])
}

/// `exp(-i θ X / 2)`
pub fn rx(theta: f64) -> CMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    CMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)])
}

/// `exp(-i θ Y / 2)`
pub fn ry(theta: f64) -> CMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    CMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)])
}

/// `exp(-i θ Z / 2)`
pub fn rz(theta: f64) -> CMatrix {
    let e = c(0.0, -theta / 2.0).exp();
    CMatrix::from_row_slice(2, 2, &[e, c(0.0, 0.0), c(0.0, 0.0), e.conj()])
}

/// Looks up a gate by name (case-insensitive): I, X, Y, Z, H, S, SDG, T.
pub fn named(name: &str) -> Result<CMatrix> {
    match name.to_ascii_uppercase().as_str() {
        "I" | "ID" | "IDENTITY" => Ok(identity()),
        "X" => Ok(pauli_x()),
        "Y" => Ok(pauli_y()),
        "Z" => Ok(pauli_z()),
        "H" => Ok(hadamard()),
        "S" => Ok(phase_s()),
        "SDG" => Ok(phase_s_dagger()),
        "T" => Ok(phase_t()),
        other => Err(Error::Domain(format!("unknown gate name {other:?}"))),
    }
}

/// Haar-distributed 2x2 unitary.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R) -> CMatrix {
    let mut g = [0.0f64; 4];
    for v in g.iter_mut() {
        *v = rng.sample(StandardNormal);
    }
    let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    let a = c(g[0] / norm, g[1] / norm);
    let b = c(g[2] / norm, g[3] / norm);
    let phase = c(0.0, rng.random::<f64>() * std::f64::consts::TAU).exp();
    CMatrix::from_row_slice(2, 2, &[a * phase, -b.conj() * phase, b * phase, a.conj() * phase])
}

/// Largest elementwise deviation of `U†U` from the identity.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    let d = u.nrows();
    let p = u.adjoint() * u - CMatrix::identity(d, d);
    p.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn check_unitary(u: &CMatrix) -> Result<()> {
    if u.nrows() != 2 || u.ncols() != 2 {
        return Err(Error::Validation(format!(
            "gate must be 2x2, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let err = unitarity_error(u);
    if err > UNITARY_TOL {
        return Err(Error::Validation(format!("gate is not unitary (deviation {err:e})")));
    }
    Ok(())
}

/// Integer power of a square matrix.
pub fn matrix_power(u: &CMatrix, n: usize) -> CMatrix {
    let mut out = CMatrix::identity(u.nrows(), u.ncols());
    for _ in 0..n {
        out = &out * u;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_gates_are_unitary() {
        for name in ["I", "X", "Y", "Z", "H", "S", "Sdg", "T"] {
            check_unitary(&named(name).unwrap()).unwrap();
        }
        assert!(named("CNOT").is_err());
    }

    #[test]
    fn haar_samples_are_unitary() {
        let mut rng = crate::rng::seeded(1);
        for _ in 0..100 {
            assert!(unitarity_error(&haar_unitary(&mut rng)) < 1e-12);
        }
    }

    #[test]
    fn non_unitary_rejected() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(check_unitary(&m).is_err());
    }

    #[test]
    fn rotations_compose() {
        let a = rz(0.3) * rz(0.4);
        assert!((a - rz(0.7)).norm() < 1e-14);
        assert!((rx(std::f64::consts::PI) - pauli_x() * c(0.0, -1.0)).norm() < 1e-14);
    }
}
