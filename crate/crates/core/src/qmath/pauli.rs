//! Single-qubit Pauli operators and their tensor products.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};

/// One Pauli factor. `index()` follows the 1-based ordering I=1, X=2, Y=3, Z=4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_index(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Pauli::I),
            2 => Ok(Pauli::X),
            3 => Ok(Pauli::Y),
            4 => Ok(Pauli::Z),
            _ => Err(Error::Domain(format!("Pauli index {k} not in 1..=4"))),
        }
    }

    pub fn index(self) -> u8 {
        self as u8 + 1
    }

    pub fn label(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_label(ch: char) -> Result<Self> {
        match ch.to_ascii_uppercase() {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            _ => Err(Error::Domain(format!("unknown Pauli label {ch:?}"))),
        }
    }

    pub fn matrix(self) -> CMatrix {
        let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
        let e = match self {
            Pauli::I => [o, z, z, o],
            Pauli::X => [z, o, o, z],
            Pauli::Y => [z, -i, i, z],
            Pauli::Z => [o, z, z, -o],
        };
        CMatrix::from_row_slice(2, 2, &e)
    }
}

/// The four single-qubit Pauli matrices in index order.
pub fn pauli_basis() -> [CMatrix; 4] {
    Pauli::ALL.map(Pauli::matrix)
}

/// Kronecker product of the factors, most significant qubit first
/// (`factors[0]` acts on qubit n-1, the last entry on qubit 0).
pub fn pauli_tensor(factors: &[Pauli]) -> CMatrix {
    factors
        .iter()
        .fold(CMatrix::identity(1, 1), |acc, p| acc.kronecker(&p.matrix()))
}

/// Same as [`pauli_tensor`] from 1-based indices.
pub fn pauli_tensor_from_indices(indices: &[u8]) -> Result<CMatrix> {
    let factors = indices
        .iter()
        .map(|&k| Pauli::from_index(k))
        .collect::<Result<Vec<_>>>()?;
    Ok(pauli_tensor(&factors))
}

/// All `4^n` Pauli strings in lexicographic index order (qubit n-1 varies slowest).
pub fn pauli_strings(n: usize) -> Vec<Vec<Pauli>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                Pauli::ALL.iter().map(move |&p| {
                    let mut s = prefix.clone();
                    s.push(p);
                    s
                })
            })
            .collect();
    }
    out
}

/// Coefficients `a_i = Tr(σ_i A) / 2` with `A = Σ a_i σ_i` for a 2x2 matrix.
pub fn pauli_coefficients(a: &CMatrix) -> [Complex64; 4] {
    Pauli::ALL.map(|p| (p.matrix() * a).trace() * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_pair_is_4x4_identity() {
        assert_eq!(pauli_tensor(&[Pauli::I, Pauli::I]), CMatrix::identity(4, 4));
    }

    #[test]
    fn z_is_diag_plus_minus() {
        let z = pauli_tensor_from_indices(&[4]).unwrap();
        assert_eq!(z[(0, 0)], c(1.0, 0.0));
        assert_eq!(z[(1, 1)], c(-1.0, 0.0));
        assert_eq!(z[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn two_qubit_strings_are_orthonormal() {
        let strings = pauli_strings(2);
        assert_eq!(strings.len(), 16);
        for (a, sa) in strings.iter().enumerate() {
            for (b, sb) in strings.iter().enumerate() {
                let v = (pauli_tensor(sa) * pauli_tensor(sb)).trace() / 4.0;
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((v - c(expect, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn hermitian_unitary_traceless() {
        for p in Pauli::ALL {
            let m = p.matrix();
            assert_eq!(m.adjoint(), m);
            assert_eq!(&m * &m, CMatrix::identity(2, 2));
            let t = m.trace();
            if p == Pauli::I {
                assert_eq!(t, c(2.0, 0.0));
            } else {
                assert_eq!(t, c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn bad_index_rejected() {
        assert!(Pauli::from_index(0).is_err());
        assert!(Pauli::from_index(5).is_err());
    }

    #[test]
    fn coefficients_reconstruct() {
        let a = CMatrix::from_row_slice(2, 2, &[c(0.3, 0.1), c(-1.0, 2.0), c(0.5, 0.0), c(0.0, -0.7)]);
        let k = pauli_coefficients(&a);
        let back = pauli_basis()
            .iter()
            .zip(k)
            .fold(CMatrix::zeros(2, 2), |acc, (m, w)| acc + m * w);
        assert!((back - a).norm() < 1e-15);
    }
}
