//! Cholesky parameterization of positive semidefinite matrices.
//!
//! Packing of a d×d lower-triangular factor into `d²` reals: the d diagonal
//! entries first, then each strictly-lower entry as `(re, im)`, row by row
//! (row 1 col 0, row 2 col 0, row 2 col 1, ...).

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    lower: CMatrix,
}

impl CholeskyFactor {
    /// Unpacks parameters. Negative diagonals are folded into their column so
    /// the stored factor always has a non-negative real diagonal.
    pub fn from_params(params: &[f64], dim: usize) -> Result<Self> {
        if params.len() != dim * dim {
            return Err(Error::Domain(format!(
                "a {dim}x{dim} factor needs {} parameters, got {}",
                dim * dim,
                params.len()
            )));
        }
        let mut l = CMatrix::zeros(dim, dim);
        for i in 0..dim {
            l[(i, i)] = c(params[i], 0.0);
        }
        let mut k = dim;
        for r in 1..dim {
            for col in 0..r {
                l[(r, col)] = c(params[k], params[k + 1]);
                k += 2;
            }
        }
        for col in 0..dim {
            if l[(col, col)].re < 0.0 {
                for r in col..dim {
                    l[(r, col)] = -l[(r, col)];
                }
            }
        }
        Ok(Self { lower: l })
    }

    /// Factor of a PSD matrix (semidefinite allowed).
    pub fn factor(m: &CMatrix) -> Result<Self> {
        Ok(Self {
            lower: linalg::cholesky_lower(m, 1e-15 * m.norm().max(1e-300))?,
        })
    }

    pub fn params(&self) -> Vec<f64> {
        pack(&self.lower)
    }

    pub fn lower(&self) -> &CMatrix {
        &self.lower
    }

    /// `ΔΔ†`
    pub fn product(&self) -> CMatrix {
        &self.lower * self.lower.adjoint()
    }
}

pub fn pack(l: &CMatrix) -> Vec<f64> {
    let d = l.nrows();
    let mut out = Vec::with_capacity(d * d);
    out.extend((0..d).map(|i| l[(i, i)].re));
    for r in 1..d {
        for col in 0..r {
            out.push(l[(r, col)].re);
            out.push(l[(r, col)].im);
        }
    }
    out
}

/// `ΔΔ†` straight from packed parameters.
pub fn product_from_params(params: &[f64], dim: usize) -> Result<CMatrix> {
    CholeskyFactor::from_params(params, dim).map(|f| f.product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn packing_order() {
        let p: Vec<f64> = (1..=9).map(f64::from).collect();
        let f = CholeskyFactor::from_params(&p, 3).unwrap();
        let l = f.lower();
        assert_eq!(l[(0, 0)], c(1.0, 0.0));
        assert_eq!(l[(2, 2)], c(3.0, 0.0));
        assert_eq!(l[(1, 0)], c(4.0, 5.0));
        assert_eq!(l[(2, 0)], c(6.0, 7.0));
        assert_eq!(l[(2, 1)], c(8.0, 9.0));
        assert_eq!(l[(0, 1)], c(0.0, 0.0));
        assert!(CholeskyFactor::from_params(&p, 2).is_err());
    }

    proptest! {
        #[test]
        fn product_is_psd_and_factor_round_trips(p in proptest::collection::vec(-1.0f64..1.0, 16)) {
            let f = CholeskyFactor::from_params(&p, 4).unwrap();
            let m = f.product();
            prop_assert!(linalg::hermiticity_error(&m) < 1e-14);
            prop_assert!(linalg::min_eigenvalue(&m) > -1e-12);
            for i in 0..4 {
                prop_assert!(f.lower()[(i, i)].re >= 0.0);
            }
            let again = CholeskyFactor::factor(&m).unwrap();
            prop_assert!(linalg::frobenius_distance(&again.product(), &m) < 1e-9);
        }
    }
}
