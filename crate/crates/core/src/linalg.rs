//! Small dense complex linear algebra shared by the quantum routines.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalues above `-PSD_CLIP` are treated as zero when clipping to the PSD cone.
pub const PSD_CLIP: f64 = 1e-9;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.trace()
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Largest elementwise deviation from Hermiticity.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

/// Ascending eigenvalues and matching eigenvectors (columns) of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let n = m.nrows();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigen(m).0[0]
}

fn rebuild(values: &[f64], vectors: &CMatrix) -> CMatrix {
    let n = vectors.nrows();
    let mut out = CMatrix::zeros(n, n);
    for (k, &v) in values.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let col = vectors.column(k);
        out += (&col * col.adjoint()).scale(v);
    }
    out
}

/// Principal square root of a Hermitian PSD matrix.
///
/// Eigenvalues in `[-1e-9, 0)` are clipped to zero; anything more negative is rejected.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let herm = hermiticity_error(m);
    if herm > 1e-9 * m.norm().max(1.0) {
        return Err(Error::Validation(format!(
            "matrix is not Hermitian (deviation {herm:e})"
        )));
    }
    let (values, vectors) = hermitian_eigen(m);
    if values[0] < -PSD_CLIP {
        return Err(Error::Validation(format!(
            "matrix is not positive semidefinite (min eigenvalue {:e})",
            values[0]
        )));
    }
    let roots: Vec<f64> = values.iter().map(|&v| v.max(0.0).sqrt()).collect();
    Ok(rebuild(&roots, &vectors))
}

/// Projects onto the PSD cone by clipping eigenvalues below `floor` up to `floor`.
pub fn psd_clip(m: &CMatrix, floor: f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let clipped: Vec<f64> = values.iter().map(|&v| v.max(floor)).collect();
    rebuild(&clipped, &vectors)
}

/// Lower Cholesky factor `L` with real non-negative diagonal such that `L L† = m`.
///
/// Semidefinite inputs are accepted: a pivot at or below `tol` zeroes its column.
pub fn cholesky_lower(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    let n = m.nrows();
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut diag = m[(j, j)].re;
        for k in 0..j {
            diag -= l[(j, k)].norm_sqr();
        }
        if diag < -tol.max(1e-12) {
            return Err(Error::Validation(format!(
                "Cholesky pivot {j} is negative ({diag:e})"
            )));
        }
        if diag <= tol {
            continue;
        }
        let d = diag.sqrt();
        l[(j, j)] = c(d, 0.0);
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn random_psd(seed: u64, n: usize) -> CMatrix {
        use rand::Rng;
        let mut rng = crate::rng::seeded(seed);
        let g = CMatrix::from_fn(n, n, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        &g * g.adjoint()
    }

    #[test]
    fn sqrt_of_identity_and_diagonal() {
        let i = identity(3);
        assert_abs_diff_eq!(frobenius_distance(&psd_sqrt(&i).unwrap(), &i), 0.0, epsilon = 1e-12);
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(4.0, 0.0), c(9.0, 0.0)]));
        let r = psd_sqrt(&d).unwrap();
        assert_abs_diff_eq!(r[(0, 0)].re, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r[(1, 1)].re, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r[(0, 1)].norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn sqrt_round_trip_on_random_psd() {
        for seed in 0..20 {
            let m = random_psd(seed, 4);
            let r = psd_sqrt(&m).unwrap();
            assert!(frobenius_distance(&(&r * &r), &m) < 1e-8);
        }
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(-0.1, 0.0)]));
        assert!(matches!(psd_sqrt(&m), Err(Error::Validation(_))));
        let tiny = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(-1e-12, 0.0)]));
        assert!(psd_sqrt(&tiny).is_ok());
    }

    #[test]
    fn cholesky_reconstructs_and_handles_rank_deficiency() {
        let m = random_psd(3, 4);
        let l = cholesky_lower(&m, 1e-14).unwrap();
        assert!(frobenius_distance(&(&l * l.adjoint()), &m) < 1e-10);
        for j in 0..4 {
            assert!(l[(j, j)].im == 0.0 && l[(j, j)].re >= 0.0);
            for i in 0..j {
                assert_eq!(l[(i, j)], c(0.0, 0.0));
            }
        }
        let v = nalgebra::DVector::from_vec(vec![c(0.0, 0.0), c(0.6, 0.0), c(0.0, -0.8), c(0.0, 0.0)]);
        let rank1 = &v * v.adjoint();
        let l = cholesky_lower(&rank1, 1e-14).unwrap();
        assert!(frobenius_distance(&(&l * l.adjoint()), &rank1) < 1e-12);
    }
}
