use alloc::vec::Vec;

use nalgebra::linalg::balancing::balance_parlett_reinsch;
use nalgebra::linalg::{Schur, SymmetricEigen};
use num_traits::Float;

use crate::{Complex64, Error, Mat, Result};

const SCHUR_SWEEPS_PER_DIM: usize = 60;

// Deterministic orthogonal reflector used to break rare QR stagnation.
fn scramble(n: usize) -> Mat {
    let v = nalgebra::DVector::from_fn(n, |i, _| 1.0 + Float::sin(0.7 + 1.3 * i as f64));
    let nv = v.dot(&v);
    Mat::identity(n, n) - (&v * v.transpose()) * (2.0 / nv)
}

/// Real Schur form `A = Q T Qᵀ` with `T` upper quasi-triangular.
///
/// Deflated subdiagonal entries of `T` are exactly zero; 2×2 diagonal blocks
/// carry complex-conjugate eigenvalue pairs.
pub fn real_schur(a: &Mat) -> Result<(Mat, Mat)> {
    let n = a.nrows();
    if n == 0 {
        return Ok((Mat::zeros(0, 0), Mat::zeros(0, 0)));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("schur input"));
    }
    let cap = SCHUR_SWEEPS_PER_DIM * n.max(4);
    if let Some(s) = Schur::try_new(a.clone(), f64::EPSILON, cap) {
        return Ok(s.unpack());
    }
    let h = scramble(n);
    let rotated = &h * a * &h;
    match Schur::try_new(rotated, f64::EPSILON, cap) {
        Some(s) => {
            let (q, t) = s.unpack();
            Ok((h * q, t))
        }
        None => Err(Error::NotConverged("real Schur decomposition")),
    }
}

/// Eigenvalues of a general real matrix (balanced before the QR iteration).
pub fn eigenvalues(a: &Mat) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("eigenvalue input"));
    }
    let mut balanced = a.clone();
    balance_parlett_reinsch(&mut balanced);
    let cap = SCHUR_SWEEPS_PER_DIM * n.max(4);
    let schur = match Schur::try_new(balanced.clone(), f64::EPSILON, cap) {
        Some(s) => s,
        None => {
            let h = scramble(n);
            Schur::try_new(&h * balanced * &h, f64::EPSILON, cap)
                .ok_or(Error::NotConverged("eigenvalue iteration"))?
        }
    };
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Symmetric eigendecomposition with eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, one per column, in the order of `values`.
    pub vectors: Mat,
}

/// Eigendecomposition of `(X + Xᵀ)/2`, sorted ascending.
pub fn sym_eig_ascending(x: &Mat) -> Result<SymEig> {
    let m = x.nrows();
    if x.ncols() != m {
        return Err(Error::InvalidArgument("sym_eig_ascending needs a square matrix"));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("symmetric eigenvalue input"));
    }
    if m == 0 {
        return Ok(SymEig { values: Vec::new(), vectors: Mat::zeros(0, 0) });
    }
    let sym = (x + x.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 0)
        .ok_or(Error::NotConverged("symmetric eigenvalue iteration"))?;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Mat::from_fn(m, m, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(SymEig { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_sorted() {
        let x = Mat::from_diagonal(&nalgebra::DVector::from_vec(alloc::vec![3.0, 1.0, 2.0]));
        let e = sym_eig_ascending(&x).unwrap();
        assert_eq!(e.values, alloc::vec![1.0, 2.0, 3.0]);
        let vtv = e.vectors.transpose() * &e.vectors;
        assert!((vtv - Mat::identity(3, 3)).norm() < 1e-14);
    }

    #[test]
    fn identity_spectrum() {
        let e = sym_eig_ascending(&Mat::identity(4, 4)).unwrap();
        assert!(e.values.iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn rotation_eigenvalues() {
        let a = Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let mut ev = eigenvalues(&a).unwrap();
        ev.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((ev[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn schur_reconstructs() {
        let a = Mat::from_row_slice(3, 3, &[1.0, 2.0, 0.5, -3.0, 0.1, 4.0, 0.0, 1.0, -2.0]);
        let (q, t) = real_schur(&a).unwrap();
        assert!((&q * &t * q.transpose() - &a).norm() < 1e-12);
        assert_eq!(t[(2, 0)], 0.0);
    }
}
