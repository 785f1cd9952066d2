use alloc::vec::Vec;

use nalgebra::linalg::{LU, SVD};

use super::eig::real_schur;
use crate::{Error, Mat, Result};

/// Solution of `A P + P Aᵀ = −Q`.
#[derive(Debug, Clone)]
pub struct GramianResult {
    pub p: Mat,
    /// `‖A P + P Aᵀ + Q‖_F / max(‖Q‖_F, ε)`.
    pub residual: f64,
}

// Smallest singular value of a Kronecker block relative to the Schur scale
// below which the small Sylvester system counts as singular.
const ILL_POSED_REL: f64 = 1e-13;

fn schur_blocks(t: &Mat) -> Vec<(usize, usize)> {
    let n = t.nrows();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            blocks.push((i, 2));
            i += 2;
        } else {
            blocks.push((i, 1));
            i += 1;
        }
    }
    blocks
}

// Solves `A Z + Z Bᵀ = R` for 1×1/2×2 blocks through
// `(I ⊗ A + B ⊗ I) vec(Z) = vec(R)`.
fn small_sylvester(a: &Mat, b: &Mat, rhs: &Mat, scale: f64) -> Result<Mat> {
    let (a_sz, b_sz) = (a.nrows(), b.nrows());
    let dim = a_sz * b_sz;
    let mut k = Mat::zeros(dim, dim);
    for cj in 0..b_sz {
        for ci in 0..a_sz {
            let row = cj * a_sz + ci;
            for ck in 0..a_sz {
                k[(row, cj * a_sz + ck)] += a[(ci, ck)];
            }
            for cl in 0..b_sz {
                k[(row, cl * a_sz + ci)] += b[(cj, cl)];
            }
        }
    }
    let smin = if dim == 1 {
        k[(0, 0)].abs()
    } else {
        SVD::new(k.clone(), false, false).singular_values.min()
    };
    if smin <= ILL_POSED_REL * scale {
        return Err(Error::IllPosedLyapunov);
    }
    let vec_rhs = nalgebra::DVector::from_column_slice(rhs.as_slice());
    let sol = LU::new(k).solve(&vec_rhs).ok_or(Error::IllPosedLyapunov)?;
    Ok(Mat::from_column_slice(a_sz, b_sz, sol.as_slice()))
}

/// Bartels–Stewart solve of the continuous Lyapunov equation `A P + P Aᵀ = −Q`.
///
/// `A` is reduced to real Schur form and the transformed equation is solved
/// block by block (1×1 and 2×2 diagonal blocks) from the bottom-right corner.
pub fn solve_lyapunov(a: &Mat, q: &Mat) -> Result<GramianResult> {
    let n = a.nrows();
    if a.ncols() != n || q.nrows() != n || q.ncols() != n {
        return Err(Error::DimensionMismatch {
            op: "solve_lyapunov",
            detail: alloc::format!("A is {}x{}, Q is {}x{}", n, a.ncols(), q.nrows(), q.ncols()),
        });
    }
    if q.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("Lyapunov right-hand side"));
    }
    if n == 0 {
        return Ok(GramianResult { p: Mat::zeros(0, 0), residual: 0.0 });
    }

    let (u, t) = real_schur(a)?;
    let f = u.transpose() * q * &u;
    let blocks = schur_blocks(&t);
    let scale = t.norm().max(f64::MIN_POSITIVE);

    let mut y = Mat::zeros(n, n);
    for &(j0, b) in blocks.iter().rev() {
        for &(i0, a_sz) in blocks.iter().rev() {
            let mut rhs = -f.view((i0, j0), (a_sz, b)).into_owned();
            let tail_i = i0 + a_sz;
            if tail_i < n {
                rhs -= t.view((i0, tail_i), (a_sz, n - tail_i)) * y.view((tail_i, j0), (n - tail_i, b));
            }
            let tail_j = j0 + b;
            if tail_j < n {
                rhs -= y.view((i0, tail_j), (a_sz, n - tail_j)) * t.view((j0, tail_j), (b, n - tail_j)).transpose();
            }

            let sol = small_sylvester(&t.view((i0, i0), (a_sz, a_sz)).into_owned(), &t.view((j0, j0), (b, b)).into_owned(), &rhs, scale)?;
            for cj in 0..b {
                for ci in 0..a_sz {
                    y[(i0 + ci, j0 + cj)] = sol[(ci, cj)];
                }
            }
        }
    }

    let p = &u * y * u.transpose();
    let p = (&p + p.transpose()) * 0.5;
    let res = a * &p + &p * a.transpose() + q;
    let residual = res.norm() / q.norm().max(f64::EPSILON);
    if !residual.is_finite() {
        return Err(Error::IllPosedLyapunov);
    }
    Ok(GramianResult { p, residual })
}

/// Solves the Sylvester equation `A X + X B = C` (`A` m×m, `B` n×n).
///
/// Needs `spec(A) ∩ spec(−B) = ∅`; otherwise returns [`Error::IllPosedLyapunov`].
pub fn solve_sylvester(a: &Mat, b: &Mat, c: &Mat) -> Result<Mat> {
    let (m, n) = (a.nrows(), b.nrows());
    if a.ncols() != m || b.ncols() != n || c.shape() != (m, n) {
        return Err(Error::DimensionMismatch {
            op: "solve_sylvester",
            detail: alloc::format!("A is {:?}, B is {:?}, C is {:?}", a.shape(), b.shape(), c.shape()),
        });
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("Sylvester right-hand side"));
    }
    if m == 0 || n == 0 {
        return Ok(Mat::zeros(m, n));
    }
    let (ua, sa) = real_schur(a)?;
    let (ub, sb) = real_schur(b)?;
    let f = ua.transpose() * c * &ub;
    let (ba, bb) = (schur_blocks(&sa), schur_blocks(&sb));
    let scale = (sa.norm() + sb.norm()).max(f64::MIN_POSITIVE);

    // Sa Z + Z Sb = F: rows from the bottom, columns from the left.
    let mut z = Mat::zeros(m, n);
    for &(j0, bj) in &bb {
        for &(i0, ai) in ba.iter().rev() {
            let mut rhs = f.view((i0, j0), (ai, bj)).into_owned();
            let tail = i0 + ai;
            if tail < m {
                rhs -= sa.view((i0, tail), (ai, m - tail)) * z.view((tail, j0), (m - tail, bj));
            }
            if j0 > 0 {
                rhs -= z.view((i0, 0), (ai, j0)) * sb.view((0, j0), (j0, bj));
            }
            let sbt = sb.view((j0, j0), (bj, bj)).transpose();
            let sol = small_sylvester(&sa.view((i0, i0), (ai, ai)).into_owned(), &sbt, &rhs, scale)?;
            z.view_mut((i0, j0), (ai, bj)).copy_from(&sol);
        }
    }
    let x = &ua * z * ub.transpose();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::IllPosedLyapunov);
    }
    Ok(x)
}
