use alloc::vec::Vec;

use nalgebra::linalg::SVD;

use crate::{CMat, Complex64, Error, Mat, Result};

/// Rank-`r` truncation `U Σ V*` of a complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSvd {
    /// p×r, orthonormal columns.
    pub u: CMat,
    /// Nonincreasing, nonnegative.
    pub s: Vec<f64>,
    /// q×r, orthonormal columns.
    pub v: CMat,
}

impl TruncatedSvd {
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    pub fn sigma(&self) -> Mat {
        Mat::from_diagonal(&nalgebra::DVector::from_column_slice(&self.s))
    }

    /// `U Σ V*`.
    pub fn recompose(&self) -> CMat {
        let mut us = self.u.clone();
        for (j, s) in self.s.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * self.v.adjoint()
    }
}

fn check_rank(m_rows: usize, m_cols: usize, r: usize) -> Result<()> {
    let max = m_rows.min(m_cols);
    if r == 0 || r > max {
        return Err(Error::RankOutOfRange { rank: r, max });
    }
    Ok(())
}

/// Best rank-`r` approximation factors of `m` (Frobenius and spectral norm).
pub fn svd_truncate(m: &CMat, r: usize) -> Result<TruncatedSvd> {
    check_rank(m.nrows(), m.ncols(), r)?;
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("svd input"));
    }
    let svd = SVD::try_new(m.clone(), true, true, f64::EPSILON, 0)
        .ok_or(Error::NotConverged("complex SVD"))?;
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V*");
    Ok(TruncatedSvd {
        u: u.columns(0, r).into_owned(),
        s: svd.singular_values.iter().take(r).copied().collect(),
        v: v_t.rows(0, r).adjoint(),
    })
}

/// Truncated SVD of a real matrix; the factors are real-valued.
pub fn svd_truncate_real(m: &Mat, r: usize) -> Result<TruncatedSvd> {
    check_rank(m.nrows(), m.ncols(), r)?;
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("svd input"));
    }
    let svd = SVD::try_new(m.clone(), true, true, f64::EPSILON, 0)
        .ok_or(Error::NotConverged("real SVD"))?;
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested Vᵀ");
    let lift = |x: &Mat| x.map(|v| Complex64::new(v, 0.0));
    Ok(TruncatedSvd {
        u: lift(&u.columns(0, r).into_owned()),
        s: svd.singular_values.iter().take(r).copied().collect(),
        v: lift(&v_t.rows(0, r).transpose()),
    })
}

/// Singular values in nonincreasing order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value (0 for empty matrices).
pub fn sigma_max(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// 2-norm condition number `σ_max / σ_min`; infinite when singular.
pub fn condition_number(m: &Mat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 1.0;
    }
    let s = m.clone().singular_values();
    let max = s.iter().fold(0.0f64, |a, &b| a.max(b));
    let min = s.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn full_rank_reconstructs() {
        let m = CMat::from_row_slice(2, 3, &[c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.5), c(-2.0, 0.0), c(1.0, 1.0), c(0.0, 4.0)]);
        let t = svd_truncate(&m, 2).unwrap();
        assert!((t.recompose() - &m).norm() <= 1e-12 * m.norm());
        assert!(t.s[0] >= t.s[1]);
        let uu = t.u.adjoint() * &t.u;
        assert!((uu - CMat::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn rank_one_exact() {
        let x = CMat::from_column_slice(3, 1, &[c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 1.0)]);
        let y = CMat::from_column_slice(2, 1, &[c(0.5, -0.5), c(2.0, 0.0)]);
        let m = &x * y.adjoint();
        let t = svd_truncate(&m, 1).unwrap();
        assert!((t.recompose() - &m).norm() <= 1e-12 * m.norm());
    }

    #[test]
    fn rank_out_of_range() {
        let m = CMat::zeros(2, 3);
        assert_eq!(svd_truncate(&m, 0), Err(Error::RankOutOfRange { rank: 0, max: 2 }));
        assert_eq!(svd_truncate(&m, 3), Err(Error::RankOutOfRange { rank: 3, max: 2 }));
    }

    #[test]
    fn real_factors_stay_real() {
        let m = Mat::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        let t = svd_truncate_real(&m, 1).unwrap();
        assert_eq!(t.s, alloc::vec![2.0]);
        assert!(t.u.iter().chain(t.v.iter()).all(|z| z.im == 0.0));
        assert!((t.u[(0, 0)].re.abs() - 1.0).abs() < 1e-15);
    }
}
