//! Square-root balanced truncation.

use alloc::vec::Vec;

use nalgebra::linalg::{Cholesky, SVD};
use num_traits::Float;

use crate::numkernels::{solve_lyapunov, sym_eig_ascending};
use crate::{Error, Mat, Result, StateSpace};

// Factor L with L Lᵀ = P; falls back to a clipped eigen-factor when P is only
// semidefinite in floating point.
fn sqrt_factor(p: &Mat) -> Result<Mat> {
    if let Some(ch) = Cholesky::new(p.clone()) {
        return Ok(ch.l());
    }
    let eig = sym_eig_ascending(p)?;
    let mut l = eig.vectors;
    for (j, v) in eig.values.iter().enumerate() {
        l.column_mut(j).scale_mut(Float::sqrt(v.max(0.0)));
    }
    Ok(l)
}

/// Gramian factors and Hankel SVD of a stable system, computed once and
/// truncated to any order.
pub struct Balancer {
    sys: StateSpace,
    lc: Mat,
    lo: Mat,
    u: Mat,
    v: Mat,
    hsv: Vec<f64>,
}

impl Balancer {
    pub fn new(g: &StateSpace) -> Result<Self> {
        if !g.is_stable()? {
            return Err(Error::UnstableInput);
        }
        let n = g.states();
        if n == 0 {
            return Ok(Balancer {
                sys: g.clone(),
                lc: Mat::zeros(0, 0),
                lo: Mat::zeros(0, 0),
                u: Mat::zeros(0, 0),
                v: Mat::zeros(0, 0),
                hsv: Vec::new(),
            });
        }
        let (a, b, c) = (g.a(), g.b(), g.c());
        let wc = solve_lyapunov(a, &(b * b.transpose()))?.p;
        let wo = solve_lyapunov(&a.transpose(), &(c.transpose() * c))?.p;
        let lc = sqrt_factor(&wc)?;
        let lo = sqrt_factor(&wo)?;
        let svd = SVD::new(lo.transpose() * &lc, true, true);
        let hsv = svd.singular_values.iter().copied().collect();
        Ok(Balancer {
            sys: g.clone(),
            lc,
            lo,
            u: svd.u.expect("requested U"),
            v: svd.v_t.expect("requested Vᵀ").transpose(),
            hsv,
        })
    }

    /// Hankel singular values, nonincreasing.
    pub fn hankel_singular_values(&self) -> &[f64] {
        &self.hsv
    }

    /// Twice the sum of the discarded Hankel singular values.
    pub fn error_bound(&self, order: usize) -> f64 {
        2.0 * self.hsv.iter().skip(order).fold(0.0, |acc, s| acc + s)
    }

    pub fn truncate(&self, order: usize) -> Result<StateSpace> {
        let g = &self.sys;
        if order > g.states() {
            return Err(Error::InvalidArgument("order exceeds the number of states"));
        }
        if order == 0 {
            return Ok(StateSpace::static_gain(g.d().clone()));
        }
        let hsv = &self.hsv;
        if !(hsv[order - 1] > f64::EPSILON * hsv[0]) {
            return Err(Error::InvalidArgument("order exceeds the numerical rank of the Hankel operator"));
        }
        let u1 = self.u.columns(0, order);
        let v1 = self.v.columns(0, order);
        let scale = Mat::from_diagonal(&nalgebra::DVector::from_iterator(
            order,
            hsv[..order].iter().map(|s| 1.0 / Float::sqrt(*s)),
        ));
        let t = &self.lc * v1 * &scale;
        let t_inv = &scale * u1.transpose() * self.lo.transpose();
        StateSpace::new(&t_inv * g.a() * &t, &t_inv * g.b(), g.c() * &t, g.d().clone())
    }
}

/// Balanced truncation of a stable system to `order` states.
///
/// Returns the reduced model and all Hankel singular values, nonincreasing.
pub fn balanced_truncate(g: &StateSpace, order: usize) -> Result<(StateSpace, Vec<f64>)> {
    if order > g.states() {
        return Err(Error::InvalidArgument("order exceeds the number of states"));
    }
    let bal = Balancer::new(g)?;
    let reduced = bal.truncate(order)?;
    Ok((reduced, bal.hsv))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_order_hsv() {
        let g = StateSpace::new(
            Mat::from_element(1, 1, -1.0),
            Mat::from_element(1, 1, 1.0),
            Mat::from_element(1, 1, 1.0),
            Mat::zeros(1, 1),
        )
        .unwrap();
        let (r, hsv) = balanced_truncate(&g, 1).unwrap();
        assert!((hsv[0] - 0.5).abs() < 1e-14);
        assert!((r.eval_freq(0.7).unwrap() - g.eval_freq(0.7).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn rejects_unstable_and_large_order() {
        let g = StateSpace::new(
            Mat::from_element(1, 1, 1.0),
            Mat::from_element(1, 1, 1.0),
            Mat::from_element(1, 1, 1.0),
            Mat::zeros(1, 1),
        )
        .unwrap();
        assert_eq!(balanced_truncate(&g, 1).unwrap_err(), Error::UnstableInput);
        assert!(balanced_truncate(&g, 2).is_err());
    }
}
