use alloc::vec::Vec;

use crate::numkernels::{condition_number, distinct, nonzero_indices, solve_lyapunov, sym_eig_ascending};
use crate::{Error, Mat, Result, StateSpace};

/// Real weight row-block `W = [W₀ W₁ … W_ℓ]` with orthonormal rows.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    pub w: Mat,
    /// Eigenvalues of `X` whose eigenvectors form the rows of `w`.
    pub eigenvalues: Vec<f64>,
    /// The selected eigenvalues were not pairwise distinct (or tie with the
    /// next one), so the minimizer is not unique.
    pub degenerate: bool,
}

impl WeightMatrix {
    pub fn outputs(&self) -> usize {
        self.w.nrows()
    }

    /// Leading p×p block multiplying the static channel.
    pub fn w0(&self) -> Mat {
        self.w.columns(0, self.outputs()).into_owned()
    }

    pub fn w0_condition(&self) -> f64 {
        condition_number(&self.w0())
    }

    /// `tr(W X Wᵀ)`.
    pub fn objective(&self, x: &Mat) -> f64 {
        (&self.w * x * self.w.transpose()).trace()
    }
}

/// `X = C P Cᵀ`, `A P + P Aᵀ = −B Bᵀ` for the error system `H`.
///
/// This equals `(1/2π) ∫_{−∞}^{∞} H(jω) H*(jω) dω`, i.e. `1/π` times the real
/// part of the one-sided integral; the constant factor does not affect which
/// eigenvectors are selected.
pub fn compute_x(h: &StateSpace) -> Result<Mat> {
    let m = h.outputs();
    if h.states() == 0 {
        return Ok(Mat::zeros(m, m));
    }
    let gram = solve_lyapunov(h.a(), &(h.b() * h.b().transpose()))?;
    let x = h.c() * gram.p * h.c().transpose();
    Ok((&x + x.transpose()) * 0.5)
}

/// Rows of `W` are eigenvectors of the `p` smallest non-zero eigenvalues of `X`.
///
/// Repeated eigenvalues are still accepted (symmetric `X` has orthonormal
/// eigenvectors for them) and flagged through [`WeightMatrix::degenerate`].
pub fn solve_weights(x: &Mat, p: usize) -> Result<WeightMatrix> {
    if p == 0 {
        return Err(Error::InvalidArgument("weight problem needs p >= 1"));
    }
    let eig = sym_eig_ascending(x)?;
    let candidates = nonzero_indices(&eig.values);
    if candidates.len() < p {
        return Err(Error::InsufficientSpectrum { needed: p, found: candidates.len() });
    }
    let max = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let chosen = &candidates[..p];
    let mut degenerate = chosen
        .windows(2)
        .any(|w| !distinct(eig.values[w[0]], eig.values[w[1]], max));
    if let Some(&next) = candidates.get(p) {
        degenerate |= !distinct(eig.values[chosen[p - 1]], eig.values[next], max);
    }
    let m = x.nrows();
    let w = Mat::from_fn(p, m, |i, j| eig.vectors[(j, chosen[i])]);
    Ok(WeightMatrix {
        w,
        eigenvalues: chosen.iter().map(|&i| eig.values[i]).collect(),
        degenerate,
    })
}
