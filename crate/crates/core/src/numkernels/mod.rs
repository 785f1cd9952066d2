//! Dense numerical kernels shared by the reduction algorithms.
//!
//! The decompositions themselves come from nalgebra; this module owns the
//! parts the algorithms depend on semantically: sorted symmetric spectra,
//! truncated SVD factors, real-Schur Bartels–Stewart Lyapunov and Sylvester solvers and
//! the spectral thresholds used when picking eigenvectors.

mod eig;
mod lyapunov;
mod svd;

pub use eig::{eigenvalues, real_schur, sym_eig_ascending, SymEig};
pub use lyapunov::{solve_lyapunov, solve_sylvester, GramianResult};
pub use svd::{condition_number, sigma_max, singular_values, svd_truncate, svd_truncate_real, TruncatedSvd};

/// An eigenvalue `λ` of a PSD matrix counts as zero when `λ <= EPS_ZERO * λ_max`.
pub const EPS_ZERO: f64 = 1e-9;
/// Adjacent sorted eigenvalues are distinct when they differ by more than `EPS_GAP * λ_max`.
pub const EPS_GAP: f64 = 1e-9;

/// Indices of eigenvalues (ascending input) that are numerically non-zero.
pub fn nonzero_indices(values: &[f64]) -> alloc::vec::Vec<usize> {
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return alloc::vec::Vec::new();
    }
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > EPS_ZERO * max)
        .map(|(i, _)| i)
        .collect()
}

/// Whether two eigenvalues are distinct relative to the spectral scale `max`.
pub fn distinct(a: f64, b: f64, max: f64) -> bool {
    (a - b).abs() > EPS_GAP * max
}
