use alloc::vec::Vec;

use nalgebra::linalg::LU;

use super::block::BlockRealization;
use super::weights::WeightMatrix;
use crate::norms::IMAG_AXIS_GUARD;
use crate::numkernels::{singular_values, solve_sylvester};
use crate::{CMat, Complex64, Error, Mat, Result, StateSpace};

struct Stacked {
    a: Mat,
    b1: Mat,
    b2: Mat,
}

fn stack(blocks: &[BlockRealization], p: usize, q: usize) -> Stacked {
    let n: usize = blocks.iter().map(BlockRealization::states).sum();
    let mut a = Mat::zeros(n, n);
    let mut b1 = Mat::zeros(n, q);
    let mut b2 = Mat::zeros(n, p);
    let mut off = 0;
    for blk in blocks {
        let d = blk.states();
        a.view_mut((off, off), (d, d)).copy_from(&blk.a);
        b1.rows_mut(off, d).copy_from(&blk.b1);
        b2.rows_mut(off, d).copy_from(&blk.b2);
        off += d;
    }
    Stacked { a, b1, b2 }
}

/// `[𝒩 ℳ]`: inputs `[u; y]`, outputs `[D u + y; block states]`.
pub fn nm_system(blocks: &[BlockRealization], d: &Mat) -> StateSpace {
    let (p, q) = d.shape();
    let st = stack(blocks, p, q);
    let n = st.a.nrows();
    let mut b = Mat::zeros(n, q + p);
    b.columns_mut(0, q).copy_from(&st.b1);
    b.columns_mut(q, p).copy_from(&st.b2);
    let mut c = Mat::zeros(p + n, n);
    c.view_mut((p, 0), (n, n)).fill_with_identity();
    let mut dd = Mat::zeros(p + n, q + p);
    dd.view_mut((0, 0), (p, q)).copy_from(d);
    dd.view_mut((0, q), (p, p)).fill_with_identity();
    StateSpace::new(st.a, b, c, dd).expect("consistent [N M] dimensions")
}

// Relative size of the leftover block-mode input term below which the
// cancellation counts as exact.
const CANCEL_REL: f64 = 1e-6;

/// `H = [𝒩 ℳ] [I; −G]` reduced to a minimal realization.
///
/// Every block pole ±jω_k is cancelled by a zero of `H`. The cascade's block
/// states follow `x_b = Y x_G` with `𝒜 Y − Y A_G = ℬ₂ C_G`, and their direct
/// input term `ℬ₁ − ℬ₂ D_G − Y B_G` vanishes because `ℬ₁` matches `ℬ₂ G` at
/// the block poles. Projecting onto that subspace removes the block modes
/// exactly; `minreal` then strips whatever else is non-minimal. A generic
/// staircase on the full cascade loses these modes to roundoff once the
/// support set grows.
pub fn assemble_error_system(blocks: &[BlockRealization], g: &StateSpace, minreal_tol: f64) -> Result<StateSpace> {
    let (p, q) = (g.outputs(), g.inputs());
    if let Some(bad) = blocks.iter().find(|b| b.b1.ncols() != q || b.b2.ncols() != p) {
        return Err(Error::DimensionMismatch {
            op: "assemble_error_system",
            detail: alloc::format!(
                "block has {}/{} input columns, system is {}x{}",
                bad.b1.ncols(),
                bad.b2.ncols(),
                p,
                q
            ),
        });
    }
    let st = stack(blocks, p, q);
    let nb = st.a.nrows();
    let n = g.states();
    let y = solve_sylvester(&st.a, &(-g.a()), &(&st.b2 * g.c())).map_err(|e| match e {
        Error::IllPosedLyapunov => Error::ResidualImaginaryPoles,
        e => e,
    })?;
    let leftover = &st.b1 - &st.b2 * g.d() - &y * g.b();
    let scale = st.b1.norm() + st.b2.norm() * g.d().norm() + y.norm() * g.b().norm();
    if leftover.norm() > CANCEL_REL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::ResidualImaginaryPoles);
    }
    let mut c = Mat::zeros(p + nb, n);
    c.view_mut((0, 0), (p, n)).copy_from(&(-g.c()));
    c.view_mut((p, 0), (nb, n)).copy_from(&y);
    // D − D_G on the static channel, nothing on the block channels
    let h = StateSpace::new(g.a().clone(), g.b().clone(), c, Mat::zeros(p + nb, q))?.minreal(minreal_tol);
    if h.states() > 0 {
        let guard = IMAG_AXIS_GUARD * h.a().norm();
        if h.poles()?.iter().any(|l| l.re.abs() <= guard) {
            return Err(Error::ResidualImaginaryPoles);
        }
    }
    Ok(h)
}

/// `R = M⁻¹N = [𝒜 − ℬ₂Ŵ | ℬ₂D − ℬ₁; −Ŵ | D]` with `Ŵ = W₀⁻¹ [W₁ … W_ℓ]`.
pub fn realize_interpolant(
    blocks: &[BlockRealization],
    weights: &WeightMatrix,
    d: &Mat,
    w0_condition_cap: f64,
) -> Result<StateSpace> {
    let (p, q) = d.shape();
    let st = stack(blocks, p, q);
    let n = st.a.nrows();
    if weights.w.shape() != (p, p + n) {
        return Err(Error::DimensionMismatch {
            op: "realize_interpolant",
            detail: alloc::format!("W is {:?}, expected ({}, {})", weights.w.shape(), p, p + n),
        });
    }
    let condition = weights.w0_condition();
    if !(condition <= w0_condition_cap) {
        return Err(Error::SingularW0 { condition });
    }
    let w1 = weights.w.columns(p, n).into_owned();
    let w_hat = LU::new(weights.w0()).solve(&w1).ok_or(Error::SingularW0 { condition })?;
    let a = &st.a - &st.b2 * &w_hat;
    let b = &st.b2 * d - &st.b1;
    StateSpace::new(a, b, -w_hat, d.clone())
}

/// Per-block residue weights: `W_k` for ω = 0 blocks and `(W_a + jW_b)/2` for
/// rotation blocks. Interpolation at `ω_k` needs each one well conditioned.
pub fn residue_weights(blocks: &[BlockRealization], weights: &WeightMatrix) -> Vec<CMat> {
    let p = weights.outputs();
    let mut off = p;
    let mut out = Vec::with_capacity(blocks.len());
    for blk in blocks {
        let d = blk.states();
        let cols = weights.w.columns(off, d);
        if blk.omega == 0.0 {
            out.push(cols.map(|v| Complex64::new(v, 0.0)));
        } else {
            let r = d / 2;
            out.push(CMat::from_fn(p, r, |i, j| Complex64::new(cols[(i, j)], cols[(i, r + j)]) * 0.5));
        }
        off += d;
    }
    out
}

/// Largest `σ_max/σ_min` over [`residue_weights`].
pub fn residue_condition(blocks: &[BlockRealization], weights: &WeightMatrix) -> f64 {
    residue_weights(blocks, weights)
        .iter()
        .map(|m| {
            let s = singular_values(m);
            match (s.first(), s.last()) {
                (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
                (Some(_), Some(_)) => f64::INFINITY,
                _ => 1.0,
            }
        })
        .fold(1.0, f64::max)
}
