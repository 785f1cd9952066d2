use crate::{CMat, Error, Mat, Result, StateSpace};

/// Peak frequencies below this (rad/s) are snapped to ω = 0.
pub const ZERO_SNAP: f64 = 1e-9;
/// Relative separation below which two support frequencies coincide.
pub const DUPLICATE_REL: f64 = 1e-6;

/// An interpolation frequency with its cached sample `G(jω)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportPoint {
    pub omega: f64,
    pub sample: CMat,
    pub is_zero: bool,
}

impl SupportPoint {
    /// Samples `g` at `omega`, snapping near-zero frequencies to DC.
    pub fn sample(g: &StateSpace, omega: f64) -> Result<Self> {
        if !(omega >= 0.0) || omega.is_infinite() {
            return Err(Error::InvalidArgument("support frequency must be finite and nonnegative"));
        }
        let omega = snap_zero(omega);
        Ok(Self { omega, sample: g.eval_freq(omega)?, is_zero: omega == 0.0 })
    }
}

pub fn snap_zero(omega: f64) -> f64 {
    if omega < ZERO_SNAP {
        0.0
    } else {
        omega
    }
}

/// Whether `a` and `b` are the same support frequency.
pub fn coincides(a: f64, b: f64) -> bool {
    let diff = (a - b).abs();
    diff <= ZERO_SNAP || diff <= DUPLICATE_REL * a.max(b)
}

/// Real realization `[A_k | B_k1 B_k2; I | 0 0]` of one `[N_k M_k]` block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockRealization {
    pub omega: f64,
    pub a: Mat,
    pub b1: Mat,
    pub b2: Mat,
}

impl BlockRealization {
    /// Number of states the block contributes.
    pub fn states(&self) -> usize {
        self.a.nrows()
    }

    /// `[[0, ωI], [−ωI, 0]]` with identity blocks of size `r`.
    pub(crate) fn rotation(omega: f64, r: usize) -> Mat {
        let mut a = Mat::zeros(2 * r, 2 * r);
        for i in 0..r {
            a[(i, r + i)] = omega;
            a[(r + i, i)] = -omega;
        }
        a
    }

    /// The block as a system from `[u; y]` (q + p inputs) to its states.
    pub fn to_state_space(&self) -> StateSpace {
        let d = self.states();
        let (q, p) = (self.b1.ncols(), self.b2.ncols());
        let mut b = Mat::zeros(d, q + p);
        b.columns_mut(0, q).copy_from(&self.b1);
        b.columns_mut(q, p).copy_from(&self.b2);
        StateSpace::new(self.a.clone(), b, Mat::identity(d, d), Mat::zeros(d, q + p))
            .expect("block dimensions are consistent")
    }
}

const IMAG_AT_ZERO_REL: f64 = 1e-12;

/// Full-interpolation block for one support point.
///
/// ω = 0: `A_k = 0_p`, `B_k1 = G(0)`, `B_k2 = I_p`.
/// ω ≠ 0: `A_k = [[0, ωI], [−ωI, 0]]`, `B_k1 = [Re G; −Im G]`, `B_k2 = [I; 0]`,
/// which folds the conjugate pair ±jω into one real block.
pub fn build_block(point: &SupportPoint) -> Result<BlockRealization> {
    let g = &point.sample;
    let (p, q) = g.shape();
    let re = g.map(|z| z.re);
    let im = g.map(|z| z.im);
    if point.is_zero {
        if im.norm() > IMAG_AT_ZERO_REL * re.norm().max(1.0) {
            return Err(Error::NonRealSampleAtZero);
        }
        return Ok(BlockRealization {
            omega: 0.0,
            a: Mat::zeros(p, p),
            b1: re,
            b2: Mat::identity(p, p),
        });
    }
    let w = point.omega;
    let mut b1 = Mat::zeros(2 * p, q);
    b1.rows_mut(0, p).copy_from(&re);
    b1.rows_mut(p, p).copy_from(&(-im));
    let mut b2 = Mat::zeros(2 * p, p);
    b2.rows_mut(0, p).fill_with_identity();
    Ok(BlockRealization { omega: w, a: BlockRealization::rotation(w, p), b1, b2 })
}
