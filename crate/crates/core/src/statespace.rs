//! Real state-space systems `G(s) = C (sI − A)⁻¹ B + D` and their exact
//! structural algebra.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::linalg::{Hessenberg, LU, QR, SVD};

use crate::numkernels::{self, sigma_max};
use crate::{CMat, Complex64, Error, Mat, Result};

/// Default relative tolerance for [`StateSpace::minreal`].
pub const DEFAULT_MINREAL_TOL: f64 = 1e-9;

/// A continuous-time LTI system with `n` states, `q` inputs and `p` outputs.
///
/// `n = 0` is allowed and describes a static gain `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    a: Mat,
    b: Mat,
    c: Mat,
    d: Mat,
}

/// A frequency response sample `G(jω)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySample {
    pub omega: f64,
    pub value: CMat,
}

fn to_complex(m: &Mat) -> CMat {
    m.map(|v| Complex64::new(v, 0.0))
}

impl StateSpace {
    pub fn new(a: Mat, b: Mat, c: Mat, d: Mat) -> Result<Self> {
        let n = a.nrows();
        let (p, q) = d.shape();
        let ok = a.ncols() == n && b.shape() == (n, q) && c.shape() == (p, n);
        if !ok {
            return Err(Error::DimensionMismatch {
                op: "StateSpace::new",
                detail: format!(
                    "A {:?}, B {:?}, C {:?}, D {:?}",
                    a.shape(),
                    b.shape(),
                    c.shape(),
                    d.shape()
                ),
            });
        }
        if a.iter().chain(b.iter()).chain(c.iter()).chain(d.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("state-space data"));
        }
        Ok(Self { a, b, c, d })
    }

    /// Static gain with no states.
    pub fn static_gain(d: Mat) -> Self {
        let (p, q) = d.shape();
        Self { a: Mat::zeros(0, 0), b: Mat::zeros(0, q), c: Mat::zeros(p, 0), d }
    }

    pub fn a(&self) -> &Mat {
        &self.a
    }
    pub fn b(&self) -> &Mat {
        &self.b
    }
    pub fn c(&self) -> &Mat {
        &self.c
    }
    pub fn d(&self) -> &Mat {
        &self.d
    }

    pub fn into_parts(self) -> (Mat, Mat, Mat, Mat) {
        (self.a, self.b, self.c, self.d)
    }

    pub fn states(&self) -> usize {
        self.a.nrows()
    }
    pub fn inputs(&self) -> usize {
        self.d.ncols()
    }
    pub fn outputs(&self) -> usize {
        self.d.nrows()
    }

    /// `C (jωI − A)⁻¹ B + D` via one LU solve.
    pub fn eval_freq(&self, omega: f64) -> Result<CMat> {
        self.eval_s(Complex64::new(0.0, omega))
            .map_err(|_| Error::SingularAtFrequency { omega })
    }

    /// Transfer matrix at an arbitrary complex point `s`.
    pub fn eval_s(&self, s: Complex64) -> Result<CMat> {
        let n = self.states();
        let d = to_complex(&self.d);
        if n == 0 {
            return Ok(d);
        }
        let mut m = to_complex(&self.a).map(|z| -z);
        for i in 0..n {
            m[(i, i)] += s;
        }
        let scale = m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        let lu = LU::new(m);
        let u = lu.u();
        let min_pivot = (0..n).map(|i| u[(i, i)].norm()).fold(f64::INFINITY, f64::min);
        if !(min_pivot > 1e3 * f64::EPSILON * scale) {
            return Err(Error::SingularAtFrequency { omega: s.im });
        }
        let x = lu.solve(&to_complex(&self.b)).ok_or(Error::SingularAtFrequency { omega: s.im })?;
        Ok(to_complex(&self.c) * x + d)
    }

    pub fn sample(&self, omega: f64) -> Result<FrequencySample> {
        Ok(FrequencySample { omega, value: self.eval_freq(omega)? })
    }

    /// Realization of `G(s) − R(s)`.
    pub fn subtract(&self, r: &StateSpace) -> Result<StateSpace> {
        if self.outputs() != r.outputs() || self.inputs() != r.inputs() {
            return Err(Error::DimensionMismatch {
                op: "subtract",
                detail: format!(
                    "{}x{} vs {}x{}",
                    self.outputs(),
                    self.inputs(),
                    r.outputs(),
                    r.inputs()
                ),
            });
        }
        let (n1, n2) = (self.states(), r.states());
        let n = n1 + n2;
        let mut a = Mat::zeros(n, n);
        a.view_mut((0, 0), (n1, n1)).copy_from(&self.a);
        a.view_mut((n1, n1), (n2, n2)).copy_from(&r.a);
        let mut b = Mat::zeros(n, self.inputs());
        b.view_mut((0, 0), (n1, self.inputs())).copy_from(&self.b);
        b.view_mut((n1, 0), (n2, self.inputs())).copy_from(&r.b);
        let mut c = Mat::zeros(self.outputs(), n);
        c.view_mut((0, 0), (self.outputs(), n1)).copy_from(&self.c);
        c.view_mut((0, n1), (self.outputs(), n2)).copy_from(&(-&r.c));
        Ok(StateSpace { a, b, c, d: &self.d - &r.d })
    }

    /// Cascade whose transfer is `self(s) · right(s)` (`right` acts first).
    pub fn series(&self, right: &StateSpace) -> Result<StateSpace> {
        if self.inputs() != right.outputs() {
            return Err(Error::DimensionMismatch {
                op: "series",
                detail: format!("left has {} inputs, right has {} outputs", self.inputs(), right.outputs()),
            });
        }
        let (nl, nr) = (self.states(), right.states());
        let n = nl + nr;
        let q = right.inputs();
        let p = self.outputs();
        let mut a = Mat::zeros(n, n);
        a.view_mut((0, 0), (nl, nl)).copy_from(&self.a);
        a.view_mut((0, nl), (nl, nr)).copy_from(&(&self.b * &right.c));
        a.view_mut((nl, nl), (nr, nr)).copy_from(&right.a);
        let mut b = Mat::zeros(n, q);
        b.view_mut((0, 0), (nl, q)).copy_from(&(&self.b * &right.d));
        b.view_mut((nl, 0), (nr, q)).copy_from(&right.b);
        let mut c = Mat::zeros(p, n);
        c.view_mut((0, 0), (p, nl)).copy_from(&self.c);
        c.view_mut((0, nl), (p, nr)).copy_from(&(&self.d * &right.c));
        Ok(StateSpace { a, b, c, d: &self.d * &right.d })
    }

    /// Stacks the outputs of systems sharing one input vector.
    pub fn vertcat(blocks: &[StateSpace]) -> Result<StateSpace> {
        let first = blocks.first().ok_or(Error::InvalidArgument("vertcat of an empty list"))?;
        let q = first.inputs();
        if let Some(bad) = blocks.iter().find(|s| s.inputs() != q) {
            return Err(Error::DimensionMismatch {
                op: "vertcat",
                detail: format!("input counts {} and {}", q, bad.inputs()),
            });
        }
        let n: usize = blocks.iter().map(StateSpace::states).sum();
        let p: usize = blocks.iter().map(StateSpace::outputs).sum();
        let mut a = Mat::zeros(n, n);
        let mut b = Mat::zeros(n, q);
        let mut c = Mat::zeros(p, n);
        let mut d = Mat::zeros(p, q);
        let (mut off_n, mut off_p) = (0, 0);
        for s in blocks {
            let (ns, ps) = (s.states(), s.outputs());
            a.view_mut((off_n, off_n), (ns, ns)).copy_from(&s.a);
            b.view_mut((off_n, 0), (ns, q)).copy_from(&s.b);
            c.view_mut((off_p, off_n), (ps, ns)).copy_from(&s.c);
            d.view_mut((off_p, 0), (ps, q)).copy_from(&s.d);
            off_n += ns;
            off_p += ps;
        }
        Ok(StateSpace { a, b, c, d })
    }

    /// `(Aᵀ, Cᵀ, Bᵀ, Dᵀ)`; its transfer matrix is `G(s)ᵀ`.
    pub fn dual(&self) -> StateSpace {
        StateSpace {
            a: self.a.transpose(),
            b: self.c.transpose(),
            c: self.b.transpose(),
            d: self.d.transpose(),
        }
    }

    /// Removes uncontrollable and then unobservable modes with an orthogonal
    /// staircase reduction.
    ///
    /// Rank decisions drop singular values below `tol` times the scale of the
    /// block being compressed (‖B‖ for the first step, ‖A‖ afterwards). The
    /// two passes repeat until no state is removed: hidden modes that one
    /// pass misses through accumulated rounding usually show up once the
    /// other kind has been stripped. A pass that removes nothing returns its
    /// input unchanged, so the operation is idempotent.
    pub fn minreal(&self, tol: f64) -> StateSpace {
        let mut cur = self.clone();
        loop {
            let ctrb = controllable_part(&cur, tol);
            let obsv = controllable_part(&ctrb.dual(), tol).dual();
            if obsv.states() == cur.states() {
                return cur;
            }
            cur = obsv;
        }
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        numkernels::eigenvalues(&self.a)
    }

    /// All poles strictly in the open left half-plane.
    pub fn is_stable(&self) -> Result<bool> {
        Ok(self.poles()?.iter().all(|l| l.re < 0.0))
    }

    /// Largest singular value of `G(jω)`.
    pub fn sigma_max_at(&self, omega: f64) -> Result<f64> {
        Ok(sigma_max(&self.eval_freq(omega)?))
    }

    /// Scales the outputs: `k · G(s)`.
    pub fn scale_output(&self, k: f64) -> StateSpace {
        StateSpace { a: self.a.clone(), b: self.b.clone(), c: &self.c * k, d: &self.d * k }
    }

    /// State coordinate change `x = T z`; requires `T` invertible.
    pub fn similarity(&self, t: &Mat) -> Result<StateSpace> {
        let n = self.states();
        if t.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                op: "similarity",
                detail: format!("T is {:?}, n = {}", t.shape(), n),
            });
        }
        let ti = t.clone().try_inverse().ok_or(Error::InvalidArgument("singular similarity"))?;
        Ok(StateSpace { a: &ti * &self.a * t, b: &ti * &self.b, c: &self.c * t, d: self.d.clone() })
    }
}

// Orthogonal n×n matrix whose leading `r` columns span the columns of `u1`.
fn complete_basis(u1: &Mat) -> Mat {
    let (m, r) = u1.shape();
    let mut aug = Mat::zeros(m, r + m);
    aug.view_mut((0, 0), (m, r)).copy_from(u1);
    aug.view_mut((0, r), (m, m)).fill_with_identity();
    QR::new(aug).q()
}

fn controllable_part(sys: &StateSpace, tol: f64) -> StateSpace {
    let n = sys.states();
    if n == 0 {
        return sys.clone();
    }
    let mut a = sys.a.clone();
    let mut b = sys.b.clone();
    let mut c = sys.c.clone();
    let a_scale = a.norm();
    let mut k = 0;
    let mut prev = 0;
    let mut first = true;
    while k < n {
        let blk = if first {
            b.clone()
        } else {
            a.view((k, k - prev), (n - k, prev)).into_owned()
        };
        if blk.ncols() == 0 {
            break;
        }
        let svd = SVD::new(blk, true, false);
        let s = &svd.singular_values;
        let s_max = s.iter().fold(0.0f64, |m, v| m.max(*v));
        let scale = if first { s_max } else { a_scale.max(s_max) };
        let threshold = tol * scale;
        let r = s.iter().filter(|v| **v > threshold && **v > 0.0).count();
        if r == 0 {
            break;
        }
        let u = svd.u.expect("requested U");
        let order: Vec<usize> = {
            let mut idx: Vec<usize> = (0..s.len()).collect();
            idx.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
            idx
        };
        let u1 = Mat::from_fn(n - k, r, |i, j| u[(i, order[j])]);
        let qm = complete_basis(&u1);
        // Apply blockdiag(I_k, Q) on both sides.
        let right = a.columns(k, n - k) * &qm;
        a.columns_mut(k, n - k).copy_from(&right);
        let left = qm.transpose() * a.rows(k, n - k);
        a.rows_mut(k, n - k).copy_from(&left);
        let bl = qm.transpose() * b.rows(k, n - k);
        b.rows_mut(k, n - k).copy_from(&bl);
        let cr = c.columns(k, n - k) * &qm;
        c.columns_mut(k, n - k).copy_from(&cr);
        // The compressed block is zero below its leading r rows.
        if first {
            b.rows_mut(k + r, n - k - r).fill(0.0);
        } else {
            a.view_mut((k + r, k - prev), (n - k - r, prev)).fill(0.0);
        }
        first = false;
        prev = r;
        k += r;
    }
    if k == n {
        return sys.clone();
    }
    StateSpace {
        a: a.view((0, 0), (k, k)).into_owned(),
        b: b.rows(0, k).into_owned(),
        c: c.columns(0, k).into_owned(),
        d: sys.d.clone(),
    }
}

/// Repeated frequency-response evaluation.
///
/// `A` is reduced to upper Hessenberg form once, so each evaluation costs
/// O(n²) per input instead of a dense factorization.
pub struct FrequencyResponse {
    h: Mat,
    b: CMat,
    c: CMat,
    d: CMat,
}

impl FrequencyResponse {
    pub fn new(sys: &StateSpace) -> Self {
        let (q, h) = Hessenberg::new(sys.a.clone()).unpack();
        FrequencyResponse {
            b: to_complex(&(q.transpose() * &sys.b)),
            c: to_complex(&(&sys.c * &q)),
            d: to_complex(&sys.d),
            h,
        }
    }

    pub fn eval(&self, omega: f64) -> Result<CMat> {
        let n = self.h.nrows();
        if n == 0 {
            return Ok(self.d.clone());
        }
        let s = Complex64::new(0.0, omega);
        let mut m = to_complex(&self.h).map(|z| -z);
        for i in 0..n {
            m[(i, i)] += s;
        }
        let scale = m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        let mut x = self.b.clone();
        // Gaussian elimination; only the subdiagonal needs clearing.
        for k in 0..n.saturating_sub(1) {
            if m[(k + 1, k)].norm() > m[(k, k)].norm() {
                m.swap_rows(k, k + 1);
                x.swap_rows(k, k + 1);
            }
            let piv = m[(k, k)];
            if piv.norm() == 0.0 {
                continue;
            }
            let l = m[(k + 1, k)] / piv;
            if l.norm() == 0.0 {
                continue;
            }
            for j in k..n {
                let t = m[(k, j)];
                m[(k + 1, j)] -= l * t;
            }
            for j in 0..x.ncols() {
                let t = x[(k, j)];
                x[(k + 1, j)] -= l * t;
            }
        }
        let min_pivot = (0..n).map(|i| m[(i, i)].norm()).fold(f64::INFINITY, f64::min);
        if !(min_pivot > 1e3 * f64::EPSILON * scale) {
            return Err(Error::SingularAtFrequency { omega });
        }
        for j in 0..x.ncols() {
            for i in (0..n).rev() {
                let mut acc = x[(i, j)];
                for k in i + 1..n {
                    acc -= m[(i, k)] * x[(k, j)];
                }
                x[(i, j)] = acc / m[(i, i)];
            }
        }
        Ok(&self.c * x + &self.d)
    }
}
