//! L∞ norm by Hamiltonian level-set iteration, and the H2 error metric.

use alloc::vec::Vec;

use nalgebra::linalg::LU;
use num_traits::Float;

use crate::numkernels::{eigenvalues, sigma_max, solve_lyapunov};
use crate::{Error, Mat, Result, StateSpace};

pub const DEFAULT_REL_TOL: f64 = 1e-6;
/// Poles with `|Re λ| <= IMAG_AXIS_GUARD · ‖A‖_F` are treated as lying on the axis.
pub const IMAG_AXIS_GUARD: f64 = 1e-8;

// Hamiltonian eigenvalues with |Re λ| below this fraction of max(|λ|, spectral
// scale) count as imaginary. Loose on purpose: spurious hits only cost an
// extra evaluation, a missed crossing can break the interval pairing.
const HAM_IMAG_REL: f64 = 1e-5;
const MAX_LEVEL_ITERATIONS: usize = 60;
const GOLDEN_STEPS: usize = 40;
const FALLBACK_GRID: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinfResult {
    /// Attained peak gain (a lower bound within `rel_tol` of the supremum).
    pub gamma: f64,
    /// Upper bound certified by the last Hamiltonian test.
    pub upper: f64,
    /// Frequency attaining `gamma`; `f64::INFINITY` when the feedthrough wins.
    pub omega_peak: f64,
    pub iterations: usize,
}

struct Scaled<'a> {
    sys: &'a StateSpace,
    k: f64,
}

impl Scaled<'_> {
    fn sigma(&self, omega: f64) -> Result<f64> {
        Ok(self.k * self.sys.sigma_max_at(omega)?)
    }
}

// Hamiltonian whose imaginary eigenvalues jω mark frequencies where γ is a
// singular value of G(jω); requires γ > σ_max(D).
fn hamiltonian(sys: &StateSpace, k: f64, gamma: f64) -> Option<Mat> {
    let n = sys.states();
    let (a, b) = (sys.a(), sys.b());
    let c = sys.c() * k;
    let d = sys.d() * k;
    let q = d.ncols();
    let p = d.nrows();
    let r = Mat::identity(q, q) * (gamma * gamma) - d.transpose() * &d;
    let r_lu = LU::new(r);
    let rinv_bt = r_lu.solve(&b.transpose())?;
    let rinv_dtc = r_lu.solve(&(d.transpose() * &c))?;
    let a11 = a + b * rinv_dtc;
    let g12 = b * rinv_bt;
    // I + D R⁻¹ Dᵀ
    let s = Mat::identity(p, p) + &d * r_lu.solve(&d.transpose())?;
    let g21 = c.transpose() * s * &c;
    let mut h = Mat::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&a11);
    h.view_mut((0, n), (n, n)).copy_from(&(g12 * gamma));
    h.view_mut((n, 0), (n, n)).copy_from(&(g21 * (-1.0 / gamma)));
    h.view_mut((n, n), (n, n)).copy_from(&(-a11.transpose()));
    Some(h)
}

fn check_axis(sys: &StateSpace) -> Result<Vec<crate::Complex64>> {
    let poles = sys.poles()?;
    let guard = IMAG_AXIS_GUARD * sys.a().norm();
    if poles.iter().any(|l| l.re.abs() <= guard) {
        return Err(Error::ImaginaryAxisPoles);
    }
    Ok(poles)
}

/// Peak gain `sup_ω σ_max(G(jω))` over the whole imaginary axis.
///
/// Level-set iteration: at a test level γ slightly above the best gain seen so
/// far, the imaginary eigenvalues of the γ-Hamiltonian are the frequencies
/// where some singular value equals γ. σ_max exceeds γ on whole intervals
/// between consecutive crossings, so evaluating the midpoints either raises
/// the lower bound or certifies γ as an upper bound. A golden-section pass
/// inside the final bracket sharpens the peak frequency.
pub fn linf_norm(sys: &StateSpace, rel_tol: f64) -> Result<LinfResult> {
    if !(rel_tol > 0.0) {
        return Err(Error::InvalidArgument("rel_tol must be positive"));
    }
    let d_gain = sigma_max(&sys.d().map(|v| crate::Complex64::new(v, 0.0)));
    if sys.states() == 0 {
        return Ok(LinfResult { gamma: d_gain, upper: d_gain, omega_peak: 0.0, iterations: 0 });
    }
    let poles = check_axis(sys)?;

    // Initial candidates: DC, infinity, and the most lightly damped poles.
    let mut best = sys.sigma_max_at(0.0)?;
    let mut omega_peak = 0.0;
    if d_gain > best {
        best = d_gain;
        omega_peak = f64::INFINITY;
    }
    let mut resonant: Vec<(f64, f64)> = poles
        .iter()
        .filter(|l| l.im > 0.0)
        .map(|l| ((l.im / l.re).abs() / l.norm(), l.norm()))
        .collect();
    resonant.sort_by(|x, y| y.0.total_cmp(&x.0));
    // plus the ends and middle of the pole-magnitude range, which matters when
    // the gain vanishes at DC and at infinity
    let mags = poles.iter().map(|l| l.norm()).filter(|m| *m > 0.0);
    let (lo, hi) = mags.fold((f64::INFINITY, 0.0f64), |(a, b), m| (a.min(m), b.max(m)));
    let mut candidates: Vec<f64> = resonant.iter().take(3).map(|r| r.1).collect();
    if hi > 0.0 {
        candidates.extend([lo, hi, Float::sqrt(lo * hi)]);
    }
    for w in candidates {
        let g = sys.sigma_max_at(w)?;
        if g > best {
            best = g;
            omega_peak = w;
        }
    }
    if best == 0.0 && hi > 0.0 {
        // log grid over two decades beyond the pole range
        let (a, b) = (Float::log10(lo) - 2.0, Float::log10(hi) + 2.0);
        for i in 0..=FALLBACK_GRID {
            let w = Float::powf(10.0, a + (b - a) * i as f64 / FALLBACK_GRID as f64);
            let g = sys.sigma_max_at(w)?;
            if g > best {
                best = g;
                omega_peak = w;
            }
        }
    }
    if best == 0.0 {
        return Ok(LinfResult { gamma: 0.0, upper: 0.0, omega_peak: 0.0, iterations: 0 });
    }

    // Work on G / best so levels are O(1).
    let scaled = Scaled { sys, k: 1.0 / best };
    let d_scaled = d_gain / best;
    let mut lb = 1.0;
    let spectral_scale = sys.a().norm() / (sys.states() as f64).sqrt();
    let mut upper = f64::INFINITY;
    let mut bracket: Option<(f64, f64)> = None;
    let mut iterations = 0;
    while iterations < MAX_LEVEL_ITERATIONS {
        iterations += 1;
        let level = lb * (1.0 + rel_tol);
        debug_assert!(level > d_scaled);
        let ham = hamiltonian(sys, scaled.k, level).ok_or(Error::NotConverged("Hamiltonian setup"))?;
        let eig = eigenvalues(&ham)?;
        let mut crossings: Vec<f64> = eig
            .iter()
            .filter(|l| l.re.abs() <= HAM_IMAG_REL * l.norm().max(1e-3 * spectral_scale))
            .map(|l| l.im.abs())
            .collect();
        if crossings.is_empty() {
            upper = level;
            break;
        }
        crossings.push(0.0);
        crossings.sort_by(f64::total_cmp);
        crossings.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs().max(1.0));
        let mut improved = false;
        let mut top = lb;
        for pair in crossings.windows(2) {
            let mid = 0.5 * (pair[0] + pair[1]);
            let g = scaled.sigma(mid)?;
            if g > top {
                top = g;
                omega_peak = mid;
                bracket = Some((pair[0], pair[1]));
                improved = true;
            }
        }
        if !improved || top <= level {
            lb = top;
            upper = level.max(top);
            break;
        }
        lb = top;
    }
    if upper.is_infinite() {
        upper = lb * (1.0 + rel_tol);
    }

    if let Some((lo, hi)) = bracket {
        let (w, g) = golden_max(&scaled, lo, hi, omega_peak, lb)?;
        if g > lb {
            lb = g;
            omega_peak = w;
            upper = upper.max(g);
        }
    }

    Ok(LinfResult { gamma: lb * best, upper: upper * best, omega_peak, iterations })
}

fn golden_max(f: &Scaled<'_>, lo: f64, hi: f64, w0: f64, g0: f64) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f.sigma(x1)?;
    let mut f2 = f.sigma(x2)?;
    let (mut bw, mut bg) = (w0, g0);
    for _ in 0..GOLDEN_STEPS {
        if f1 > bg {
            bw = x1;
            bg = f1;
        }
        if f2 > bg {
            bw = x2;
            bg = f2;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f.sigma(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f.sigma(x2)?;
        }
    }
    Ok((bw, bg))
}

/// `√|tr(C P Cᵀ)|` with `A P + P Aᵀ = −B Bᵀ`.
///
/// For a stable system this is the H2 norm; for an unstable one it is the
/// same Gramian expression evaluated formally (not a norm).
pub fn h2_error_metric(err_sys: &StateSpace) -> Result<f64> {
    let (b, c, d) = (err_sys.b(), err_sys.c(), err_sys.d());
    let io_scale = 1.0f64.max(b.norm() * c.norm());
    if d.norm() > 1e-12 * io_scale {
        return Err(Error::NonzeroFeedthrough);
    }
    if err_sys.states() == 0 {
        return Ok(0.0);
    }
    let gram = solve_lyapunov(err_sys.a(), &(b * b.transpose()))?;
    Ok(Float::sqrt((c * gram.p * c.transpose()).trace().abs()))
}
