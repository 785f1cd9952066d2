#![allow(dead_code)]

use std::f64::consts::PI;

use aaa_mor_core::{CMat, Complex64, Mat, StateSpace};
use nalgebra::linalg::{QR, SVD};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut StdRng, r: usize, c: usize) -> Mat {
    Mat::from_fn(r, c, |_, _| rng.sample::<f64, _>(StandardNormal))
}

pub fn orthogonal(rng: &mut StdRng, n: usize) -> Mat {
    let qr = QR::new(gaussian(rng, n, n));
    let (q, r) = qr.unpack();
    // sign fix so the distribution is Haar
    let mut q = q;
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Pole-residue form `G(s) = Σ l_i r_iᵀ / (s − λ_i) + D`, built alongside the
/// state-space data so it does not go through any solver under test.
#[derive(Clone)]
pub struct Modal {
    pub poles: Vec<Complex64>,
    pub left: CMat,
    pub right: CMat,
    pub d: CMat,
}

impl Modal {
    pub fn eval(&self, omega: f64) -> CMat {
        let s = Complex64::new(0.0, omega);
        let (p, q) = self.d.shape();
        let mut g = self.d.clone();
        for (i, lam) in self.poles.iter().enumerate() {
            let f = Complex64::new(1.0, 0.0) / (s - lam);
            for r in 0..p {
                let lr = self.left[(r, i)] * f;
                for c in 0..q {
                    g[(r, c)] += lr * self.right[(i, c)];
                }
            }
        }
        g
    }

    pub fn sigma_max(&self, omega: f64) -> f64 {
        sigma_max(&self.eval(omega))
    }

    /// Max of `σ_max` over `grid`, with its location.
    pub fn grid_peak(&self, grid: &[f64]) -> (f64, f64) {
        grid.iter().fold((0.0, 0.0), |best, &w| {
            let s = self.sigma_max(w);
            if s > best.0 {
                (s, w)
            } else {
                best
            }
        })
    }
}

pub fn sigma_max(m: &CMat) -> f64 {
    if m.nrows() == 1 || m.ncols() == 1 {
        return m.norm();
    }
    SVD::new(m.clone(), false, false).singular_values.iter().fold(0.0, |a: f64, b| a.max(*b))
}

pub struct TestSystem {
    pub sys: StateSpace,
    pub modal: Modal,
}

#[derive(Clone, Copy)]
pub struct Shape {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub feedthrough: bool,
    pub min_zeta: f64,
}

impl Shape {
    pub fn new(n: usize, p: usize, q: usize) -> Self {
        Self { n, p, q, feedthrough: false, min_zeta: 0.02 }
    }
}

/// Random stable system: block-diagonal spectrum of real poles and lightly to
/// well damped pairs, hidden behind a random orthogonal similarity.
pub fn random_stable(rng: &mut StdRng, shape: Shape) -> TestSystem {
    let n = shape.n;
    let mut a0 = Mat::zeros(n, n);
    // eigenvectors of a0 as columns, with their (unitary) inverse
    let mut v = CMat::zeros(n, n);
    let mut poles = Vec::with_capacity(n);
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let hj = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    let mut i = 0;
    while i < n {
        if i + 1 < n && rng.random_bool(0.6) {
            let w = 10f64.powf(rng.random_range(-1.0..1.0));
            let zeta = rng.random_range(shape.min_zeta..0.7);
            let sigma = zeta * w;
            a0[(i, i)] = -sigma;
            a0[(i + 1, i + 1)] = -sigma;
            a0[(i, i + 1)] = w;
            a0[(i + 1, i)] = -w;
            // [[−σ, ω], [−ω, −σ]] [1, ±j]ᵀ = (−σ ± jω) [1, ±j]ᵀ
            v[(i, i)] = h;
            v[(i + 1, i)] = hj;
            v[(i, i + 1)] = h;
            v[(i + 1, i + 1)] = -hj;
            poles.push(Complex64::new(-sigma, w));
            poles.push(Complex64::new(-sigma, -w));
            i += 2;
        } else {
            a0[(i, i)] = -(10f64.powf(rng.random_range(-1.0..1.0)));
            v[(i, i)] = Complex64::new(1.0, 0.0);
            poles.push(Complex64::new(a0[(i, i)], 0.0));
            i += 1;
        }
    }
    let q_mat = orthogonal(rng, n);
    let a = &q_mat * &a0 * q_mat.transpose();
    let b = gaussian(rng, n, shape.q);
    let c = gaussian(rng, shape.p, n);
    let d = if shape.feedthrough { gaussian(rng, shape.p, shape.q) } else { Mat::zeros(shape.p, shape.q) };
    let cplx = |m: &Mat| m.map(|x| Complex64::new(x, 0.0));
    let left = cplx(&c) * cplx(&q_mat) * &v;
    let right = v.adjoint() * cplx(&q_mat.transpose()) * cplx(&b);
    let modal = Modal { poles, left, right, d: cplx(&d) };
    let sys = StateSpace::new(a, b, c, d).unwrap();
    TestSystem { sys, modal }
}

pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..count).map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64)).collect()
}

/// Log grid plus ω = 0.
pub fn oracle_grid(count: usize) -> Vec<f64> {
    let mut g = vec![0.0];
    g.extend(log_grid(1e-4, 1e4, count));
    g
}

/// `(1/2π) ∫ G(jω) G(jω)* dω` over the real line by composite Simpson in
/// `ω = tan θ`; the system must be strictly proper.
pub fn quad_output_gramian(modal: &Modal, panels: usize) -> Mat {
    let p = modal.d.nrows();
    let mut acc = Mat::zeros(p, p);
    let n = panels + panels % 2;
    let h = (PI / 2.0) / n as f64;
    for k in 0..=n {
        let theta = k as f64 * h;
        if k == n {
            break; // integrand vanishes at θ = π/2
        }
        let w = theta.tan();
        let g = modal.eval(w);
        let f = (&g * g.adjoint()).map(|z| z.re) / theta.cos().powi(2);
        let c = if k == 0 { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += f * c;
    }
    // one-sided integral, the integrand's real part is even in ω
    acc * (h / 3.0) / PI
}

pub fn sys_sigma_at(sys: &StateSpace, omega: f64) -> f64 {
    sigma_max(&sys.eval_freq(omega).unwrap())
}

pub fn transfer_gap(a: &StateSpace, b: &StateSpace, omegas: &[f64]) -> f64 {
    omegas
        .iter()
        .map(|&w| {
            let ga = a.eval_freq(w).unwrap();
            let gb = b.eval_freq(w).unwrap();
            sigma_max(&(ga - &gb)) / (1.0 + sigma_max(&gb))
        })
        .fold(0.0, f64::max)
}
