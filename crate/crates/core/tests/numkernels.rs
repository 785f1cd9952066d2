mod common;

use aaa_mor_core::numkernels::{singular_values, solve_lyapunov, solve_sylvester, svd_truncate, sym_eig_ascending};
use aaa_mor_core::{CMat, Complex64, Mat};
use common::*;
use proptest::prelude::*;

fn random_complex(r: &mut rand::rngs::StdRng, p: usize, q: usize) -> CMat {
    let re = gaussian(r, p, q);
    let im = gaussian(r, p, q);
    CMat::from_fn(p, q, |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
}

#[test]
fn lyapunov_residual_n200() {
    let mut r = rng(21);
    let ts = random_stable(&mut r, Shape::new(200, 1, 3));
    let b = ts.sys.b();
    let q = b * b.transpose();
    let res = solve_lyapunov(ts.sys.a(), &q).unwrap();
    let check = ts.sys.a() * &res.p + &res.p * ts.sys.a().transpose() + &q;
    assert!(check.norm() / q.norm() <= 1e-10, "residual {}", check.norm() / q.norm());
    assert!(res.residual <= 1e-10);
    assert_eq!(res.p, res.p.transpose());
}

#[test]
fn lyapunov_n30_example() {
    let mut r = rng(22);
    let ts = random_stable(&mut r, Shape::new(30, 1, 2));
    let q = ts.sys.b() * ts.sys.b().transpose();
    assert!(solve_lyapunov(ts.sys.a(), &q).unwrap().residual <= 1e-10);
}

#[test]
fn sym_eig_examples() {
    let e = sym_eig_ascending(&Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0, 2.0]))).unwrap();
    assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    let id = sym_eig_ascending(&Mat::identity(4, 4)).unwrap();
    assert!(id.values.iter().all(|v| (v - 1.0).abs() < 1e-15));
    assert!((id.vectors.transpose() * &id.vectors - Mat::identity(4, 4)).norm() < 1e-14);
}

#[test]
fn svd_truncate_tail_energy_3x3() {
    let mut r = rng(23);
    let m = random_complex(&mut r, 3, 3);
    let s = singular_values(&m);
    let t = svd_truncate(&m, 1).unwrap();
    let err = (&m - t.recompose()).norm_squared();
    assert!((err - (s[1] * s[1] + s[2] * s[2])).abs() <= 1e-10 * err);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lyapunov_residual_small(seed in any::<u64>(), n in 1usize..60, q in 1usize..4) {
        let mut r = rng(seed);
        let ts = random_stable(&mut r, Shape::new(n, 1, q));
        let bq = ts.sys.b() * ts.sys.b().transpose();
        let res = solve_lyapunov(ts.sys.a(), &bq).unwrap();
        prop_assert!(res.residual <= 1e-10, "residual {}", res.residual);
    }

    #[test]
    fn sylvester_residual(seed in any::<u64>(), m in 1usize..12, n in 1usize..12) {
        let mut r = rng(seed);
        let a = random_stable(&mut r, Shape::new(m, 1, 1)).sys.a().clone();
        let b = random_stable(&mut r, Shape::new(n, 1, 1)).sys.a().clone();
        let c = gaussian(&mut r, m, n);
        // spec(A) and spec(−B) are on opposite sides of the axis
        let x = solve_sylvester(&a, &b, &c).unwrap();
        prop_assert!((&a * &x + &x * &b - &c).norm() <= 1e-10 * c.norm() * (1.0 + x.norm()));
    }

    #[test]
    fn sym_eig_orthonormal_and_reconstructs(seed in any::<u64>(), m in 1usize..30) {
        let mut r = rng(seed);
        let g = gaussian(&mut r, m, m);
        let x = &g + g.transpose();
        let e = sym_eig_ascending(&x).unwrap();
        let v = &e.vectors;
        prop_assert!((v.transpose() * v - Mat::identity(m, m)).norm() <= 1e-10);
        let lam = Mat::from_diagonal(&nalgebra::DVector::from_vec(e.values.clone()));
        prop_assert!((v * lam * v.transpose() - &x).norm() <= 1e-10 * x.norm());
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn svd_truncate_error_is_tail_energy(seed in any::<u64>(), p in 1usize..6, q in 1usize..6, pick in 0usize..6) {
        let mut r = rng(seed);
        let m = random_complex(&mut r, p, q);
        let k = p.min(q);
        let rank = 1 + pick % k;
        let t = svd_truncate(&m, rank).unwrap();
        let s = singular_values(&m);
        let tail: f64 = s[rank..].iter().map(|v| v * v).sum();
        let err = (&m - t.recompose()).norm_squared();
        prop_assert!((err - tail).abs() <= 1e-10 * m.norm_squared());
        prop_assert!((t.u.adjoint() * &t.u - CMat::identity(rank, rank)).norm() <= 1e-12);
        prop_assert!((t.v.adjoint() * &t.v - CMat::identity(rank, rank)).norm() <= 1e-12);
        prop_assert!(t.s.windows(2).all(|w| w[0] >= w[1]) && t.s.iter().all(|v| *v >= 0.0));
        prop_assert!(svd_truncate(&m, k + 1).is_err());
        prop_assert!(svd_truncate(&m, 0).is_err());
    }
}
