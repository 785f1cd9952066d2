mod common;

use aaa_mor_core::balred::balanced_truncate;
use aaa_mor_core::norms::linf_norm;
use aaa_mor_core::{Error, Mat, StateSpace};
use common::*;
use proptest::prelude::*;

#[test]
fn full_order_is_exact() {
    let mut r = rng(61);
    let ts = random_stable(&mut r, Shape { feedthrough: true, ..Shape::new(15, 2, 3) });
    let (red, hsv) = balanced_truncate(&ts.sys, 15).unwrap();
    assert_eq!(hsv.len(), 15);
    assert!(transfer_gap(&red, &ts.sys, &log_grid(1e-3, 1e3, 60)) <= 1e-9);
}

#[test]
fn first_order_hsv_is_half() {
    let g = StateSpace::new(
        Mat::from_element(1, 1, -1.0),
        Mat::from_element(1, 1, 1.0),
        Mat::from_element(1, 1, 1.0),
        Mat::zeros(1, 1),
    )
    .unwrap();
    let (_, hsv) = balanced_truncate(&g, 0).unwrap();
    assert!((hsv[0] - 0.5).abs() < 1e-15);
}

#[test]
fn unstable_input_is_rejected() {
    let g = StateSpace::new(
        Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]),
        Mat::from_element(2, 1, 1.0),
        Mat::from_element(1, 2, 1.0),
        Mat::zeros(1, 1),
    )
    .unwrap();
    assert_eq!(balanced_truncate(&g, 1).unwrap_err(), Error::UnstableInput);
}

#[test]
fn n30_bound_every_order() {
    let mut r = rng(62);
    let ts = random_stable(&mut r, Shape::new(30, 2, 2));
    let (_, hsv) = balanced_truncate(&ts.sys, 0).unwrap();
    for k in 0..30 {
        let (red, _) = balanced_truncate(&ts.sys, k).unwrap();
        let err = linf_norm(&ts.sys.subtract(&red).unwrap(), 1e-6).unwrap().gamma;
        let tail: f64 = hsv[k..].iter().sum();
        assert!(err <= 2.0 * tail + 1e-6, "k={k}: {err} > {}", 2.0 * tail);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn hsv_properties(seed in any::<u64>(), n in 1usize..20, p in 1usize..4, q in 1usize..4) {
        let mut r = rng(seed);
        let g = random_stable(&mut r, Shape::new(n, p, q)).sys;
        let (_, hsv) = balanced_truncate(&g, 0).unwrap();
        prop_assert!(hsv.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(hsv.iter().all(|s| *s >= 0.0));
        let t = Mat::identity(n, n) + gaussian(&mut r, n, n) * (0.3 / (n as f64).sqrt());
        prop_assume!(nalgebra::linalg::SVD::new(t.clone(), false, false).singular_values.min() > 0.1);
        let (_, hsv2) = balanced_truncate(&g.similarity(&t).unwrap(), 0).unwrap();
        for (a, b) in hsv.iter().zip(&hsv2) {
            prop_assert!((a - b).abs() <= 1e-8 * hsv[0]);
        }
    }

    #[test]
    fn truncation_is_stable_and_bounded(seed in any::<u64>(), n in 2usize..16, k in 1usize..16) {
        let mut r = rng(seed);
        let g = random_stable(&mut r, Shape { feedthrough: true, ..Shape::new(n, 2, 2) }).sys;
        let k = k.min(n - 1);
        let (red, hsv) = match balanced_truncate(&g, k) {
            Ok(v) => v,
            Err(Error::InvalidArgument(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(format!("{e:?}"))),
        };
        prop_assert!(red.is_stable().unwrap());
        prop_assert_eq!(red.d(), g.d());
        let err = linf_norm(&g.subtract(&red).unwrap(), 1e-6).unwrap().gamma;
        let tail: f64 = hsv[k..].iter().sum();
        prop_assert!(err <= 2.0 * tail + 1e-6);
    }
}
