mod common;

use aaa_mor_core::{CMat, Complex64, Mat, StateSpace};
use common::*;
use proptest::prelude::*;

fn rel_gap(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

#[test]
fn eval_examples() {
    let stat = StateSpace::static_gain(Mat::from_element(1, 1, 2.0));
    assert_eq!(stat.eval_freq(5.0).unwrap()[(0, 0)], Complex64::new(2.0, 0.0));
    let g = StateSpace::new(
        Mat::from_element(1, 1, -1.0),
        Mat::from_element(1, 1, 1.0),
        Mat::from_element(1, 1, 1.0),
        Mat::zeros(1, 1),
    )
    .unwrap();
    assert!((g.eval_freq(0.0).unwrap()[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    assert!((g.eval_freq(1.0).unwrap()[(0, 0)] - Complex64::new(0.5, -0.5)).norm() < 1e-15);
}

#[test]
fn modal_oracle_agrees_with_eval() {
    let mut r = rng(11);
    for _ in 0..10 {
        let ts = random_stable(&mut r, Shape { feedthrough: true, ..Shape::new(12, 2, 3) });
        for w in [0.0, 0.05, 0.7, 3.0, 40.0] {
            assert!(rel_gap(&ts.sys.eval_freq(w).unwrap(), &ts.modal.eval(w)) < 1e-11);
        }
    }
}

#[test]
fn series_identity_is_neutral() {
    let mut r = rng(12);
    let ts = random_stable(&mut r, Shape::new(6, 2, 2));
    let eye = StateSpace::static_gain(Mat::identity(2, 2));
    let s = eye.series(&ts.sys).unwrap();
    for w in [0.0, 0.3, 5.0] {
        assert!(rel_gap(&s.eval_freq(w).unwrap(), &ts.modal.eval(w)) < 1e-12);
    }
}

#[test]
fn dual_transposes_transfer() {
    let mut r = rng(13);
    let ts = random_stable(&mut r, Shape { feedthrough: true, ..Shape::new(7, 2, 3) });
    let d = ts.sys.dual();
    assert_eq!((d.outputs(), d.inputs()), (3, 2));
    for w in [0.0, 0.2, 1.1, 9.0] {
        assert!(rel_gap(&d.eval_freq(w).unwrap(), &ts.modal.eval(w).transpose()) < 1e-11);
    }
}

#[test]
fn poles_examples() {
    let rot = StateSpace::new(
        Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]),
        Mat::zeros(2, 1),
        Mat::zeros(1, 2),
        Mat::zeros(1, 1),
    )
    .unwrap();
    let p = rot.poles().unwrap();
    assert!(p.iter().all(|l| l.re.abs() < 1e-14 && (l.im.abs() - 1.0).abs() < 1e-14));
    assert!(!rot.is_stable().unwrap());
}

#[test]
fn minimal_system_keeps_its_order() {
    let mut r = rng(14);
    for _ in 0..10 {
        let ts = random_stable(&mut r, Shape::new(10, 2, 2));
        assert_eq!(ts.sys.minreal(1e-9).states(), 10);
    }
}

// Minimal part plus uncontrollable and unobservable modes, mixed by a random
// orthogonal change of coordinates.
fn padded(r: &mut rand::rngs::StdRng, core: &StateSpace, extra_u: usize, extra_o: usize) -> StateSpace {
    let n = core.states();
    let m = n + extra_u + extra_o;
    let (p, q) = (core.outputs(), core.inputs());
    let mut a = Mat::zeros(m, m);
    a.view_mut((0, 0), (n, n)).copy_from(core.a());
    for i in n..m {
        a[(i, i)] = -0.5 - i as f64 * 0.1;
    }
    // uncontrollable states feed the core, unobservable states are fed by it
    let coupling = gaussian(r, n, extra_u);
    a.view_mut((0, n), (n, extra_u)).copy_from(&coupling);
    let fed = gaussian(r, extra_o, n);
    a.view_mut((n + extra_u, 0), (extra_o, n)).copy_from(&fed);
    let mut b = Mat::zeros(m, q);
    b.rows_mut(0, n).copy_from(core.b());
    b.rows_mut(n + extra_u, extra_o).copy_from(&gaussian(r, extra_o, q));
    let mut c = Mat::zeros(p, m);
    c.columns_mut(0, n).copy_from(core.c());
    c.columns_mut(n, extra_u).copy_from(&gaussian(r, p, extra_u));
    let t = orthogonal(r, m);
    StateSpace::new(a, b, c, core.d().clone()).unwrap().similarity(&t).unwrap()
}

#[test]
fn minreal_removes_hidden_modes_and_keeps_transfer() {
    let mut r = rng(15);
    for _ in 0..10 {
        let ts = random_stable(&mut r, Shape { feedthrough: true, ..Shape::new(8, 2, 2) });
        let big = padded(&mut r, &ts.sys, 3, 2);
        let red = big.minreal(1e-9);
        assert_eq!(red.states(), 8);
        for w in log_grid(1e-3, 1e3, 50) {
            let g = ts.modal.eval(w);
            let e = sigma_max(&(red.eval_freq(w).unwrap() - &g));
            assert!(e <= 1e-8 * sigma_max(&g).max(1.0), "gap {e} at {w}");
        }
        let again = red.minreal(1e-9);
        assert_eq!(again, red);
    }
}

fn arb_system(max_n: usize) -> impl Strategy<Value = (u64, usize, usize, usize)> {
    (any::<u64>(), 1..=max_n, 1usize..=3, 1usize..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn subtract_and_vertcat_are_linear((seed, n, p, q) in arb_system(20), w in 0.0f64..50.0) {
        let mut r = rng(seed);
        let g = random_stable(&mut r, Shape { feedthrough: true, ..Shape::new(n, p, q) });
        let h = random_stable(&mut r, Shape { feedthrough: true, ..Shape::new(n.max(2) - 1, p, q) });
        let gw = g.sys.eval_freq(w).unwrap();
        let hw = h.sys.eval_freq(w).unwrap();
        let diff = g.sys.subtract(&h.sys).unwrap().eval_freq(w).unwrap();
        prop_assert!(rel_gap(&diff, &(&gw - &hw)) < 1e-10);
        let stack = StateSpace::vertcat(&[g.sys.clone(), h.sys.clone()]).unwrap().eval_freq(w).unwrap();
        prop_assert!(rel_gap(&stack.rows(0, p).into_owned(), &gw) < 1e-10);
        prop_assert!(rel_gap(&stack.rows(p, p).into_owned(), &hw) < 1e-10);
    }

    #[test]
    fn dual_is_an_involution((seed, n, p, q) in arb_system(20)) {
        let mut r = rng(seed);
        let g = random_stable(&mut r, Shape { feedthrough: true, ..Shape::new(n, p, q) }).sys;
        prop_assert_eq!(g.dual().dual(), g);
    }

    #[test]
    fn minreal_is_idempotent((seed, n, p, q) in arb_system(12), extra in 0usize..4) {
        let mut r = rng(seed);
        let g = random_stable(&mut r, Shape::new(n, p, q)).sys;
        let once = padded(&mut r, &g, extra, extra / 2).minreal(1e-9);
        prop_assert_eq!(once.minreal(1e-9), once.clone());
    }
}

#[test]
fn rejects_mismatched_shapes() {
    let g = StateSpace::static_gain(Mat::zeros(2, 2));
    let h = StateSpace::static_gain(Mat::zeros(1, 2));
    assert!(g.subtract(&h).is_err());
    assert!(g.series(&StateSpace::static_gain(Mat::zeros(3, 1))).is_err());
    assert!(StateSpace::vertcat(&[g, StateSpace::static_gain(Mat::zeros(1, 3))]).is_err());
}
