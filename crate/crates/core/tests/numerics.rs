use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use minmax_core::numerics::{
    binary_entropy, damped_fixed_point, gauss_hermite, log_sum_exp, scalar_extremize, sigmoid, softplus, FixedPointConfig, Mode,
};
use minmax_core::Error;

proptest! {
    #[test]
    fn lse_shift_invariance(v in prop::collection::vec(-50.0f64..50.0, 1..20), c in -1e6f64..1e6) {
        let shifted: Vec<f64> = v.iter().map(|x| x + c).collect();
        let lhs = log_sum_exp(&shifted).unwrap();
        let rhs = log_sum_exp(&v).unwrap() + c;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + c.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn lse_bounds(v in prop::collection::vec(-1e6f64..1e6, 1..20)) {
        let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let l = log_sum_exp(&v).unwrap();
        prop_assert!(l >= m && l <= m + (v.len() as f64).ln() + 1e-9);
    }

    #[test]
    fn entropy_is_concave(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let mid = binary_entropy((a + b) / 2.0).unwrap();
        let chord = (binary_entropy(a).unwrap() + binary_entropy(b).unwrap()) / 2.0;
        prop_assert!(mid >= chord - 1e-15);
    }

    #[test]
    fn sigmoid_symmetry_and_softplus_slope(u in -700.0f64..700.0) {
        prop_assert!((sigmoid(u) + sigmoid(-u) - 1.0).abs() <= 1e-15);
        let h = 1e-5;
        let slope = (softplus(u + h) - softplus(u - h)) / (2.0 * h);
        prop_assert!((slope - sigmoid(u)).abs() <= 1e-6 * (1.0 + u.abs()));
    }
}

#[test]
fn special_values() {
    assert_abs_diff_eq!(log_sum_exp(&[0.0, 0.0]).unwrap(), 2f64.ln(), epsilon = 1e-15);
    assert_eq!(log_sum_exp(&[-3.5]).unwrap(), -3.5);
    assert_abs_diff_eq!(log_sum_exp(&[1000.0, 1000.0]).unwrap(), 1000.0 + 2f64.ln(), epsilon = 1e-12);
    assert!(matches!(log_sum_exp::<f64>(&[]), Err(Error::Domain(_))));

    assert_abs_diff_eq!(binary_entropy(0.5).unwrap(), 2f64.ln(), epsilon = 1e-15);
    assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
    assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
    // -0.25 ln 0.25 - 0.75 ln 0.75
    assert_abs_diff_eq!(binary_entropy(0.25).unwrap(), 0.562_335_144_618_808_9, epsilon = 1e-12);
    assert!(binary_entropy(1.5).is_err());

    assert_eq!(sigmoid(0.0), 0.5);
    assert_abs_diff_eq!(softplus(0.0), 2f64.ln(), epsilon = 1e-15);
    assert_abs_diff_eq!(softplus(50.0), 50.0, epsilon = 1e-12);
    for u in [1.0, 10.0, 100.0] {
        assert_abs_diff_eq!(sigmoid(u) + sigmoid(-u), 1.0, epsilon = 1e-15);
    }
}

#[test]
fn gaussian_moments() {
    let one = gauss_hermite::<f64>(1).unwrap();
    assert_eq!((one.nodes.as_slice(), one.weights.as_slice()), ([0.0].as_slice(), [1.0].as_slice()));
    assert!(gauss_hermite::<f64>(0).is_err());
    for order in [3, 5, 20, 101] {
        let rule = gauss_hermite::<f64>(order).unwrap();
        assert_abs_diff_eq!(rule.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rule.expect(|z| z), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rule.expect(|z| z * z), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rule.expect(|z| z.powi(3)), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rule.expect(|z| z.powi(4)), 3.0, epsilon = 1e-10);
        for (a, b) in rule.nodes.iter().zip(rule.nodes.iter().rev()) {
            assert_abs_diff_eq!(*a, -*b, epsilon = 1e-12);
        }
    }
    // degree 2n - 1 exactness: E[z^8] = 105 with 5 nodes
    assert_abs_diff_eq!(gauss_hermite::<f64>(5).unwrap().expect(|z| z.powi(8)), 105.0, epsilon = 1e-9);
}

#[test]
fn extremization_against_grid_oracle() {
    let e = scalar_extremize(|x: f64| -(x - 1.0).powi(2), Mode::Max, (-5.0, 5.0), 1e-10).unwrap();
    assert_abs_diff_eq!(e.arg, 1.0, epsilon = 1e-7);
    assert_abs_diff_eq!(e.value, 0.0, epsilon = 1e-12);
    let e = scalar_extremize(|x: f64| (x + 2.0).powi(2) + 3.0, Mode::Min, (-5.0, 5.0), 1e-10).unwrap();
    assert_abs_diff_eq!(e.arg, -2.0, epsilon = 1e-7);
    assert_abs_diff_eq!(e.value, 3.0, epsilon = 1e-12);

    let f = |x: f64| -x * x / 2.0 + x.sin();
    let e = scalar_extremize(f, Mode::Max, (-4.0, 4.0), 1e-12).unwrap();
    let (mut best, mut arg) = (f64::NEG_INFINITY, 0.0);
    for i in 0..=800_000 {
        let x = -4.0 + 8.0 * i as f64 / 800_000.0;
        if f(x) > best {
            best = f(x);
            arg = x;
        }
    }
    assert_abs_diff_eq!(e.arg, arg, epsilon = 2e-5);
    assert_abs_diff_eq!(e.arg, e.arg.cos(), epsilon = 1e-8);
    assert!(e.value >= best - 1e-12);

    // two separated maxima: the global one is found
    let g = |x: f64| (-(x + 2.0).powi(2)).exp() + 1.2 * (-(x - 2.5).powi(2)).exp();
    assert_abs_diff_eq!(scalar_extremize(g, Mode::Max, (-5.0, 5.0), 1e-10).unwrap().arg, 2.5, epsilon = 1e-3);
}

#[test]
fn fixed_point_engine() {
    let cfg = FixedPointConfig::default();
    let r = damped_fixed_point(|x: &[f64]| Some(vec![x[0] / 2.0]), &[1.0], &cfg).unwrap();
    assert!(r.converged);
    assert!(r.residual <= 1e-10 && r.solution[0].abs() <= 2e-10);

    let r = damped_fixed_point(|x: &[f64]| Some(x.to_vec()), &[0.3, -2.0], &cfg).unwrap();
    assert_eq!(r.solution, vec![0.3, -2.0]);
    assert_eq!((r.residual, r.iterations), (0.0, 1));

    let r = damped_fixed_point(|x: &[f64]| Some(vec![3.0 * x[0]]), &[1.0], &FixedPointConfig { max_iter: 5000, ..cfg }).unwrap();
    assert!(!r.converged);
    assert!(r.final_damping <= 1.0 / 256.0 + 1e-15);

    let a = damped_fixed_point(|x: &[f64]| Some(vec![x[0].cos()]), &[0.0], &cfg).unwrap();
    let b = damped_fixed_point(|x: &[f64]| Some(vec![x[0].cos()]), &[0.0], &cfg).unwrap();
    assert_eq!(a, b);
    assert_abs_diff_eq!(a.solution[0], 0.739_085_133_215_160_6, epsilon = 1e-9);
}
