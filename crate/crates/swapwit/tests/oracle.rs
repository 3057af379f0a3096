use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use swapwit::oracle::*;
use swapwit::photonic::NoiseModel;
use swapwit::qstate::{bell_state, ppt_is_separable, BellKind, WernerLikeState};
use swapwit::witness::p1_mixed;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn separable_extremes() {
    let max = verify_separable_max();
    assert!(max.passed, "{max:?}");
    assert!((max.found_value - 0.5).abs() < 1e-6);
    let at = product_coefficients(&max.argopt);
    assert!((0.5 * (at[1] - at[2]).norm_sqr() - 0.5).abs() < 1e-6);
    // The maximizer set is not a single point; the textbook one is (1, 1, -1, -1)/2 in
    // [c00, c10, c01, c11] order, a product state.
    let textbook = [c(0.5), c(0.5), c(-0.5), c(-0.5)];
    assert!((0.5 * (textbook[1] - textbook[2]).norm_sqr() - 0.5).abs() < 1e-15);
    assert!((textbook[0] * textbook[3] - textbook[1] * textbook[2]).norm() < 1e-15);
    let min = verify_separable_min();
    assert!(min.passed && min.found_value.abs() < 1e-6);
}

#[test]
fn min_concurrence_examples() {
    for (eps, tol) in [(1.0, 1e-6), (0.5, 1e-6), (1e-3, 1e-6)] {
        let r = verify_min_concurrence(eps).unwrap();
        assert!((r.found_value - eps).abs() < tol, "{eps}: {r:?}");
        let coeffs = fixed_swap_coefficients(eps, &r.argopt);
        let norm: f64 = coeffs.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(((coeffs[1] - coeffs[2]).norm_sqr() - (1.0 + eps)).abs() < 1e-12);
    }
    assert!(verify_min_concurrence(1.5).is_err());
    assert!(verify_min_concurrence(0.0).is_err());
}

#[test]
fn min_concurrence_is_monotone() {
    let values: Vec<f64> = (1..=20)
        .map(|k| verify_min_concurrence(k as f64 / 20.0).unwrap().found_value)
        .collect();
    assert!(values.windows(2).all(|w| w[0] < w[1]), "{values:?}");
}

#[test]
fn werner_reports() {
    let reports = verify_werner_max();
    assert_eq!(reports.len(), 3);
    for r in &reports {
        assert!(r.passed, "{r:?}");
    }
    // |c10| = |c01| = 1/sqrt(2) at its PPT edge p = 1/3 also reaches the maximum.
    let edge = WernerLikeState::new(bell_state(BellKind::PsiMinus), 1.0 / 3.0).unwrap();
    assert!(ppt_is_separable(&edge.density()));
    assert!((p1_mixed(&edge.density()) - reports[0].claimed_value).abs() < 1e-12);
}

#[test]
fn noisy_separable_examples() {
    let ideal = verify_noisy_separable_max(&NoiseModel::ideal());
    assert!((ideal.found_value - 0.5).abs() < 1e-9, "{ideal:?}");
    let hw = verify_noisy_separable_max(&NoiseModel::hardware750());
    assert!(hw.passed);
    assert!((hw.found_value - 1.004 / 2.0).abs() < 1e-4);
    let wide = verify_noisy_separable_max(&NoiseModel::new(0.44, 0.56, 0.1).unwrap());
    assert!(wide.passed);
    assert!((wide.found_value - 0.5085).abs() < 5e-4);
}

#[test]
fn noisy_closed_form_ideal_limit() {
    let psi = bell_state::<f64>(BellKind::PsiMinus).coefficients();
    let p = noisy_p1_closed_form(&psi, FRAC_1_SQRT_2, FRAC_1_SQRT_2, &[0.0; 8]);
    assert!((p - 1.0).abs() < 1e-12);
}

#[test]
fn guessing_examples() {
    let psi = bell_state::<f64>(BellKind::PsiMinus).coefficients();
    assert!((guessing_probability_bruteforce(&psi) - 0.5).abs() < 1e-9);
    let zero = [c(1.0), c(0.0), c(0.0), c(0.0)];
    assert!((guessing_probability_bruteforce(&zero) - 1.0).abs() < 1e-9);
    assert!((schmidt_cos2(&psi) - 0.5).abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r = verify_guessing_probability(200, &mut rng);
    assert!(r.passed && r.found_value < 1e-4, "{r:?}");
}

#[test]
fn refinement_never_loses_to_grid() {
    let axes = [Axis::closed(-2.0, 2.0, 9), Axis::closed(-2.0, 2.0, 9)];
    let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
    let o = minimize(&axes, rosen);
    assert!(o.value <= o.grid_value);
    assert!(o.value < 1e-9 && (o.x[0] - 1.0).abs() < 1e-3);
    let o = maximize(&axes, |x| -rosen(x));
    assert!(o.value >= o.grid_value);
}

#[test]
fn grid_search_is_thread_count_independent() {
    let axes = [Axis::angle(40), Axis::angle(40)];
    let f = |x: &[f64]| (x[0].sin() * x[1].cos()).round();
    let run = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| grid_minimize(&axes, f))
    };
    let one = run(1);
    for n in [2, 5, 8] {
        assert_eq!(run(n), one);
    }
}

#[test]
fn nelder_mead_finds_quadratic_minimum() {
    let f = |x: &[f64]| (x[0] - 0.3).powi(2) + 2.0 * (x[1] + 1.2).powi(2) + 5.0;
    let (x, v) = nelder_mead(&f, &[0.0, 0.0], &[0.5, 0.5], 1e-14, 10_000);
    assert!((v - 5.0).abs() < 1e-12);
    assert!((x[0] - 0.3).abs() < 1e-5 && (x[1] + 1.2).abs() < 1e-5);
}

