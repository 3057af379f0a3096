use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use swapwit::oracle::{fixed_swap_coefficients, guessing_probability_bruteforce, verify_min_concurrence};
use swapwit::photonic::NoiseModel;
use swapwit::qstate::*;
use swapwit::witness::*;

fn omega_state(omega: f64) -> PureTwoQubitState<f64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    PureTwoQubitState::from_coefficients([
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(h, omega),
        Complex64::new(h, 0.0),
        Complex64::new(0.0, 0.0),
    ])
    .unwrap()
}

#[test]
fn bell_state_values() {
    for k in BellKind::ALL {
        let want = if k == BellKind::PsiMinus { 1.0 } else { 0.0 };
        assert!((p1_pure(&bell_state::<f64>(k)) - want).abs() < 1e-12);
    }
}

#[test]
fn omega_family_follows_sin_squared() {
    assert!((p1_pure(&omega_state(std::f64::consts::FRAC_PI_2)) - 0.5).abs() < 1e-12);
    for k in 0..=40 {
        let w = -std::f64::consts::PI + k as f64 * std::f64::consts::PI / 20.0;
        assert!((p1_pure(&omega_state(w)) - (w / 2.0).sin().powi(2)).abs() < 1e-12);
    }
}

#[test]
fn werner_mixtures() {
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let psi = WernerLikeState::new(bell_state(BellKind::PsiMinus), p).unwrap();
        assert!((p1_mixed(&psi.density()) - (0.75 * p + 0.25)).abs() < 1e-12);
        let phi = WernerLikeState::new(bell_state(BellKind::PhiPlus), p).unwrap();
        assert!((p1_mixed(&phi.density()) - (1.0 - p) / 4.0).abs() < 1e-12);
    }
}

#[test]
fn p1_mixed_matches_ensemble_average() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..500 {
        let states: Vec<_> = (0..3).map(|_| random_pure_state::<f64, _>(&mut rng)).collect();
        let w: Vec<f64> = (0..3).map(|_| rng.random::<f64>()).collect();
        let total: f64 = w.iter().sum();
        let rho = DensityMatrix4::from_ensemble(&states, &w).unwrap();
        let avg: f64 = states.iter().zip(&w).map(|(s, w)| p1_pure(s) * w / total).sum();
        assert!((p1_mixed(&rho) - avg).abs() < 1e-12);
    }
}

#[test]
fn bound_f_values() {
    assert_eq!(bound_f(0.5f64), 0.0);
    assert_eq!(bound_f(1.0), 1.0);
    assert!((bound_f(0.75f64) - 0.5).abs() < 1e-15);
    assert_eq!(bound_f(0.2), 0.0);
}

#[test]
fn bound_f_is_convex() {
    let grid: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
    for &lam in &grid {
        for &x in &grid {
            for &y in &grid {
                let mid = bound_f(lam * x + (1.0 - lam) * y);
                assert!(mid <= lam * bound_f(x) + (1.0 - lam) * bound_f(y) + 1e-15);
            }
        }
    }
}

#[test]
fn threshold_shift_examples() {
    let c: f64 = threshold_shift(&NoiseModel::hardware750()).unwrap();
    assert!((c - 0.004).abs() <= 5e-4);
    let wide = NoiseModel::<f64>::new(0.44, 0.56, 0.1).unwrap();
    assert!((threshold_shift(&wide).unwrap() - 0.017).abs() <= 5e-4);
    assert!((noisy_threshold(&wide).unwrap() - 0.5085).abs() <= 5e-4);
    assert_eq!(threshold_shift(&NoiseModel::<f64>::ideal()).unwrap(), 0.0);
}

#[test]
fn threshold_shift_rejects_bad_couplers() {
    let bad = NoiseModel {
        t2: 1.2,
        r2: 0.1,
        sigma: 0.0,
    };
    assert!(threshold_shift(&bad).is_err());
}

#[test]
fn bound_f_tilde_ideal_equals_bound_f() {
    let ideal = NoiseModel::<f64>::ideal();
    for k in 0..=1000 {
        let x = k as f64 / 1000.0;
        assert!((bound_f_tilde(x, &ideal).unwrap() - bound_f(x)).abs() < 1e-12);
    }
}

#[test]
fn bound_f_tilde_examples() {
    let nm = NoiseModel::<f64>::new(0.44, 0.56, 0.1).unwrap();
    assert!(bound_f_tilde(0.5085, &nm).unwrap() < 5e-4);
    let c = 0.44f64.powi(2) + 0.56f64.powi(2) - 2.0 * 0.44 * 0.56 * 0.1f64.cos();
    let want = (0.2 - c) / (2.0 * 0.44 * 0.56 * (1.0 + 0.1f64.cos()));
    assert!((bound_f_tilde(0.6, &nm).unwrap() - want).abs() < 1e-12);
}

#[test]
fn strict_threshold() {
    let v = witness(1.0f64, IDEAL_THRESHOLD, None).unwrap();
    assert!(v.entangled && v.concurrence_lower_bound == 1.0);
    let v = witness(0.5, IDEAL_THRESHOLD, None).unwrap();
    assert!(!v.entangled && v.concurrence_lower_bound == 0.0);
    let nm = NoiseModel::<f64>::new(0.44, 0.56, 0.1).unwrap();
    assert!(!witness(0.505, 0.5085, Some(&nm)).unwrap().entangled);
    assert!(witness(1.2, 0.5, None).is_err());
}

#[test]
fn preprocessing_detects_every_bell_state() {
    for k in BellKind::ALL {
        let v = witness_with_preprocessing(&bell_state(k), IDEAL_THRESHOLD, None, p1_pure).unwrap();
        assert!(v.entangled, "{k:?}");
        assert!((v.p1 - 1.0).abs() < 1e-12);
    }
    let v = witness_with_preprocessing(
        &PureTwoQubitState::<f64>::basis(false, false),
        IDEAL_THRESHOLD,
        None,
        p1_pure,
    )
    .unwrap();
    assert!(!v.entangled);
    for p in preprocessing_runs(&PureTwoQubitState::<f64>::basis(false, false), p1_pure) {
        assert!(p <= 0.5);
    }
}

#[test]
fn randomness_examples() {
    let b = randomness_bound(1.0f64, None).unwrap();
    assert!((b.guessing_probability_upper - 0.5).abs() < 1e-15);
    assert!((b.min_entropy_lower - 1.0).abs() < 1e-12);
    let b = randomness_bound(0.4f64, None).unwrap();
    assert_eq!(b.guessing_probability_upper, 1.0);
    assert_eq!(b.min_entropy_lower, 0.0);
    let b = randomness_bound(0.9f64, None).unwrap();
    assert!((b.guessing_probability_upper - 0.8).abs() < 1e-12);
    assert!((b.min_entropy_lower + 0.8f64.log2()).abs() < 1e-12);
}

#[test]
fn randomness_bound_is_tight_at_minimum_concurrence() {
    // The least entangled state with P(1) = 0.9 has C = 0.8; its brute-force guessing
    // probability must meet the bound.
    let report = verify_min_concurrence(0.8).unwrap();
    let c = fixed_swap_coefficients(0.8, &report.argopt);
    let g = guessing_probability_bruteforce(&c);
    let bound = randomness_bound(0.9, None).unwrap().guessing_probability_upper;
    assert!(g <= bound + 1e-6);
    assert!((g - bound).abs() < 1e-4, "g={g}");
}

#[test]
fn randomness_bound_holds_for_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let s = random_pure_state::<f64, _>(&mut rng);
        let g = guessing_probability_bruteforce(&s.coefficients());
        let bound = randomness_bound(p1_pure(&s), None).unwrap();
        assert!(g <= bound.guessing_probability_upper + 1e-6);
    }
}

#[test]
fn bound_is_tight_near_unit_p1() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let psi = bell_state::<f64>(BellKind::PsiMinus);
    let mut min_c = f64::INFINITY;
    let mut hits = 0;
    for _ in 0..10_000 {
        let noise = random_pure_state::<f64, _>(&mut rng);
        let mix = 1e-4 * rng.random::<f64>();
        let s = PureTwoQubitState::normalized(
            [0, 1, 2, 3].map(|i| psi.coefficients()[i] + noise.coefficients()[i] * mix),
        )
        .unwrap();
        if p1_pure(&s) >= 1.0 - 1e-6 {
            min_c = min_c.min(concurrence_pure(&s));
            hits += 1;
        }
    }
    assert!(hits > 1000, "{hits}");
    assert!(min_c > 1.0 - 1e-3, "{min_c}");
}

#[test]
fn f32_witness() {
    let s = bell_state::<f32>(BellKind::PsiMinus);
    let v = witness(p1_pure(&s), 0.5f32, None).unwrap();
    assert!(v.entangled);
    assert!((p1_mixed(&s.density()) - 1.0).abs() < 1e-5);
}

proptest! {
    #[test]
    fn theorem_bounds(v in proptest::array::uniform8(-1.0f64..1.0)) {
        let c = [0, 2, 4, 6].map(|i| Complex64::new(v[i], v[i + 1]));
        if let Ok(s) = PureTwoQubitState::normalized(c) {
            let p1 = p1_pure(&s);
            prop_assert!(concurrence_pure(&s) >= bound_f(p1) - 1e-10);
            if p1 > 0.5 {
                prop_assert_eq!(schmidt_rank(&s), 2);
            }
        }
    }

    #[test]
    fn p1_mixed_is_affine(
        v in proptest::array::uniform8(-1.0f64..1.0),
        w in proptest::array::uniform8(-1.0f64..1.0),
        lam in 0.0f64..1.0,
    ) {
        let a = PureTwoQubitState::normalized([0, 2, 4, 6].map(|i| Complex64::new(v[i], v[i + 1])));
        let b = PureTwoQubitState::normalized([0, 2, 4, 6].map(|i| Complex64::new(w[i], w[i + 1])));
        if let (Ok(a), Ok(b)) = (a, b) {
            let (ra, rb) = (a.density(), b.density());
            let mixed = p1_mixed(&ra.mix(&rb, lam).unwrap());
            prop_assert!((mixed - (lam * p1_mixed(&ra) + (1.0 - lam) * p1_mixed(&rb))).abs() < 1e-12);
        }
    }

    #[test]
    fn min_entropy_matches_guessing(p1 in 0.0f64..1.0) {
        let b = randomness_bound(p1, None).unwrap();
        prop_assert!((b.min_entropy_lower + b.guessing_probability_upper.log2()).abs() < 1e-12);
        prop_assert!(b.guessing_probability_upper >= 0.5 && b.guessing_probability_upper <= 1.0);
    }
}

#[test]
fn circuit_is_unitary() {
    assert!(swap_test_circuit::<f64>().unitarity_defect() < 1e-14);
}

#[test]
fn mixed_agrees_with_pure_on_bell_states() {
    for k in BellKind::ALL {
        let s = bell_state::<f64>(k);
        assert!((p1_mixed(&s.density()) - p1_pure(&s)).abs() < 1e-14);
    }
}
