//! Gate-level swap test used as an entanglement witness.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::linalg::{Matrix4, Matrix8};
use crate::photonic::NoiseModel;
use crate::qstate::{DensityMatrix4, LocalUnitary, PureTwoQubitState};
use crate::scalar::{czero, creal, Real};

/// Ideal threshold for the ancilla-1 probability.
pub const IDEAL_THRESHOLD: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessVerdict<T> {
    pub p1: T,
    pub threshold: T,
    pub entangled: bool,
    pub concurrence_lower_bound: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomnessBound<T> {
    pub guessing_probability_upper: T,
    pub min_entropy_lower: T,
}

/// `1/2 |c10 - c01|^2`.
pub fn p1_pure<T: Real>(s: &PureTwoQubitState<T>) -> T {
    (s.c10 - s.c01).norm_sqr() * T::lit(0.5)
}

/// Swap-test circuit on ancilla (high bit) plus the two qubits: `H . CSWAP . H` on the ancilla.
pub fn swap_test_circuit<T: Real>() -> Matrix8<T> {
    let h = T::FRAC_1_SQRT_2();
    let hadamard = Matrix8::from_fn(|i, j| {
        if (i & 3) != (j & 3) {
            czero()
        } else if i >= 4 && j >= 4 {
            creal(-h)
        } else {
            creal(h)
        }
    });
    let cswap = Matrix8::from_fn(|i, j| {
        let target = match j {
            5 => 6,
            6 => 5,
            other => other,
        };
        if i == target {
            creal(T::one())
        } else {
            czero()
        }
    });
    hadamard * cswap * hadamard
}

/// Ancilla-1 probability of the swap test fed with `rho (x) |0><0|`.
pub fn p1_mixed<T: Real>(rho: &DensityMatrix4<T>) -> T {
    let m: &Matrix4<T> = rho.matrix();
    let input = Matrix8::from_fn(|i, j| {
        if i < 4 && j < 4 {
            m.data[i][j]
        } else {
            czero()
        }
    });
    let u = swap_test_circuit::<T>();
    let out = u * input * u.adjoint();
    (4..8).map(|i| out.data[i][i].re).sum()
}

/// `max(0, 2 p1 - 1)`.
pub fn bound_f<T: Real>(p1: T) -> T {
    (T::lit(2.0) * p1 - T::one()).max(T::zero())
}

/// `c = t^4 + r^4 - 2 t^2 r^2 cos(sigma)` after equal-loss renormalization of `(t2, r2)`.
/// The effective threshold is `(1 + c) / 2`.
pub fn threshold_shift<T: Real>(nm: &NoiseModel<T>) -> Result<T> {
    let in_unit = |x: T| x >= T::zero() && x <= T::one();
    if !in_unit(nm.t2) || !in_unit(nm.r2) {
        return Err(SimError::Coupler {
            t2: nm.t2.to_f64_lossy(),
            r2: nm.r2.to_f64_lossy(),
        });
    }
    let (t2, r2) = nm.balanced_powers();
    Ok(t2 * t2 + r2 * r2 - T::lit(2.0) * t2 * r2 * nm.sigma.cos())
}

pub fn noisy_threshold<T: Real>(nm: &NoiseModel<T>) -> Result<T> {
    Ok((T::one() + threshold_shift(nm)?) / T::lit(2.0))
}

/// Concurrence lower bound under coupler imbalance and phase errors.
pub fn bound_f_tilde<T: Real>(p1: T, nm: &NoiseModel<T>) -> Result<T> {
    let c = threshold_shift(nm)?;
    if p1 <= (T::one() + c) / T::lit(2.0) {
        return Ok(T::zero());
    }
    let (t2, r2) = nm.balanced_powers();
    let denom = T::lit(2.0) * t2 * r2 * (T::one() + nm.sigma.cos());
    Ok(((T::lit(2.0) * p1 - T::one() - c) / denom).min(T::one()))
}

fn check_probability<T: Real>(x: T) -> Result<()> {
    if x >= T::zero() && x <= T::one() {
        Ok(())
    } else {
        Err(SimError::Probability(x.to_f64_lossy()))
    }
}

fn lower_bound<T: Real>(p1: T, nm: Option<&NoiseModel<T>>) -> Result<T> {
    match nm {
        None => Ok(bound_f(p1)),
        Some(nm) => bound_f_tilde(p1, nm),
    }
}

/// Strict test `p1 > threshold`; at equality the verdict is not entangled.
pub fn witness<T: Real>(
    p1: T,
    threshold: T,
    nm: Option<&NoiseModel<T>>,
) -> Result<WitnessVerdict<T>> {
    check_probability(p1)?;
    check_probability(threshold)?;
    let entangled = p1 > threshold;
    let concurrence_lower_bound = if entangled {
        lower_bound(p1, nm)?
    } else {
        T::zero()
    };
    Ok(WitnessVerdict {
        p1,
        threshold,
        entangled,
        concurrence_lower_bound,
    })
}

/// P(1) of the four locally rotated copies of `s`, in [`LocalUnitary::ALL`] order.
pub fn preprocessing_runs<T: Real>(
    s: &PureTwoQubitState<T>,
    mut evaluate: impl FnMut(&PureTwoQubitState<T>) -> T,
) -> [T; 4] {
    LocalUnitary::ALL.map(|u| evaluate(&s.apply_local_unitary(u)))
}

/// Runs the witness on the four rotated copies and reports the largest P(1).
pub fn witness_with_preprocessing<T: Real>(
    s: &PureTwoQubitState<T>,
    threshold: T,
    nm: Option<&NoiseModel<T>>,
    evaluate: impl FnMut(&PureTwoQubitState<T>) -> T,
) -> Result<WitnessVerdict<T>> {
    let runs = preprocessing_runs(s, evaluate);
    let best = runs.iter().copied().fold(T::zero(), T::max);
    witness(best.min(T::one()), threshold, nm)
}

/// Upper bound on the local guessing probability and the matching min-entropy.
pub fn randomness_bound<T: Real>(p1: T, nm: Option<&NoiseModel<T>>) -> Result<RandomnessBound<T>> {
    check_probability(p1)?;
    let f = lower_bound(p1, nm)?;
    let g = (T::one() + (T::one() - f * f).max(T::zero()).sqrt()) / T::lit(2.0);
    Ok(RandomnessBound {
        guessing_probability_upper: g,
        min_entropy_lower: -g.log2(),
    })
}
