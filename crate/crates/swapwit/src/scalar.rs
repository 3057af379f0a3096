use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst};

/// Real scalar the simulator is generic over. Implemented for `f32` and `f64`.
pub trait Real:
    Float + FloatConst + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` constant into `Self`.
    fn lit(x: f64) -> Self;

    fn to_f64_lossy(self) -> f64;

    /// Machine-precision-aware tolerance used for structural checks
    /// (normalization, hermiticity).
    fn check_tol() -> Self;

    /// Below this an eigenvalue counts as zero in rank and positivity decisions.
    fn zero_eig_tol() -> Self;
}

impl Real for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self
    }
    fn check_tol() -> Self {
        1e-12
    }
    fn zero_eig_tol() -> Self {
        1e-10
    }
}

impl Real for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
    fn check_tol() -> Self {
        1e-5
    }
    fn zero_eig_tol() -> Self {
        1e-5
    }
}

pub(crate) fn cis<T: Real>(angle: T) -> Complex<T> {
    Complex::new(angle.cos(), angle.sin())
}

pub(crate) fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

pub(crate) fn creal<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Argument of a complex number, with `arg(0) = 0`.
pub(crate) fn arg_or_zero<T: Real>(z: Complex<T>) -> T {
    if z.norm_sqr() == T::zero() {
        T::zero()
    } else {
        z.arg()
    }
}
