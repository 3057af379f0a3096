//! Two-qubit pure and mixed states and their entanglement quantities.
//!
//! Matrices use the basis order `|00>, |01>, |10>, |11>` (first qubit is the
//! high bit). [`PureTwoQubitState::coefficients`] and
//! [`PureTwoQubitState::basis_vector`] are the only places that translate
//! between the coefficient order `(c00, c10, c01, c11)` and the matrix order.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::linalg::{Matrix2, Matrix4};
use crate::scalar::{czero, creal, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
        }
    }
}

/// Local unitaries of the four-run pre-processing protocol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LocalUnitary {
    /// `1 (x) 1`
    Identity,
    /// `1 (x) Z`
    PhaseFlipSecond,
    /// `1 (x) X`
    BitFlipSecond,
    /// `X (x) Z`
    BitFlipFirstPhaseFlipSecond,
}

impl LocalUnitary {
    pub const ALL: [LocalUnitary; 4] = [
        LocalUnitary::Identity,
        LocalUnitary::PhaseFlipSecond,
        LocalUnitary::BitFlipSecond,
        LocalUnitary::BitFlipFirstPhaseFlipSecond,
    ];
}

/// Pure two-qubit state `c00|00> + c01|01> + c10|10> + c11|11>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureTwoQubitState<T> {
    pub c00: Complex<T>,
    pub c10: Complex<T>,
    pub c01: Complex<T>,
    pub c11: Complex<T>,
}

impl<T: Real> PureTwoQubitState<T> {
    /// Builds from `[c00, c10, c01, c11]`, requiring unit norm.
    pub fn from_coefficients(c: [Complex<T>; 4]) -> Result<Self> {
        let s = Self::from_coefficients_unchecked(c);
        let n = s.norm_sqr();
        if (n - T::one()).abs() > T::check_tol() {
            return Err(SimError::NotNormalized(n.to_f64_lossy()));
        }
        Ok(s)
    }

    pub fn from_coefficients_unchecked(c: [Complex<T>; 4]) -> Self {
        Self {
            c00: c[0],
            c10: c[1],
            c01: c[2],
            c11: c[3],
        }
    }

    /// Rescales `[c00, c10, c01, c11]` to unit norm.
    pub fn normalized(c: [Complex<T>; 4]) -> Result<Self> {
        let s = Self::from_coefficients_unchecked(c);
        let n = s.norm_sqr();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(SimError::ZeroState);
        }
        let k = T::one() / n.sqrt();
        Ok(Self::from_coefficients_unchecked(c.map(|z| z * k)))
    }

    /// `[c00, c10, c01, c11]`.
    pub fn coefficients(&self) -> [Complex<T>; 4] {
        [self.c00, self.c10, self.c01, self.c11]
    }

    /// Amplitudes in matrix order `|00>, |01>, |10>, |11>`.
    pub fn basis_vector(&self) -> [Complex<T>; 4] {
        [self.c00, self.c01, self.c10, self.c11]
    }

    pub fn from_basis_vector(v: [Complex<T>; 4]) -> Self {
        Self {
            c00: v[0],
            c01: v[1],
            c10: v[2],
            c11: v[3],
        }
    }

    pub fn basis(first: bool, second: bool) -> Self {
        let mut v = [czero(); 4];
        v[2 * first as usize + second as usize] = creal(T::one());
        Self::from_basis_vector(v)
    }

    /// `|a> (x) |b>` with `a` on the first qubit.
    pub fn product(a: [Complex<T>; 2], b: [Complex<T>; 2]) -> Self {
        Self::from_basis_vector([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]])
    }

    pub fn norm_sqr(&self) -> T {
        self.coefficients().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> T {
        let a = self.basis_vector();
        let b = other.basis_vector();
        a.iter()
            .zip(b.iter())
            .fold(czero::<T>(), |acc, (x, y)| acc + x.conj() * y)
            .norm_sqr()
    }

    pub fn density(&self) -> DensityMatrix4<T> {
        DensityMatrix4 {
            m: Matrix4::outer(&self.basis_vector()),
        }
    }

    pub fn apply_local_unitary(&self, u: LocalUnitary) -> Self {
        let Self { c00, c10, c01, c11 } = *self;
        match u {
            LocalUnitary::Identity => *self,
            LocalUnitary::PhaseFlipSecond => Self {
                c00,
                c10,
                c01: -c01,
                c11: -c11,
            },
            LocalUnitary::BitFlipSecond => Self {
                c00: c01,
                c01: c00,
                c10: c11,
                c11: c10,
            },
            // (X (x) Z)|ab> = (-1)^b |(1-a) b>
            LocalUnitary::BitFlipFirstPhaseFlipSecond => Self {
                c00: c10,
                c10: c00,
                c01: -c11,
                c11: -c01,
            },
        }
    }
}

pub fn bell_state<T: Real>(kind: BellKind) -> PureTwoQubitState<T> {
    let h = creal(T::FRAC_1_SQRT_2());
    let z = czero();
    let c = match kind {
        BellKind::PhiPlus => [h, z, z, h],
        BellKind::PhiMinus => [h, z, z, -h],
        BellKind::PsiPlus => [z, h, h, z],
        BellKind::PsiMinus => [z, h, -h, z],
    };
    PureTwoQubitState::from_coefficients_unchecked(c)
}

/// `2 |c00 c11 - c10 c01|`.
pub fn concurrence_pure<T: Real>(s: &PureTwoQubitState<T>) -> T {
    (s.c00 * s.c11 - s.c10 * s.c01).norm() * T::lit(2.0)
}

/// Squared Schmidt coefficients in descending order, from the spectrum of `M M^dagger`
/// with `M = [[c00, c01], [c10, c11]]`.
pub fn schmidt_coefficients<T: Real>(s: &PureTwoQubitState<T>) -> [T; 2] {
    let m = Matrix2::from_fn(|i, j| match (i, j) {
        (0, 0) => s.c00,
        (0, 1) => s.c01,
        (1, 0) => s.c10,
        _ => s.c11,
    });
    let ev = (m * m.adjoint()).hermitian_eigenvalues();
    [ev[1], ev[0]]
}

pub fn schmidt_rank<T: Real>(s: &PureTwoQubitState<T>) -> u8 {
    schmidt_coefficients(s)
        .iter()
        .filter(|&&l| l > T::zero_eig_tol())
        .count() as u8
}

fn gaussian_complex<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(T::lit(re), T::lit(im))
}

/// Haar-random pure state from four normalized complex Gaussians.
pub fn random_pure_state<T: Real, R: Rng + ?Sized>(rng: &mut R) -> PureTwoQubitState<T> {
    loop {
        let mut c = [czero::<T>(); 4];
        for z in c.iter_mut() {
            *z = gaussian_complex(rng);
        }
        if let Ok(s) = PureTwoQubitState::normalized(c) {
            return s;
        }
    }
}

/// Product of two independent Haar-random single-qubit states.
pub fn random_product_state<T: Real, R: Rng + ?Sized>(rng: &mut R) -> PureTwoQubitState<T> {
    let mut qubit = || loop {
        let v: [Complex<T>; 2] = [gaussian_complex(rng), gaussian_complex(rng)];
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if n > T::zero() {
            return [v[0] / n, v[1] / n];
        }
    };
    let a = qubit();
    let b = qubit();
    PureTwoQubitState::product(a, b)
}

/// Density matrix on two qubits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix4<T> {
    m: Matrix4<T>,
}

impl<T: Real> DensityMatrix4<T> {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(m: Matrix4<T>) -> Result<Self> {
        let herm = m.hermiticity_defect();
        if !(herm <= T::check_tol()) {
            return Err(SimError::NotHermitian(herm.to_f64_lossy()));
        }
        let tr = m.trace();
        if !((tr.re - T::one()).abs() <= T::check_tol()) || tr.im.abs() > T::check_tol() {
            return Err(SimError::BadTrace(tr.re.to_f64_lossy()));
        }
        let lowest = m.hermitian_eigenvalues()[0];
        if lowest < -T::zero_eig_tol() {
            return Err(SimError::NegativeEigenvalue(lowest.to_f64_lossy()));
        }
        Ok(Self { m })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            m: Matrix4::identity().scale(T::lit(0.25)),
        }
    }

    pub fn matrix(&self) -> &Matrix4<T> {
        &self.m
    }

    /// `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &Self, w: T) -> Result<Self> {
        if !(w >= T::zero() && w <= T::one()) {
            return Err(SimError::MixingWeight(w.to_f64_lossy()));
        }
        Ok(Self {
            m: self.m.scale(w) + other.m.scale(T::one() - w),
        })
    }

    /// Convex combination of pure states; weights are normalized to sum to one.
    pub fn from_ensemble(states: &[PureTwoQubitState<T>], weights: &[T]) -> Result<Self> {
        let total: T = weights.iter().copied().sum();
        if !(total > T::zero()) || weights.iter().any(|w| *w < T::zero()) {
            return Err(SimError::MixingWeight(total.to_f64_lossy()));
        }
        let m = states
            .iter()
            .zip(weights)
            .fold(Matrix4::zeros(), |acc, (s, w)| {
                acc + Matrix4::outer(&s.basis_vector()).scale(*w / total)
            });
        Ok(Self { m })
    }
}

/// `p |phi><phi| + (1 - p) 1/4`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WernerLikeState<T> {
    pub phi: PureTwoQubitState<T>,
    pub p: T,
}

impl<T: Real> WernerLikeState<T> {
    pub fn new(phi: PureTwoQubitState<T>, p: T) -> Result<Self> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(SimError::MixingWeight(p.to_f64_lossy()));
        }
        Ok(Self { phi, p })
    }

    pub fn density(&self) -> DensityMatrix4<T> {
        DensityMatrix4 {
            m: self.phi.density().m.scale(self.p)
                + DensityMatrix4::maximally_mixed().m.scale(T::one() - self.p),
        }
    }
}

/// `(Y (x) Y) rho* (Y (x) Y)`.
fn spin_flip<T: Real>(m: &Matrix4<T>) -> Matrix4<T> {
    let one = creal(T::one());
    let yy = Matrix4::from_fn(|i, j| match (i, j) {
        (0, 3) | (3, 0) => -one,
        (1, 2) | (2, 1) => one,
        _ => czero(),
    });
    yy * m.conj() * yy
}

/// Spin-flip concurrence `max(0, l1 - l2 - l3 - l4)`.
pub fn concurrence_mixed<T: Real>(rho: &DensityMatrix4<T>) -> T {
    let root = rho.m.hermitian_map(|x| x.max(T::zero()).sqrt());
    let r = root * spin_flip(&rho.m) * root;
    let ev = r.hermitian_eigenvalues();
    let l: Vec<T> = ev.iter().rev().map(|x| x.max(T::zero()).sqrt()).collect();
    (l[0] - l[1] - l[2] - l[3]).max(T::zero())
}

/// Transposes the second-qubit indices.
pub fn partial_transpose<T: Real>(m: &Matrix4<T>) -> Matrix4<T> {
    Matrix4::from_fn(|i, j| {
        let (a, b) = (i >> 1, i & 1);
        let (c, d) = (j >> 1, j & 1);
        m.data[(a << 1) | d][(c << 1) | b]
    })
}

pub fn ppt_is_separable<T: Real>(rho: &DensityMatrix4<T>) -> bool {
    partial_transpose(&rho.m).hermitian_eigenvalues()[0] >= -T::zero_eig_tol()
}
