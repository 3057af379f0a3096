//! Small dense complex matrices and a Hermitian eigen solver.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::scalar::{czero, Real};

/// Dense `N x N` complex matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SquareMatrix<T, const N: usize> {
    pub data: [[Complex<T>; N]; N],
}

pub type Matrix2<T> = SquareMatrix<T, 2>;
pub type Matrix4<T> = SquareMatrix<T, 4>;
pub type Matrix8<T> = SquareMatrix<T, 8>;

impl<T: Real, const N: usize> SquareMatrix<T, N> {
    pub fn zeros() -> Self {
        Self {
            data: [[czero(); N]; N],
        }
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| {
            if i == j {
                Complex::new(T::one(), T::zero())
            } else {
                czero()
            }
        })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn diagonal(d: [Complex<T>; N]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i] } else { czero() })
    }

    /// Outer product `|v><v|`.
    pub fn outer(v: &[Complex<T>; N]) -> Self {
        Self::from_fn(|i, j| v[i] * v[j].conj())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.data[j][i].conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.data[i][j].conj())
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(|i, j| self.data[i][j] * s)
    }

    pub fn trace(&self) -> Complex<T> {
        (0..N).fold(czero(), |acc, i| acc + self.data[i][i])
    }

    pub fn mul_vec(&self, v: &[Complex<T>; N]) -> [Complex<T>; N] {
        let mut out = [czero(); N];
        for (i, row) in self.data.iter().enumerate() {
            out[i] = row
                .iter()
                .zip(v.iter())
                .fold(czero(), |acc, (a, b)| acc + *a * *b);
        }
        out
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for i in 0..N {
            for j in 0..N {
                worst = worst.max((self.data[i][j] - other.data[i][j]).norm());
            }
        }
        worst
    }

    /// `max |(U^dagger U - 1)_ij|`.
    pub fn unitarity_defect(&self) -> T {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    pub fn hermiticity_defect(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }

    /// Places a 2x2 block on rows/columns `(k, k+1)` of the identity.
    pub fn embed_pair(block: &Matrix2<T>, k: usize) -> Self {
        let mut m = Self::identity();
        for a in 0..2 {
            for b in 0..2 {
                m.data[k + a][k + b] = block.data[a][b];
            }
        }
        m
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    ///
    /// Only the Hermitian part of `self` is used.
    pub fn hermitian_eigenvalues(&self) -> [T; N] {
        let (vals, _) = jacobi_symmetric(real_embedding(self), 2 * N);
        let mut out = [T::zero(); N];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = (vals[2 * k] + vals[2 * k + 1]) / T::lit(2.0);
        }
        out
    }

    /// Applies `f` to the spectrum of a Hermitian matrix: `V f(D) V^dagger`.
    pub fn hermitian_map(&self, f: impl Fn(T) -> T) -> Self {
        let n2 = 2 * N;
        let (vals, vecs) = jacobi_symmetric(real_embedding(self), n2);
        let fv: Vec<T> = vals.iter().map(|&x| f(x)).collect();
        let entry = |r: usize, c: usize| -> T {
            (0..n2).fold(T::zero(), |acc, k| {
                acc + vecs[r * n2 + k] * fv[k] * vecs[c * n2 + k]
            })
        };
        Self::from_fn(|i, j| Complex::new(entry(i, j), entry(N + i, j)))
    }
}

impl<T: Real, const N: usize> Mul for SquareMatrix<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.data[i][k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..N {
                    out.data[i][j] = out.data[i][j] + a * rhs.data[k][j];
                }
            }
        }
        out
    }
}

impl<T: Real, const N: usize> Add for SquareMatrix<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.data[i][j] + rhs.data[i][j])
    }
}

impl<T: Real, const N: usize> Sub for SquareMatrix<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.data[i][j] - rhs.data[i][j])
    }
}

/// `H = X + iY` maps to the real symmetric `[[X, -Y], [Y, X]]`, whose spectrum is
/// that of `H` with every eigenvalue doubled.
fn real_embedding<T: Real, const N: usize>(m: &SquareMatrix<T, N>) -> Vec<T> {
    let n2 = 2 * N;
    let half = T::lit(0.5);
    let mut a = vec![T::zero(); n2 * n2];
    for i in 0..N {
        for j in 0..N {
            let h = (m.data[i][j] + m.data[j][i].conj()) * half;
            a[i * n2 + j] = h.re;
            a[(N + i) * n2 + (N + j)] = h.re;
            a[i * n2 + (N + j)] = -h.im;
            a[(N + i) * n2 + j] = h.im;
        }
    }
    a
}

/// Cyclic Jacobi for a real symmetric `n x n` matrix (row-major).
/// Returns ascending eigenvalues and the matching eigenvectors as columns.
fn jacobi_symmetric<T: Real>(mut a: Vec<T>, n: usize) -> (Vec<T>, Vec<T>) {
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let two = T::lit(2.0);
    let scale = a.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
    let target = T::epsilon() * T::epsilon() * scale * scale;

    for _sweep in 0..64 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + a[p * n + q] * a[p * n + q];
            }
        }
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .partial_cmp(&a[j * n + j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let vals = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vecs = vec![T::zero(); n * n];
    for (col, &src) in order.iter().enumerate() {
        for r in 0..n {
            vecs[r * n + col] = v[r * n + src];
        }
    }
    (vals, vecs)
}
