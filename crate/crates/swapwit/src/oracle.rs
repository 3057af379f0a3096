//! Brute-force checks of the analytic extremal values behind the witness.
//!
//! Every objective here is written out from amplitudes directly and does not call
//! into [`crate::witness`]. Constraints are satisfied by parameterization; search is
//! a dense grid followed by Nelder–Mead refinement from the best grid point.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::linalg::Matrix2;
use crate::photonic::NoiseModel;
use crate::qstate::random_pure_state;

/// Grid points per dimension used by every search.
pub const GRID_POINTS: usize = 32;
/// Simplex refinement stops once the spread of values falls below this.
pub const REFINE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizationReport {
    pub name: String,
    pub claimed_value: f64,
    pub found_value: f64,
    pub argopt: Vec<f64>,
    pub grid_resolution: f64,
    pub refinement_tolerance: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl OptimizationReport {
    fn new(
        name: &str,
        claimed_value: f64,
        found: Optimum,
        grid_resolution: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            name: name.to_string(),
            claimed_value,
            found_value: found.value,
            passed: (found.value - claimed_value).abs() <= tolerance,
            argopt: found.x,
            grid_resolution,
            refinement_tolerance: REFINE_TOL,
            tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Optimum {
    pub x: Vec<f64>,
    pub value: f64,
    /// Best value on the grid before refinement.
    pub grid_value: f64,
}

/// Search box for one parameter: `points` samples spanning `[lo, hi]`.
/// Periodic dimensions exclude the upper end.
#[derive(Clone, Copy, Debug)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub periodic: bool,
}

impl Axis {
    pub fn closed(lo: f64, hi: f64, points: usize) -> Self {
        Self {
            lo,
            hi,
            points,
            periodic: false,
        }
    }

    pub fn angle(points: usize) -> Self {
        Self {
            lo: 0.0,
            hi: TAU,
            points,
            periodic: true,
        }
    }

    fn spacing(&self) -> f64 {
        let n = if self.periodic {
            self.points
        } else {
            self.points.saturating_sub(1).max(1)
        };
        (self.hi - self.lo) / n as f64
    }

    fn value(&self, k: usize) -> f64 {
        self.lo + self.spacing() * k as f64
    }
}

/// Exhaustive minimization over the tensor grid. Ties resolve to the lowest flat index,
/// so the result does not depend on the thread count.
pub fn grid_minimize<F>(axes: &[Axis], f: F) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let total: usize = axes.iter().map(|a| a.points).product();
    let point = |mut idx: usize| -> Vec<f64> {
        let mut x = vec![0.0; axes.len()];
        for (d, ax) in axes.iter().enumerate().rev() {
            x[d] = ax.value(idx % ax.points);
            idx /= ax.points;
        }
        x
    };
    let (best_idx, best_val) = (0..total)
        .into_par_iter()
        .map(|i| (i, f(&point(i))))
        .reduce(
            || (usize::MAX, f64::INFINITY),
            |a, b| {
                if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) {
                    b
                } else {
                    a
                }
            },
        );
    (point(best_idx), best_val)
}

/// Downhill simplex. Returns the best vertex and its value.
pub fn nelder_mead<F>(f: &F, x0: &[f64], step: &[f64], tol: f64, max_iter: usize) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step[i];
        simplex.push(v);
    }
    let mut vals: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let spread = vals[n] - vals[0];
        let size = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= tol && size <= tol.sqrt() {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|d| simplex[..n].iter().map(|v| v[d]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = along(1.0);
        let fr = f(&reflected);
        if fr < vals[0] {
            let expanded = along(2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                vals[n] = fe;
            } else {
                simplex[n] = reflected;
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            simplex[n] = reflected;
            vals[n] = fr;
            continue;
        }
        let contracted = if fr < vals[n] { along(0.5) } else { along(-0.5) };
        let fc = f(&contracted);
        if fc < vals[n].min(fr) {
            simplex[n] = contracted;
            vals[n] = fc;
            continue;
        }
        for i in 1..=n {
            let shrunk: Vec<f64> = simplex[i]
                .iter()
                .zip(&simplex[0])
                .map(|(v, b)| b + 0.5 * (v - b))
                .collect();
            vals[i] = f(&shrunk);
            simplex[i] = shrunk;
        }
    }
    let best = (0..=n)
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .unwrap_or(0);
    (simplex[best].clone(), vals[best])
}

/// Grid search followed by repeated simplex refinement. Never returns a value worse
/// than the grid optimum.
pub fn minimize<F>(axes: &[Axis], f: F) -> Optimum
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let (mut x, grid_value) = grid_minimize(axes, &f);
    let mut value = grid_value;
    let mut step: Vec<f64> = axes.iter().map(|a| a.spacing()).collect();
    for _restart in 0..8 {
        let (nx, nv) = nelder_mead(&f, &x, &step, REFINE_TOL, 20_000);
        let improved = nv < value - REFINE_TOL;
        if nv < value {
            x = nx;
            value = nv;
        }
        if !improved {
            break;
        }
        step.iter_mut().for_each(|s| *s *= 0.25);
    }
    Optimum {
        x,
        value,
        grid_value,
    }
}

pub fn maximize<F>(axes: &[Axis], f: F) -> Optimum
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let o = minimize(axes, |x| -f(x));
    Optimum {
        x: o.x,
        value: -o.value,
        grid_value: -o.grid_value,
    }
}

fn coarsest(axes: &[Axis]) -> f64 {
    axes.iter().map(|a| a.spacing()).fold(0.0, f64::max)
}

fn cis(x: f64) -> Complex64 {
    Complex64::new(x.cos(), x.sin())
}

/// Product state `(cos a, e^{ib} sin a) (x) (cos c, e^{id} sin c)` as `[c00, c10, c01, c11]`.
pub fn product_coefficients(x: &[f64]) -> [Complex64; 4] {
    let first = [Complex64::new(x[0].cos(), 0.0), cis(x[1]) * x[0].sin()];
    let second = [Complex64::new(x[2].cos(), 0.0), cis(x[3]) * x[2].sin()];
    [
        first[0] * second[0],
        first[1] * second[0],
        first[0] * second[1],
        first[1] * second[1],
    ]
}

fn product_axes() -> Vec<Axis> {
    vec![
        Axis::closed(0.0, FRAC_PI_2, GRID_POINTS),
        Axis::angle(GRID_POINTS),
        Axis::closed(0.0, FRAC_PI_2, GRID_POINTS),
        Axis::angle(GRID_POINTS),
    ]
}

fn swap_test_one(c: &[Complex64; 4]) -> f64 {
    0.5 * (c[1] - c[2]).norm_sqr()
}

/// Largest swap-test P(1) over product states. Claimed value 1/2.
pub fn verify_separable_max() -> OptimizationReport {
    let axes = product_axes();
    let found = maximize(&axes, |x| swap_test_one(&product_coefficients(x)));
    OptimizationReport::new("separable_max", 0.5, found, coarsest(&axes), 1e-6)
}

/// Smallest swap-test P(1) over product states. Claimed value 0.
pub fn verify_separable_min() -> OptimizationReport {
    let axes = product_axes();
    let found = minimize(&axes, |x| swap_test_one(&product_coefficients(x)));
    OptimizationReport::new("separable_min", 0.0, found, coarsest(&axes), 1e-6)
}

/// Coefficients `[c00, c10, c01, c11]` with `|c10 - c01|^2 = 1 + eps`, parameterized by
/// two mass angles and two phases.
///
/// With `d = c10 - c01` real and `s = c10 + c01`, normalization becomes
/// `|c00|^2 + |c11|^2 + |s|^2/2 = (1 - eps)/2`.
pub fn fixed_swap_coefficients(eps: f64, x: &[f64]) -> [Complex64; 4] {
    let radius = ((1.0 - eps) / 2.0).max(0.0).sqrt();
    let (a, b) = (x[0], x[1]);
    let m00 = radius * a.cos();
    let m11 = radius * a.sin() * b.cos();
    let ms = std::f64::consts::SQRT_2 * radius * a.sin() * b.sin();
    let c00 = Complex64::new(m00, 0.0);
    let c11 = cis(x[2]) * m11;
    let s = cis(x[3]) * ms;
    let d = Complex64::new((1.0 + eps).sqrt(), 0.0);
    [c00, (s + d) / 2.0, (s - d) / 2.0, c11]
}

/// Minimum concurrence among states with swap-test P(1) = (1 + eps)/2. Claimed value eps.
pub fn verify_min_concurrence(eps: f64) -> Result<OptimizationReport> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(SimError::Epsilon(eps));
    }
    let axes = vec![
        Axis::closed(0.0, FRAC_PI_2, GRID_POINTS),
        Axis::closed(0.0, FRAC_PI_2, GRID_POINTS),
        Axis::angle(GRID_POINTS),
        Axis::angle(GRID_POINTS),
    ];
    let found = minimize(&axes, |x| {
        let c = fixed_swap_coefficients(eps, x);
        2.0 * (c[0] * c[3] - c[1] * c[2]).norm()
    });
    Ok(OptimizationReport::new(
        "min_concurrence",
        eps,
        found,
        coarsest(&axes),
        1e-6,
    ))
}

/// Moduli on the positive unit 3-sphere from three angles, then two relative phases.
/// Returns `(|c10|, |c01|, |c00|, |c11|, phase(c10) - phase(c01), phase of c00 c11
/// relative to c10 c01)`.
fn werner_point(x: &[f64]) -> (f64, f64, f64, f64, f64, f64) {
    let (u1, u2, u3) = (x[0], x[1], x[2]);
    let m10 = u1.cos();
    let m01 = u1.sin() * u2.cos();
    let m00 = u1.sin() * u2.sin() * u3.cos();
    let m11 = u1.sin() * u2.sin() * u3.sin();
    (m10, m01, m00, m11, x[3], x[4])
}

/// `(|c10 - c01|^2, largest separable mixing weight)`.
fn werner_terms(x: &[f64]) -> (f64, f64) {
    let (m10, m01, m00, m11, rel, outer) = werner_point(x);
    let diff = (cis(rel) * m10 - m01).norm_sqr();
    let det = (cis(outer) * (m00 * m11) - m10 * m01).norm();
    (diff, (1.0 / (1.0 + 4.0 * det)).min(1.0))
}

fn werner_axes() -> Vec<Axis> {
    vec![
        Axis::closed(0.0, FRAC_PI_2, GRID_POINTS),
        Axis::closed(0.0, FRAC_PI_2, GRID_POINTS),
        Axis::closed(0.0, FRAC_PI_2, GRID_POINTS),
        Axis::angle(GRID_POINTS),
        Axis::angle(GRID_POINTS),
    ]
}

/// P(1) of `p |phi><phi| + (1-p)/4` is affine in `p`, so over `[0, p_max]` its extremes
/// sit at an end point.
fn werner_p1(diff: f64, p: f64) -> f64 {
    0.25 + 0.5 * p * (diff - 0.5)
}

/// Extremes of swap-test P(1) over separable Werner-like states and the real reduced
/// maximum. Claimed values: max 1/2, min 0, reduced max 1.
pub fn verify_werner_max() -> Vec<OptimizationReport> {
    let axes = werner_axes();
    let res = coarsest(&axes);
    let best = maximize(&axes, |x| {
        let (diff, p_max) = werner_terms(x);
        werner_p1(diff, 0.0).max(werner_p1(diff, p_max))
    });
    let worst = minimize(&axes, |x| {
        let (diff, p_max) = werner_terms(x);
        werner_p1(diff, 0.0).min(werner_p1(diff, p_max))
    });

    let sphere = vec![
        Axis::closed(0.0, FRAC_PI_2, 64),
        Axis::closed(0.0, FRAC_PI_2, 64),
        Axis::closed(0.0, FRAC_PI_2, 64),
    ];
    let reduced = maximize(&sphere, |v| {
        let (x, y, z, w, _, _) = werner_point(&[v[0], v[1], v[2], 0.0, 0.0]);
        x * x + y * y + 2.0 * x * y - 2.0 * (z * w - x * y).abs()
    });

    vec![
        OptimizationReport::new("werner_separable_max", 0.5, best, res, 1e-6),
        OptimizationReport::new("werner_separable_min", 0.0, worst, res, 1e-6),
        OptimizationReport::new("werner_reduced_max", 1.0, reduced, coarsest(&sphere), 1e-6),
    ]
}

/// Even-output power of the swap stage with coupler amplitudes `(t, r)` and trim phase
/// errors `trims` (one per waveguide), no preparation noise. `c = [c00, c10, c01, c11]`.
pub fn noisy_p1_closed_form(c: &[Complex64; 4], t: f64, r: f64, trims: &[f64; 8]) -> f64 {
    let (tt, rr) = (t * t, r * r);
    let e: Vec<Complex64> = trims.iter().map(|&x| cis(x)).collect();
    let [c00, c10, c01, c11] = *c;
    c00.norm_sqr() * (e[0] * tt - e[1] * rr).norm_sqr()
        + (c01 * e[2] * tt - c10 * e[3] * rr).norm_sqr()
        + (c10 * e[4] * tt - c01 * e[5] * rr).norm_sqr()
        + c11.norm_sqr() * (e[6] * tt - e[7] * rr).norm_sqr()
}

/// The four interference terms of [`noisy_p1_closed_form`] with relative errors
/// `e[k]` on the second path of term `k`.
fn noisy_terms(c: &[Complex64; 4], t: f64, r: f64, e: &[f64]) -> [f64; 4] {
    let (tt, rr) = (t * t, r * r);
    let [c00, c10, c01, c11] = *c;
    [
        c00.norm_sqr() * (Complex64::new(tt, 0.0) - cis(e[0]) * rr).norm_sqr(),
        (c01 * tt - c10 * cis(e[1]) * rr).norm_sqr(),
        (c10 * tt - c01 * cis(e[2]) * rr).norm_sqr(),
        c11.norm_sqr() * (Complex64::new(tt, 0.0) - cis(e[3]) * rr).norm_sqr(),
    ]
}

const ERROR_STEPS: usize = 33;

fn error_grid(sigma: f64) -> impl Iterator<Item = f64> {
    (0..ERROR_STEPS).map(move |j| -sigma + 2.0 * sigma * j as f64 / (ERROR_STEPS - 1) as f64)
}

/// Largest noisy P(1) over product states with every relative phase error in
/// `[-sigma, sigma]`. Claimed value `(1 + c)/2` with `c = t^4 + r^4 - 2 t^2 r^2 cos sigma`.
pub fn verify_noisy_separable_max(nm: &NoiseModel<f64>) -> OptimizationReport {
    let s = nm.t2 + nm.r2;
    let (t2, r2) = (nm.t2 / s, nm.r2 / s);
    let (t, r) = (t2.sqrt(), r2.sqrt());
    let sigma = nm.sigma;
    let claimed = (1.0 + t2 * t2 + r2 * r2 - 2.0 * t2 * r2 * sigma.cos()) / 2.0;

    // Each relative error enters exactly one term, so on the grid they are maximized
    // independently.
    let best_errors = |c: &[Complex64; 4]| -> ([f64; 4], f64) {
        let mut errs = [0.0; 4];
        let mut total = 0.0;
        for (k, slot) in errs.iter_mut().enumerate() {
            let mut best = (f64::NEG_INFINITY, 0.0);
            for e in error_grid(sigma) {
                let mut probe = [0.0; 4];
                probe[k] = e;
                let v = noisy_terms(c, t, r, &probe)[k];
                if v > best.0 {
                    best = (v, e);
                }
            }
            *slot = best.1;
            total += best.0;
        }
        (errs, total)
    };
    let axes = product_axes();
    let grid = maximize(&axes, |x| best_errors(&product_coefficients(x)).1);

    let full = |x: &[f64]| -> f64 {
        let e: Vec<f64> = x[4..].iter().map(|v| v.clamp(-sigma, sigma)).collect();
        noisy_terms(&product_coefficients(&x[..4]), t, r, &e)
            .iter()
            .sum()
    };
    let mut start = grid.x.clone();
    start.extend(best_errors(&product_coefficients(&grid.x)).0);
    let start_val = full(&start);
    let mut step: Vec<f64> = axes.iter().map(|a| a.spacing()).collect();
    step.extend([sigma.max(1e-3) / 4.0; 4]);
    let (nx, nv) = nelder_mead(&|x: &[f64]| -full(x), &start, &step, REFINE_TOL, 40_000);
    let (mut x, value) = if -nv > start_val {
        (nx, -nv)
    } else {
        (start, start_val)
    };
    for e in x[4..].iter_mut() {
        *e = e.clamp(-sigma, sigma);
    }
    let found = Optimum {
        x,
        value,
        grid_value: grid.value,
    };
    OptimizationReport::new("noisy_separable_max", claimed, found, coarsest(&axes), 1e-5)
}

/// Outcome probability of `+1` for `n . sigma` on one qubit, state `[c00, c10, c01, c11]`.
fn local_plus_probability(c: &[Complex64; 4], on_first: bool, theta: f64, phi: f64) -> f64 {
    let (nx, ny, nz) = (
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    );
    // Projector (1 + n.sigma)/2 on the measured qubit.
    let proj = [
        [
            Complex64::new((1.0 + nz) / 2.0, 0.0),
            Complex64::new(nx / 2.0, -ny / 2.0),
        ],
        [
            Complex64::new(nx / 2.0, ny / 2.0),
            Complex64::new((1.0 - nz) / 2.0, 0.0),
        ],
    ];
    // amp[q1][q2]
    let amp = [[c[0], c[2]], [c[1], c[3]]];
    let mut p = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                p += if on_first {
                    amp[i][k].conj() * proj[i][j] * amp[j][k]
                } else {
                    amp[k][i].conj() * proj[i][j] * amp[k][j]
                };
            }
        }
    }
    p.re
}

/// Largest single-outcome probability over all local spin observables on either qubit.
pub fn guessing_probability_bruteforce(c: &[Complex64; 4]) -> f64 {
    let axes = [Axis::closed(0.0, std::f64::consts::PI, 32), Axis::angle(64)];
    let mut best: f64 = 0.0;
    for on_first in [true, false] {
        let f = |x: &[f64]| {
            let p = local_plus_probability(c, on_first, x[0], x[1]);
            p.max(1.0 - p)
        };
        let (x, grid_best) = grid_search_serial(&axes, &f);
        let step: Vec<f64> = axes.iter().map(|a| a.spacing()).collect();
        let (_, nv) = nelder_mead(&|x: &[f64]| -f(x), &x, &step, REFINE_TOL * 1e-3, 5_000);
        let v = grid_best.max(-nv);
        best = best.max(v);
    }
    best
}

fn grid_search_serial(axes: &[Axis], f: &impl Fn(&[f64]) -> f64) -> (Vec<f64>, f64) {
    let mut best = (vec![0.0; axes.len()], f64::NEG_INFINITY);
    for i in 0..axes[0].points {
        for j in 0..axes[1].points {
            let x = [axes[0].value(i), axes[1].value(j)];
            let v = f(&x);
            if v > best.1 {
                best = (x.to_vec(), v);
            }
        }
    }
    best
}

/// Largest squared Schmidt coefficient, `cos^2` of the Schmidt angle.
pub fn schmidt_cos2(c: &[Complex64; 4]) -> f64 {
    let m = Matrix2::<f64>::from_fn(|i, j| match (i, j) {
        (0, 0) => c[0],
        (0, 1) => c[2],
        (1, 0) => c[1],
        _ => c[3],
    });
    (m * m.adjoint()).hermitian_eigenvalues()[1]
}

/// Worst disagreement between brute-force guessing probability and `cos^2` of the Schmidt
/// angle over `samples` Haar states. Claimed value 0.
pub fn verify_guessing_probability<R: Rng + ?Sized>(
    samples: usize,
    rng: &mut R,
) -> OptimizationReport {
    let states: Vec<[Complex64; 4]> = (0..samples)
        .map(|_| random_pure_state::<f64, _>(rng).coefficients())
        .collect();
    let errors: Vec<f64> = states
        .par_iter()
        .map(|c| (guessing_probability_bruteforce(c) - schmidt_cos2(c)).abs())
        .collect();
    let (worst_idx, worst) = errors
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |acc, (i, e)| if e > acc.1 { (i, e) } else { acc });
    let found = Optimum {
        x: vec![worst_idx as f64],
        value: worst,
        grid_value: worst,
    };
    OptimizationReport::new(
        "guessing_probability",
        0.0,
        found,
        std::f64::consts::PI / 31.0,
        1e-4,
    )
}

/// All oracle checks with their default settings.
pub fn run_all<R: Rng + ?Sized>(rng: &mut R) -> Vec<OptimizationReport> {
    let mut out = vec![verify_separable_max(), verify_separable_min()];
    for k in 1..=20 {
        let eps = k as f64 / 20.0;
        if let Ok(r) = verify_min_concurrence(eps) {
            out.push(r);
        }
    }
    out.extend(verify_werner_max());
    for nm in [
        NoiseModel::ideal(),
        NoiseModel::hardware750(),
        NoiseModel {
            t2: 0.44,
            r2: 0.56,
            sigma: 0.1,
        },
    ] {
        out.push(verify_noisy_separable_max(&nm));
    }
    out.push(verify_guessing_probability(1000, rng));
    out
}
