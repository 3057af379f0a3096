//! Statevector model of the 8-waveguide swap-test chip.
//!
//! Waveguide `w` encodes `|q1 q2 anc>` with `w = 4 q1 + 2 q2 + anc`. The two-qubit
//! state is prepared on the even waveguides (ancilla `|0>`), then passes through
//! `MMI . trims . crossing . MMI`. The even/odd outcome labels are exchanged by the
//! final couplers, so the ancilla-1 probability is read from the even outputs.

use num_complex::Complex;
use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::linalg::{Matrix2, Matrix4, Matrix8};
use crate::qstate::PureTwoQubitState;
use crate::scalar::{arg_or_zero, cis, creal, czero, Real};

/// Coupler power splitting and phase-error spread.
///
/// `sigma` is the spread of the relative phase between two interfering paths; each
/// individual phase shifter therefore receives an error of spread `sigma / sqrt(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel<T> {
    pub t2: T,
    pub r2: T,
    pub sigma: T,
}

impl<T: Real> NoiseModel<T> {
    pub fn new(t2: T, r2: T, sigma: T) -> Result<Self> {
        let in_unit = |x: T| x >= T::zero() && x <= T::one();
        if !in_unit(t2) || !in_unit(r2) || t2 + r2 > T::one() + T::check_tol() {
            return Err(SimError::Coupler {
                t2: t2.to_f64_lossy(),
                r2: r2.to_f64_lossy(),
            });
        }
        if !(sigma >= T::zero()) || !sigma.is_finite() {
            return Err(SimError::PhaseSpread(sigma.to_f64_lossy()));
        }
        Ok(Self { t2, r2, sigma })
    }

    pub fn ideal() -> Self {
        Self {
            t2: T::lit(0.5),
            r2: T::lit(0.5),
            sigma: T::zero(),
        }
    }

    /// Measured chip parameters: 48:52 couplers, 0.1 rad phase spread.
    pub fn hardware750() -> Self {
        Self {
            t2: T::lit(0.48),
            r2: T::lit(0.52),
            sigma: T::lit(0.1),
        }
    }

    /// `(t2, r2)` rescaled so that they sum to one.
    pub fn balanced_powers(&self) -> (T, T) {
        let s = self.t2 + self.r2;
        if s > T::zero() {
            (self.t2 / s, self.r2 / s)
        } else {
            (T::lit(0.5), T::lit(0.5))
        }
    }

    /// Field amplitudes `(t, r)` as given, without renormalization.
    pub fn amplitudes(&self) -> (T, T) {
        (self.t2.sqrt(), self.r2.sqrt())
    }

    pub fn shifter_spread(&self) -> T {
        self.sigma * T::FRAC_1_SQRT_2()
    }
}

/// Settings of the preparation stage: three MZIs, each followed by a phase-shifter pair.
///
/// `split` acts on the `|01>, |10>` pair and splits the photon between the two
/// first-qubit values; `upper` acts on `|00>, |01>`; `lower` on `|10>, |11>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrepPhases<T> {
    pub split_mzi: [T; 2],
    pub split_ps: [T; 2],
    pub upper_mzi: [T; 2],
    pub upper_ps: [T; 2],
    pub lower_mzi: [T; 2],
    pub lower_ps: [T; 2],
}

impl<T: Real> PrepPhases<T> {
    pub fn zero() -> Self {
        Self::from_array([T::zero(); 12])
    }

    /// Order: split MZI, split PS, upper MZI, upper PS, lower MZI, lower PS (two arms each).
    pub fn from_array(a: [T; 12]) -> Self {
        Self {
            split_mzi: [a[0], a[1]],
            split_ps: [a[2], a[3]],
            upper_mzi: [a[4], a[5]],
            upper_ps: [a[6], a[7]],
            lower_mzi: [a[8], a[9]],
            lower_ps: [a[10], a[11]],
        }
    }

    pub fn to_array(&self) -> [T; 12] {
        [
            self.split_mzi[0],
            self.split_mzi[1],
            self.split_ps[0],
            self.split_ps[1],
            self.upper_mzi[0],
            self.upper_mzi[1],
            self.upper_ps[0],
            self.upper_ps[1],
            self.lower_mzi[0],
            self.lower_mzi[1],
            self.lower_ps[0],
            self.lower_ps[1],
        ]
    }

    pub fn validate(&self) -> Result<()> {
        if self.to_array().iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(SimError::NonFinitePhase)
        }
    }

    pub fn perturbed(&self, errors: &[T; 12]) -> Self {
        let mut a = self.to_array();
        for (x, e) in a.iter_mut().zip(errors) {
            *x = *x + *e;
        }
        Self::from_array(a)
    }

    /// Uniform angles in `[0, 2 pi)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut a = [T::zero(); 12];
        for x in a.iter_mut() {
            *x = T::lit(rng.random::<f64>() * std::f64::consts::TAU);
        }
        Self::from_array(a)
    }
}

/// Trim phases in front of the final couplers, one per waveguide.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwapStagePhases<T> {
    pub trims: [T; 8],
}

impl<T: Real> SwapStagePhases<T> {
    pub fn zero() -> Self {
        Self {
            trims: [T::zero(); 8],
        }
    }

    /// `pi` on every odd waveguide, which exchanges the even and odd outputs.
    pub fn output_exchange() -> Self {
        let mut trims = [T::zero(); 8];
        for (w, t) in trims.iter_mut().enumerate() {
            if w % 2 == 1 {
                *t = T::PI();
            }
        }
        Self { trims }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut trims = self.trims;
        for (a, b) in trims.iter_mut().zip(other.trims) {
            *a = *a + b;
        }
        Self { trims }
    }
}

/// Which phase shifters receive random errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoiseScope {
    Full,
    SwapOnly,
}

/// One realization of the phase errors for a single run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseErrorDraw<T> {
    pub prep: [T; 12],
    pub swap: [T; 8],
}

impl<T: Real> PhaseErrorDraw<T> {
    pub fn zero() -> Self {
        Self {
            prep: [T::zero(); 12],
            swap: [T::zero(); 8],
        }
    }

    /// Independent `N(0, spread)` error on every shifter in scope.
    pub fn sample<R: Rng + ?Sized>(spread: T, scope: NoiseScope, rng: &mut R) -> Self {
        let mut draw = Self::zero();
        let mut gauss = || T::lit(StandardNormal.sample(rng)) * spread;
        if scope == NoiseScope::Full {
            for e in draw.prep.iter_mut() {
                *e = gauss();
            }
        }
        for e in draw.swap.iter_mut() {
            *e = gauss();
        }
        draw
    }
}

/// Amplitudes on the eight chip waveguides.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathState8<T> {
    pub amplitudes: [Complex<T>; 8],
}

impl<T: Real> PathState8<T> {
    /// Loads the two-qubit state onto the even waveguides (ancilla `|0>`).
    pub fn from_two_qubit(s: &PureTwoQubitState<T>) -> Self {
        let mut amplitudes = [czero(); 8];
        for (k, a) in s.basis_vector().into_iter().enumerate() {
            amplitudes[2 * k] = a;
        }
        Self { amplitudes }
    }

    pub fn probabilities(&self) -> [T; 8] {
        self.amplitudes.map(|a| a.norm_sqr())
    }

    pub fn even_power(&self) -> T {
        self.amplitudes.iter().step_by(2).map(|a| a.norm_sqr()).sum()
    }

    pub fn odd_power(&self) -> T {
        self.amplitudes.iter().skip(1).step_by(2).map(|a| a.norm_sqr()).sum()
    }

    pub fn total_power(&self) -> T {
        self.even_power() + self.odd_power()
    }

    /// Relabeled ancilla-1 probability: even-output power over total power.
    pub fn estimate_p1(&self) -> Result<T> {
        let total = self.total_power();
        if !(total > T::zero()) {
            return Err(SimError::NoCounts);
        }
        Ok(self.even_power() / total)
    }
}

/// Photon counts per output waveguide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub counts: [u64; 8],
    pub n0: u64,
    pub n1: u64,
}

impl ShotRecord {
    pub fn from_counts(counts: [u64; 8]) -> Self {
        let n0 = counts.iter().step_by(2).sum();
        let n1 = counts.iter().skip(1).step_by(2).sum();
        Self { counts, n0, n1 }
    }

    pub fn total(&self) -> u64 {
        self.n0 + self.n1
    }

    /// `n0 / (n0 + n1)`.
    pub fn estimate_p1(&self) -> Result<f64> {
        if self.total() == 0 {
            return Err(SimError::NoCounts);
        }
        Ok(self.n0 as f64 / self.total() as f64)
    }
}

/// `i e^{i(th1+th2)/2} [[sin d, cos d], [cos d, -sin d]]` with `d = (th1 - th2) / 2`.
/// Each arm is 2pi-periodic.
pub fn mzi<T: Real>(theta: [T; 2]) -> Matrix2<T> {
    let d = (theta[0] - theta[1]) / T::lit(2.0);
    let (s, c) = (d.sin(), d.cos());
    let g = Complex::new(T::zero(), T::one()) * cis((theta[0] + theta[1]) / T::lit(2.0));
    Matrix2 {
        data: [[g * s, g * c], [g * c, -g * s]],
    }
}

pub fn phase_pair<T: Real>(phi: [T; 2]) -> Matrix2<T> {
    Matrix2::diagonal([cis(phi[0]), cis(phi[1])])
}

/// MZI followed by its phase-shifter pair.
pub fn rotation<T: Real>(theta: [T; 2], phi: [T; 2]) -> Matrix2<T> {
    phase_pair(phi) * mzi(theta)
}

/// `[[t, i r], [i r, t]]`.
pub fn mmi<T: Real>(t: T, r: T) -> Matrix2<T> {
    let ir = Complex::new(T::zero(), r);
    Matrix2 {
        data: [[creal(t), ir], [ir, creal(t)]],
    }
}

/// Full preparation unitary in matrix basis order, acting on `|01>`.
pub fn prep_stage_matrix<T: Real>(ph: &PrepPhases<T>) -> Matrix4<T> {
    Matrix4::embed_pair(&rotation(ph.lower_mzi, ph.lower_ps), 2)
        * Matrix4::embed_pair(&rotation(ph.upper_mzi, ph.upper_ps), 0)
        * Matrix4::embed_pair(&rotation(ph.split_mzi, ph.split_ps), 1)
}

fn half_diff<T: Real>(pair: [T; 2]) -> T {
    (pair[0] - pair[1]) / T::lit(2.0)
}

/// Prepared state with the global phase of the split stage removed.
pub fn prepare_state<T: Real>(ph: &PrepPhases<T>) -> PureTwoQubitState<T> {
    let (s1, c1) = half_diff(ph.split_mzi).sin_cos();
    let (su, cu) = half_diff(ph.upper_mzi).sin_cos();
    let (sl, cl) = half_diff(ph.lower_mzi).sin_cos();
    let sum_u = ph.upper_mzi[0] + ph.upper_mzi[1];
    let sum_l = ph.lower_mzi[0] + ph.lower_mzi[1];
    let upper = cis(ph.split_ps[0] + sum_u / T::lit(2.0) + ph.upper_ps[0]);
    let lower = cis(ph.split_ps[1] + sum_l / T::lit(2.0) + ph.lower_ps[0]);
    let du = ph.upper_ps[0] - ph.upper_ps[1];
    let dl = ph.lower_ps[0] - ph.lower_ps[1];
    PureTwoQubitState {
        c00: upper * (s1 * cu),
        c01: -upper * cis(-du) * (s1 * su),
        c10: lower * (c1 * sl),
        c11: lower * cis(-dl) * (c1 * cl),
    }
}

/// Inverse of [`prepare_state`] up to a global phase. Second-arm settings are pinned to
/// zero; an empty amplitude pair gets zero phases on its MZI and shifters.
pub fn solve_phases<T: Real>(target: &PureTwoQubitState<T>) -> Result<PrepPhases<T>> {
    let n = target.norm_sqr();
    if (n - T::one()).abs() > T::check_tol() {
        return Err(SimError::NotNormalized(n.to_f64_lossy()));
    }
    let two = T::lit(2.0);
    let (a, d, g, b) = (target.c00, target.c01, target.c10, target.c11);
    let upper_mass = a.norm_sqr() + d.norm_sqr();
    let lower_mass = g.norm_sqr() + b.norm_sqr();

    let d_split = upper_mass.sqrt().atan2(lower_mass.sqrt());
    let mut ph = PrepPhases::zero();
    ph.split_mzi = [two * d_split, T::zero()];

    if upper_mass > T::zero() {
        let du = d.norm().atan2(a.norm());
        ph.upper_mzi = [two * du, T::zero()];
        ph.upper_ps = [arg_or_zero(a) - arg_or_zero(d) + T::PI(), T::zero()];
        ph.split_ps[0] = arg_or_zero(d) - du - T::PI();
    }
    if lower_mass > T::zero() {
        let dl = g.norm().atan2(b.norm());
        ph.lower_mzi = [two * dl, T::zero()];
        ph.lower_ps = [arg_or_zero(g) - arg_or_zero(b), T::zero()];
        ph.split_ps[1] = arg_or_zero(b) - dl;
    }
    Ok(ph)
}

/// Swaps waveguides 3 and 5 (`|011>` and `|101>`).
pub fn crossing<T: Real>() -> Matrix8<T> {
    Matrix8::from_fn(|i, j| {
        let target = match j {
            3 => 5,
            5 => 3,
            other => other,
        };
        if i == target {
            creal(T::one())
        } else {
            czero()
        }
    })
}

pub fn coupler_layer<T: Real>(t: T, r: T) -> Matrix8<T> {
    let block = mmi(t, r);
    Matrix8::from_fn(|i, j| {
        if i / 2 == j / 2 {
            block.data[i % 2][j % 2]
        } else {
            czero()
        }
    })
}

pub fn trim_layer<T: Real>(trims: &[T; 8]) -> Matrix8<T> {
    Matrix8::diagonal(trims.map(cis))
}

/// `couplers . trims . crossing . couplers`. Without a noise model the couplers are
/// balanced; `trim_errors` is added to the trim settings.
pub fn swap_stage_unitary<T: Real>(
    sp: &SwapStagePhases<T>,
    nm: Option<&NoiseModel<T>>,
    trim_errors: Option<&[T; 8]>,
) -> Matrix8<T> {
    let (t, r) = match nm {
        Some(nm) => nm.amplitudes(),
        None => (T::FRAC_1_SQRT_2(), T::FRAC_1_SQRT_2()),
    };
    let mut trims = sp.trims;
    if let Some(err) = trim_errors {
        for (x, e) in trims.iter_mut().zip(err) {
            *x = *x + *e;
        }
    }
    let couplers = coupler_layer(t, r);
    couplers * trim_layer(&trims) * crossing() * couplers
}

/// One run of the chip. `noise` carries the coupler model and this run's phase errors.
pub fn run_circuit<T: Real>(
    ph: &PrepPhases<T>,
    sp: &SwapStagePhases<T>,
    noise: Option<(&NoiseModel<T>, &PhaseErrorDraw<T>)>,
) -> PathState8<T> {
    let (state, u) = match noise {
        None => (prepare_state(ph), swap_stage_unitary(sp, None, None)),
        Some((nm, draw)) => (
            prepare_state(&ph.perturbed(&draw.prep)),
            swap_stage_unitary(sp, Some(nm), Some(&draw.swap)),
        ),
    };
    PathState8 {
        amplitudes: u.mul_vec(&PathState8::from_two_qubit(&state).amplitudes),
    }
}

/// One run with a fresh phase-error draw from `rng`.
pub fn run_circuit_noisy<T: Real, R: Rng + ?Sized>(
    ph: &PrepPhases<T>,
    sp: &SwapStagePhases<T>,
    nm: &NoiseModel<T>,
    scope: NoiseScope,
    rng: &mut R,
) -> PathState8<T> {
    let draw = PhaseErrorDraw::sample(nm.shifter_spread(), scope, rng);
    run_circuit(ph, sp, Some((nm, &draw)))
}

/// Multinomial photon counts over the eight outputs.
pub fn sample_shots<T: Real, R: Rng + ?Sized>(
    out: &PathState8<T>,
    shots: u64,
    rng: &mut R,
) -> Result<ShotRecord> {
    if shots == 0 {
        return Err(SimError::ZeroShots);
    }
    let probs = out.probabilities().map(|p| p.to_f64_lossy().max(0.0));
    let total: f64 = probs.iter().sum();
    if !(total > 0.0) {
        return Err(SimError::NoCounts);
    }
    let mut counts = [0u64; 8];
    let mut remaining = shots;
    let mut mass_left = total;
    for (k, p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if k == 7 {
            counts[k] = remaining;
            break;
        }
        let q = if mass_left > 0.0 {
            (p / mass_left).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let n = Binomial::new(remaining, q)
            .expect("binomial parameters are in range")
            .sample(rng);
        counts[k] = n;
        remaining -= n;
        mass_left -= p;
    }
    Ok(ShotRecord::from_counts(counts))
}

/// Detector layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Readout {
    /// One run, all eight outputs counted.
    EightOutputs,
    /// Two runs, the second with the output exchange; only odd outputs counted.
    FourDetector,
}

/// Estimated P(1) for one prepared setting. `shots = None` uses exact probabilities.
/// Each circuit execution gets its own noise draw.
#[allow(clippy::too_many_arguments)]
pub fn measure_p1<T: Real, R: Rng + ?Sized>(
    ph: &PrepPhases<T>,
    sp: &SwapStagePhases<T>,
    nm: Option<&NoiseModel<T>>,
    scope: NoiseScope,
    readout: Readout,
    shots: Option<u64>,
    rng: &mut R,
) -> Result<T> {
    let execute = |trims: &SwapStagePhases<T>, rng: &mut R| match nm {
        None => run_circuit(ph, trims, None),
        Some(nm) => run_circuit_noisy(ph, trims, nm, scope, rng),
    };
    match readout {
        Readout::EightOutputs => {
            let out = execute(sp, rng);
            match shots {
                None => out.estimate_p1(),
                Some(n) => Ok(T::lit(sample_shots(&out, n, rng)?.estimate_p1()?)),
            }
        }
        Readout::FourDetector => {
            let direct = execute(sp, rng);
            let exchanged = execute(&sp.plus(&SwapStagePhases::output_exchange()), rng);
            match shots {
                None => {
                    let (a, b) = (direct.odd_power(), exchanged.odd_power());
                    if !(a + b > T::zero()) {
                        return Err(SimError::NoCounts);
                    }
                    Ok(b / (a + b))
                }
                Some(n) => {
                    if n < 2 {
                        return Err(SimError::ZeroShots);
                    }
                    let a = sample_shots(&direct, n / 2, rng)?.n1;
                    let b = sample_shots(&exchanged, n - n / 2, rng)?.n1;
                    if a + b == 0 {
                        return Err(SimError::NoCounts);
                    }
                    Ok(T::lit(b as f64 / (a + b) as f64))
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WernerStrategy {
    /// Each shot first picks one of the five pure components.
    RealTime,
    /// One shot pool per component, then multinomial resampling of outcomes.
    PostProcessing,
}

fn werner_components<T: Real>(phi: &PureTwoQubitState<T>) -> Result<[PrepPhases<T>; 5]> {
    Ok([
        solve_phases(phi)?,
        solve_phases(&PureTwoQubitState::basis(false, false))?,
        solve_phases(&PureTwoQubitState::basis(false, true))?,
        solve_phases(&PureTwoQubitState::basis(true, false))?,
        solve_phases(&PureTwoQubitState::basis(true, true))?,
    ])
}

fn pick_output<R: Rng + ?Sized>(probs: &[f64; 8], rng: &mut R) -> usize {
    let total: f64 = probs.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (k, p) in probs.iter().enumerate() {
        if u < *p {
            return k;
        }
        u -= p;
    }
    probs.iter().rposition(|p| *p > 0.0).unwrap_or(7)
}

/// P(1) of the Werner-like mixture `p |phi><phi| + (1-p) 1/4`, realized as a random
/// choice among `phi` and the four computational basis states.
pub fn werner_run<T: Real, R: Rng + ?Sized>(
    phi: &PureTwoQubitState<T>,
    p: T,
    strategy: WernerStrategy,
    shots: u64,
    nm: Option<&NoiseModel<T>>,
    rng: &mut R,
) -> Result<T> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(SimError::MixingWeight(p.to_f64_lossy()));
    }
    if shots == 0 {
        return Err(SimError::ZeroShots);
    }
    let comps = werner_components(phi)?;
    let pf = p.to_f64_lossy();
    let rest = (1.0 - pf) / 4.0;
    let chooser = WeightedIndex::new([pf, rest, rest, rest, rest])
        .map_err(|_| SimError::MixingWeight(pf))?;
    let sp = SwapStagePhases::zero();
    let probs_of = |out: PathState8<T>| out.probabilities().map(|x| x.to_f64_lossy());

    let (mut n0, mut n1) = (0u64, 0u64);
    match strategy {
        WernerStrategy::RealTime => {
            let ideal: Vec<[f64; 8]> = comps
                .iter()
                .map(|c| probs_of(run_circuit(c, &sp, None)))
                .collect();
            for _ in 0..shots {
                let k = chooser.sample(rng);
                let probs = match nm {
                    None => ideal[k],
                    Some(nm) => probs_of(run_circuit_noisy(
                        &comps[k],
                        &sp,
                        nm,
                        NoiseScope::Full,
                        rng,
                    )),
                };
                if pick_output(&probs, rng) % 2 == 0 {
                    n0 += 1;
                } else {
                    n1 += 1;
                }
            }
        }
        WernerStrategy::PostProcessing => {
            let mut pools = [(0u64, 0u64); 5];
            for (k, c) in comps.iter().enumerate() {
                let out = match nm {
                    None => run_circuit(c, &sp, None),
                    Some(nm) => run_circuit_noisy(c, &sp, nm, NoiseScope::Full, rng),
                };
                let rec = sample_shots(&out, shots, rng)?;
                pools[k] = (rec.n0, rec.total());
            }
            for _ in 0..shots {
                let (even, size) = pools[chooser.sample(rng)];
                if rng.random_range(0..size) < even {
                    n0 += 1;
                } else {
                    n1 += 1;
                }
            }
        }
    }
    Ok(T::lit(n0 as f64 / (n0 + n1) as f64))
}
