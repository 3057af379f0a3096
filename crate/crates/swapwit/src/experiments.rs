//! Seeded Monte Carlo campaigns built on the gate-level and photonic models.
//!
//! Every trial owns a `ChaCha8Rng` seeded from the master seed with the trial index as
//! its stream, so results do not depend on how trials are spread over threads.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::photonic::{
    measure_p1, prepare_state, run_circuit, solve_phases, werner_run, NoiseModel, NoiseScope,
    PhaseErrorDraw, PrepPhases, Readout, SwapStagePhases, WernerStrategy,
};
use crate::qstate::{
    bell_state, random_product_state, random_pure_state, BellKind, PureTwoQubitState,
};
use crate::witness::{p1_pure, witness_with_preprocessing, IDEAL_THRESHOLD};

/// Upper edge of the dead zone used to classify simulated P(1) values.
pub const DEAD_ZONE_UPPER: f64 = 0.5085;

/// How coupler imperfections are drawn in the confidence-interval procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CouplerSampling {
    /// `t ~ N(sqrt(t2), spread)`, `r ~ N(sqrt(r2), spread)`.
    Amplitude,
    /// `t2 ~ N(t2, spread)`, `r2 ~ N(r2, spread)`.
    Power,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub shots: u64,
    pub trials: u64,
    pub noise: Option<NoiseModel<f64>>,
    pub threshold: f64,
    /// Use exact output probabilities instead of finite shots.
    pub exact: bool,
    pub readout: Readout,
    pub coupler_sampling: CouplerSampling,
    pub coupler_spread: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            shots: 100_000,
            trials: 10_000,
            noise: None,
            threshold: IDEAL_THRESHOLD,
            exact: false,
            readout: Readout::EightOutputs,
            coupler_sampling: CouplerSampling::Amplitude,
            coupler_spread: 0.02,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 || self.trials == 0 {
            return Err(SimError::ZeroShots);
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(SimError::Probability(self.threshold));
        }
        if !(self.coupler_spread >= 0.0) || !self.coupler_spread.is_finite() {
            return Err(SimError::PhaseSpread(self.coupler_spread));
        }
        if let Some(nm) = &self.noise {
            NoiseModel::new(nm.t2, nm.r2, nm.sigma)?;
        }
        Ok(())
    }

    fn shots_opt(&self) -> Option<u64> {
        if self.exact {
            None
        } else {
            Some(self.shots)
        }
    }
}

/// Generator for one trial: the master seed with the trial's own stream.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn stream(block: u64, index: u64) -> u64 {
    (block << 40) | index
}

fn simulate_p1<R: Rng + ?Sized>(
    cfg: &ExperimentConfig,
    ph: &PrepPhases<f64>,
    rng: &mut R,
) -> Result<f64> {
    measure_p1(
        ph,
        &SwapStagePhases::zero(),
        cfg.noise.as_ref(),
        NoiseScope::Full,
        cfg.readout,
        cfg.shots_opt(),
        rng,
    )
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseCi {
    pub mean: f64,
    pub std: f64,
    pub low: f64,
    pub high: f64,
    pub draws: u64,
}

fn sample_coupler<R: Rng + ?Sized>(
    nm: &NoiseModel<f64>,
    sampling: CouplerSampling,
    spread: f64,
    rng: &mut R,
) -> (f64, f64) {
    let normal = |mean: f64| Normal::new(mean, spread).expect("spread is validated");
    loop {
        let (t, r) = match sampling {
            CouplerSampling::Amplitude => (
                normal(nm.t2.sqrt()).sample(rng),
                normal(nm.r2.sqrt()).sample(rng),
            ),
            CouplerSampling::Power => {
                let (a, b) = (normal(nm.t2).sample(rng), normal(nm.r2).sample(rng));
                if a < 0.0 || b < 0.0 {
                    continue;
                }
                (a.sqrt(), b.sqrt())
            }
        };
        // Slack absorbs rounding at t2 + r2 = 1 exactly.
        if t >= 0.0 && r >= 0.0 && t * t + r * r <= 1.0 + 1e-12 {
            return (t, r);
        }
    }
}

fn noise_ci_block(
    cfg: &ExperimentConfig,
    phases: &PrepPhases<f64>,
    n_draws: u64,
    block: u64,
) -> NoiseCi {
    let sp = SwapStagePhases::zero();
    let nm = match cfg.noise {
        None => {
            let v = run_circuit(phases, &sp, None).even_power();
            return NoiseCi {
                mean: v,
                std: 0.0,
                low: v,
                high: v,
                draws: n_draws,
            };
        }
        Some(nm) => nm,
    };
    let values: Vec<f64> = (0..n_draws)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, stream(block, i));
            let (t, r) = sample_coupler(&nm, cfg.coupler_sampling, cfg.coupler_spread, &mut rng);
            let run_model = NoiseModel {
                t2: t * t,
                r2: r * r,
                sigma: nm.sigma,
            };
            let draw = PhaseErrorDraw::sample(nm.shifter_spread(), NoiseScope::Full, &mut rng);
            run_circuit(phases, &sp, Some((&run_model, &draw))).even_power()
        })
        .collect();
    let (mean, std) = mean_std(&values);
    NoiseCi {
        mean,
        std,
        low: (mean - 2.0 * std).clamp(0.0, 1.0),
        high: (mean + 2.0 * std).clamp(0.0, 1.0),
        draws: n_draws,
    }
}

/// Mean and clipped `mean +- 2 std` of the raw even-output power over `n_draws` noisy
/// runs, each with its own coupler and phase-error draw.
pub fn exp_noise_ci(
    cfg: &ExperimentConfig,
    phases: &PrepPhases<f64>,
    n_draws: u64,
) -> Result<NoiseCi> {
    cfg.validate()?;
    if n_draws == 0 {
        return Err(SimError::ZeroShots);
    }
    Ok(noise_ci_block(cfg, phases, n_draws, 0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellRow {
    pub state: String,
    pub theoretical: f64,
    pub simulated: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Theoretical and simulated P(1) for the four Bell states. With noise, the simulated
/// value and interval come from `cfg.trials` noisy draws.
pub fn exp_bell_table(cfg: &ExperimentConfig) -> Result<Vec<BellRow>> {
    cfg.validate()?;
    BellKind::ALL
        .iter()
        .enumerate()
        .map(|(k, &kind)| {
            let s = bell_state::<f64>(kind);
            let phases = solve_phases(&s)?;
            let (simulated, ci_low, ci_high) = if cfg.noise.is_some() {
                let ci = noise_ci_block(cfg, &phases, cfg.trials, k as u64);
                (ci.mean, ci.low, ci.high)
            } else {
                let mut rng = trial_rng(cfg.seed, stream(k as u64, 0));
                let v = simulate_p1(cfg, &phases, &mut rng)?;
                (v, v, v)
            };
            Ok(BellRow {
                state: kind.name().to_string(),
                theoretical: p1_pure(&s),
                simulated,
                ci_low,
                ci_high,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaRow {
    pub omega: f64,
    pub theoretical: f64,
    pub simulated: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaSweep {
    pub rows: Vec<OmegaRow>,
    pub rmse: f64,
}

/// `(|01> + e^{i omega}|10>) / sqrt(2)`.
pub fn omega_state(omega: f64) -> PureTwoQubitState<f64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    PureTwoQubitState {
        c00: Complex64::new(0.0, 0.0),
        c01: Complex64::new(h, 0.0),
        c10: Complex64::from_polar(h, omega),
        c11: Complex64::new(0.0, 0.0),
    }
}

pub fn exp_omega_sweep(cfg: &ExperimentConfig, omegas: &[f64]) -> Result<OmegaSweep> {
    cfg.validate()?;
    let rows = omegas
        .par_iter()
        .enumerate()
        .map(|(i, &omega)| {
            let s = omega_state(omega);
            let mut rng = trial_rng(cfg.seed, stream(0, i as u64));
            Ok(OmegaRow {
                omega,
                theoretical: (omega / 2.0).sin().powi(2),
                simulated: simulate_p1(cfg, &solve_phases(&s)?, &mut rng)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rmse = if rows.is_empty() {
        0.0
    } else {
        (rows
            .iter()
            .map(|r| (r.simulated - r.theoretical).powi(2))
            .sum::<f64>()
            / rows.len() as f64)
            .sqrt()
    };
    Ok(OmegaSweep { rows, rmse })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    /// Theoretical value inside the dead zone.
    pub excluded: u64,
    /// Simulated value inside the dead zone.
    pub inconclusive: u64,
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

/// Classification of one (theory, simulation) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    TruePositive,
    TrueNegative,
    FalsePositive,
    FalseNegative,
    Excluded,
    Inconclusive,
}

/// Theory is judged against `lower`, the simulated value must clear `upper` to count as
/// a detection and stay at or below `lower` to count as a rejection.
pub fn classify(theory: f64, simulated: f64, lower: f64, upper: f64) -> Outcome {
    if theory >= lower && theory <= upper {
        return Outcome::Excluded;
    }
    let truly = theory > upper;
    if simulated > upper {
        if truly {
            Outcome::TruePositive
        } else {
            Outcome::FalsePositive
        }
    } else if simulated <= lower {
        if truly {
            Outcome::FalseNegative
        } else {
            Outcome::TrueNegative
        }
    } else {
        Outcome::Inconclusive
    }
}

impl ConfusionMatrix {
    pub fn from_outcomes(outcomes: impl IntoIterator<Item = Outcome>) -> Self {
        let mut m = Self {
            tp: 0,
            tn: 0,
            fp: 0,
            fn_: 0,
            excluded: 0,
            inconclusive: 0,
            accuracy: None,
            precision: None,
            recall: None,
        };
        for o in outcomes {
            match o {
                Outcome::TruePositive => m.tp += 1,
                Outcome::TrueNegative => m.tn += 1,
                Outcome::FalsePositive => m.fp += 1,
                Outcome::FalseNegative => m.fn_ += 1,
                Outcome::Excluded => m.excluded += 1,
                Outcome::Inconclusive => m.inconclusive += 1,
            }
        }
        let ratio = |num: u64, den: u64| (den > 0).then(|| num as f64 / den as f64);
        m.accuracy = ratio(m.tp + m.tn, m.tp + m.tn + m.fp + m.fn_);
        m.precision = ratio(m.tp, m.tp + m.fp);
        m.recall = ratio(m.tp, m.tp + m.fn_);
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub index: u64,
    pub phases: [f64; 12],
    pub p1_theory: f64,
    pub p1_sim: f64,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomStates {
    pub confusion: ConfusionMatrix,
    pub records: Vec<StateRecord>,
    pub mean_distance: f64,
    pub median_distance: f64,
}

/// Uniformly random preparation settings classified by theory and by simulation.
/// The dead zone is `[0.5, cfg.threshold]`.
pub fn exp_random_states(cfg: &ExperimentConfig, n_states: u64) -> Result<RandomStates> {
    cfg.validate()?;
    let upper = cfg.threshold.max(IDEAL_THRESHOLD);
    let records = (0..n_states)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, stream(0, i));
            let phases = PrepPhases::<f64>::random(&mut rng);
            let p1_theory = p1_pure(&prepare_state(&phases));
            let p1_sim = simulate_p1(cfg, &phases, &mut rng)?;
            Ok(StateRecord {
                index: i,
                phases: phases.to_array(),
                p1_theory,
                p1_sim,
                outcome: classify(p1_theory, p1_sim, IDEAL_THRESHOLD, upper),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let confusion = ConfusionMatrix::from_outcomes(records.iter().map(|r| r.outcome));
    let mut dist: Vec<f64> = records
        .iter()
        .map(|r| (r.p1_theory - r.p1_sim).abs())
        .collect();
    dist.sort_by(f64::total_cmp);
    let (mean_distance, median_distance) = if dist.is_empty() {
        (0.0, 0.0)
    } else {
        let mid = dist.len() / 2;
        let median = if dist.len().is_multiple_of(2) {
            (dist[mid - 1] + dist[mid]) / 2.0
        } else {
            dist[mid]
        };
        (dist.iter().sum::<f64>() / dist.len() as f64, median)
    };
    Ok(RandomStates {
        confusion,
        records,
        mean_distance,
        median_distance,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateSampler {
    Haar,
    Product,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionRate {
    pub detected: u64,
    pub total: u64,
    pub fraction: f64,
    pub std_error: f64,
}

const DETECTION_CHUNK: u64 = 10_000;

/// Fraction of sampled pure states with ideal P(1) above 1/2, optionally taking the best
/// of the four locally rotated runs.
pub fn exp_detection_rate(
    cfg: &ExperimentConfig,
    n_states: u64,
    preprocessing: bool,
    sampler: StateSampler,
) -> Result<DetectionRate> {
    cfg.validate()?;
    let chunks = n_states.div_ceil(DETECTION_CHUNK);
    let detected: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = trial_rng(cfg.seed, stream(0, c));
            let len = DETECTION_CHUNK.min(n_states - c * DETECTION_CHUNK);
            let mut hits = 0u64;
            for _ in 0..len {
                let s = match sampler {
                    StateSampler::Haar => random_pure_state::<f64, _>(&mut rng),
                    StateSampler::Product => random_product_state::<f64, _>(&mut rng),
                };
                let hit = if preprocessing {
                    witness_with_preprocessing(&s, IDEAL_THRESHOLD, None, p1_pure)
                        .map(|v| v.entangled)
                        .unwrap_or(false)
                } else {
                    p1_pure(&s) > IDEAL_THRESHOLD
                };
                hits += hit as u64;
            }
            hits
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    let fraction = if n_states > 0 {
        detected as f64 / n_states as f64
    } else {
        0.0
    };
    Ok(DetectionRate {
        detected,
        total: n_states,
        fraction,
        std_error: (fraction * (1.0 - fraction) / n_states.max(1) as f64).sqrt(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub intercept_se: f64,
}

/// Ordinary least squares with residual-based standard errors.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> LineFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let (slope_se, intercept_se) = if xs.len() > 2 {
        let ssr: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum();
        let s2 = ssr / (n - 2.0);
        ((s2 / sxx).sqrt(), (s2 * (1.0 / n + mx * mx / sxx)).sqrt())
    } else {
        (0.0, 0.0)
    };
    LineFit {
        slope,
        intercept,
        slope_se,
        intercept_se,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WernerPoint {
    pub p: f64,
    pub p1: f64,
    pub std_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WernerSweep {
    pub strategy: WernerStrategy,
    pub points: Vec<WernerPoint>,
    pub fit: LineFit,
}

fn werner_exact<R: Rng + ?Sized>(
    cfg: &ExperimentConfig,
    phi: &PureTwoQubitState<f64>,
    p: f64,
    rng: &mut R,
) -> Result<f64> {
    let comps = [
        *phi,
        PureTwoQubitState::basis(false, false),
        PureTwoQubitState::basis(false, true),
        PureTwoQubitState::basis(true, false),
        PureTwoQubitState::basis(true, true),
    ];
    let weights = [p, (1.0 - p) / 4.0, (1.0 - p) / 4.0, (1.0 - p) / 4.0, (1.0 - p) / 4.0];
    let mut total = 0.0;
    for (s, w) in comps.iter().zip(weights) {
        total += w * simulate_p1(cfg, &solve_phases(s)?, rng)?;
    }
    Ok(total)
}

/// Werner-like mixtures of `phi` at each weight in `ps`, with a least-squares line.
pub fn exp_werner_sweep(
    cfg: &ExperimentConfig,
    phi: &PureTwoQubitState<f64>,
    ps: &[f64],
    strategy: WernerStrategy,
) -> Result<WernerSweep> {
    cfg.validate()?;
    let points = ps
        .par_iter()
        .enumerate()
        .map(|(i, &p)| {
            let mut rng = trial_rng(cfg.seed, stream(0, i as u64));
            let p1 = if cfg.exact {
                werner_exact(cfg, phi, p, &mut rng)?
            } else {
                werner_run(phi, p, strategy, cfg.shots, cfg.noise.as_ref(), &mut rng)?
            };
            let std_error = if cfg.exact {
                0.0
            } else {
                (p1 * (1.0 - p1) / cfg.shots as f64).sqrt()
            };
            Ok(WernerPoint { p, p1, std_error })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = points.iter().map(|w| w.p).collect();
    let ys: Vec<f64> = points.iter().map(|w| w.p1).collect();
    Ok(WernerSweep {
        strategy,
        fit: fit_line(&xs, &ys),
        points,
    })
}

/// `k / (n - 1)` for `k = 0..n`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n).map(|k| k as f64 / (n - 1) as f64).collect(),
    }
}
