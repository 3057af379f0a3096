use serde_json::{json, Value};
use swapwit::experiments::{
    exp_bell_table, exp_detection_rate, exp_noise_ci, exp_omega_sweep, exp_random_states,
    exp_werner_sweep, trial_rng, uniform_grid, ExperimentConfig, StateSampler, DEAD_ZONE_UPPER,
};
use swapwit::oracle::run_all;
use swapwit::photonic::{measure_p1, solve_phases, NoiseScope, PrepPhases, SwapStagePhases, WernerStrategy};
use swapwit::qstate::{bell_state, concurrence_pure, BellKind, LocalUnitary};
use swapwit::witness::{noisy_threshold, p1_pure, randomness_bound, witness, IDEAL_THRESHOLD};
use swapwit::PureState;

use crate::args::{Command, SamplerArg, StateInput, StrategyArg};
use crate::error::CliResult;
use crate::input::resolve_state;

pub struct Outcome {
    pub records: Vec<Value>,
    pub summary: Value,
    /// Set when a check ran to completion but did not pass.
    pub failed: bool,
}

impl Outcome {
    fn ok(records: Vec<Value>, summary: Value) -> Self {
        Self {
            records,
            summary,
            failed: false,
        }
    }
}

/// Threshold used when `--threshold` is absent.
pub fn default_threshold(cmd: &Command, cfg: &ExperimentConfig) -> CliResult<f64> {
    Ok(match cmd {
        Command::RandomStates { .. } => DEAD_ZONE_UPPER,
        Command::WitnessOne { .. } => match &cfg.noise {
            Some(nm) => noisy_threshold(nm)?,
            None => IDEAL_THRESHOLD,
        },
        _ => IDEAL_THRESHOLD,
    })
}

fn psi_minus() -> PureState {
    bell_state(BellKind::PsiMinus)
}

fn to_value<T: serde::Serialize>(x: &T) -> CliResult<Value> {
    Ok(serde_json::to_value(x)?)
}

pub fn run(cmd: &Command, cfg: &ExperimentConfig) -> CliResult<Outcome> {
    match cmd {
        Command::Bell => {
            let rows = exp_bell_table(cfg)?;
            let detected: Vec<&str> = rows
                .iter()
                .filter(|r| r.simulated > cfg.threshold)
                .map(|r| r.state.as_str())
                .collect();
            let summary = json!({ "detected": detected.join(" ") });
            Ok(Outcome::ok(rows.iter().map(to_value).collect::<CliResult<_>>()?, summary))
        }
        Command::OmegaSweep { points } => {
            let omegas: Vec<f64> = uniform_grid(*points)
                .iter()
                .map(|u| std::f64::consts::PI * (2.0 * u - 1.0))
                .collect();
            let sweep = exp_omega_sweep(cfg, &omegas)?;
            let summary = json!({ "points": sweep.rows.len(), "rmse": sweep.rmse });
            Ok(Outcome::ok(sweep.rows.iter().map(to_value).collect::<CliResult<_>>()?, summary))
        }
        Command::RandomStates { states } => {
            let res = exp_random_states(cfg, *states)?;
            let summary = json!({
                "dead_zone_lower": IDEAL_THRESHOLD,
                "dead_zone_upper": cfg.threshold.max(IDEAL_THRESHOLD),
                "confusion": res.confusion,
                "mean_distance": res.mean_distance,
                "median_distance": res.median_distance,
            });
            Ok(Outcome::ok(res.records.iter().map(to_value).collect::<CliResult<_>>()?, summary))
        }
        Command::Werner {
            input,
            points,
            strategy,
        } => {
            let target = resolve_state(input, Some(psi_minus()))?.state;
            let strategy = match strategy {
                StrategyArg::RealTime => WernerStrategy::RealTime,
                StrategyArg::PostProcessing => WernerStrategy::PostProcessing,
            };
            let sweep = exp_werner_sweep(cfg, &target, &uniform_grid(*points), strategy)?;
            let summary = json!({
                "strategy": sweep.strategy,
                "fit": sweep.fit,
                "ideal_slope": p1_pure(&target) - 0.25,
                "ideal_intercept": 0.25,
            });
            Ok(Outcome::ok(sweep.points.iter().map(to_value).collect::<CliResult<_>>()?, summary))
        }
        Command::DetectionRate {
            preprocess,
            sampler,
        } => {
            let sampler = match sampler {
                SamplerArg::Haar => StateSampler::Haar,
                SamplerArg::Product => StateSampler::Product,
            };
            let r = exp_detection_rate(cfg, cfg.trials, *preprocess, sampler)?;
            let summary = json!({ "fraction": r.fraction, "std_error": r.std_error });
            Ok(Outcome::ok(vec![to_value(&r)?], summary))
        }
        Command::NoiseCi { input } => {
            let resolved = resolve_state(input, Some(psi_minus()))?;
            let phases = match resolved.phases {
                Some(p) => p,
                None => solve_phases(&resolved.state)?,
            };
            let ci = exp_noise_ci(cfg, &phases, cfg.trials)?;
            let summary = json!({ "theoretical": p1_pure(&resolved.state), "low": ci.low, "high": ci.high });
            Ok(Outcome::ok(vec![to_value(&ci)?], summary))
        }
        Command::Verify => {
            let mut rng = trial_rng(cfg.seed, 0);
            let reports = run_all(&mut rng);
            let failed = reports.iter().filter(|r| !r.passed).count();
            let summary = json!({
                "reports": reports.len(),
                "passed": reports.len() - failed,
                "failed": failed,
            });
            Ok(Outcome {
                records: reports.iter().map(to_value).collect::<CliResult<_>>()?,
                summary,
                failed: failed > 0,
            })
        }
        Command::WitnessOne {
            input,
            preprocess,
            simulate,
        } => witness_one(cfg, input, *preprocess, *simulate),
    }
}

fn witness_one(
    cfg: &ExperimentConfig,
    input: &StateInput,
    preprocess: bool,
    simulate: bool,
) -> CliResult<Outcome> {
    let resolved = resolve_state(input, None)?;
    let mut rng = trial_rng(cfg.seed, 0);
    let mut evaluate = |s: &PureState, given: Option<&PrepPhases<f64>>| -> CliResult<f64> {
        if !simulate {
            return Ok(p1_pure(s));
        }
        let phases = match given {
            Some(p) => *p,
            None => solve_phases(s)?,
        };
        let shots = if cfg.exact { None } else { Some(cfg.shots) };
        Ok(measure_p1(
            &phases,
            &SwapStagePhases::zero(),
            cfg.noise.as_ref(),
            NoiseScope::Full,
            cfg.readout,
            shots,
            &mut rng,
        )?)
    };
    let runs: Vec<f64> = if preprocess {
        LocalUnitary::ALL
            .iter()
            .map(|u| evaluate(&resolved.state.apply_local_unitary(*u), None))
            .collect::<CliResult<_>>()?
    } else {
        vec![evaluate(&resolved.state, resolved.phases.as_ref())?]
    };
    let p1 = runs.iter().copied().fold(0.0, f64::max).min(1.0);
    let verdict = witness(p1, cfg.threshold, cfg.noise.as_ref())?;
    let rb = randomness_bound(p1, cfg.noise.as_ref())?;
    let record = json!({
        "p1": verdict.p1,
        "threshold": verdict.threshold,
        "entangled": verdict.entangled,
        "concurrence_lower_bound": verdict.concurrence_lower_bound,
        "guessing_probability_upper": rb.guessing_probability_upper,
        "min_entropy_lower": rb.min_entropy_lower,
        "concurrence": concurrence_pure(&resolved.state),
        "runs": runs,
    });
    let summary = json!({
        "verdict": if verdict.entangled { "entangled" } else { "not detected" },
        "p1": verdict.p1,
        "bound": verdict.concurrence_lower_bound,
    });
    Ok(Outcome::ok(vec![record], summary))
}
