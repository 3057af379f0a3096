use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "swapwit", version, about = "Seeded swap-test witness experiments")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GlobalArgs {
    /// Master seed; every trial derives its own stream from it.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 100_000)]
    pub shots: u64,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub trials: u64,
    /// Coupler powers and phase spread as `t2,r2,sigma`.
    #[arg(long, global = true, conflicts_with = "noise_preset")]
    pub noise: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub noise_preset: Option<NoisePreset>,
    /// Decision threshold; the default depends on the subcommand.
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    /// Worker threads; 0 lets the pool choose.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Infinite-shot mode: read exact output probabilities.
    #[arg(long, global = true)]
    pub exact: bool,
    #[arg(long, global = true, value_enum, default_value_t = ReadoutArg::Eight)]
    pub readout: ReadoutArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoisePreset {
    Hardware750,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReadoutArg {
    Eight,
    Four,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyArg {
    RealTime,
    PostProcessing,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerArg {
    Haar,
    Product,
}

/// A state given either as amplitudes or as preparation phases.
#[derive(Args, Debug, Clone, Serialize)]
pub struct StateInput {
    /// Amplitudes `re+imi` for |00>, |10>, |01>, |11>, comma separated; normalized on read.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "phases")]
    pub state: Option<String>,
    /// Twelve preparation phases in radians: split MZI, split PS, upper MZI, upper PS,
    /// lower MZI, lower PS.
    #[arg(long, allow_hyphen_values = true)]
    pub phases: Option<String>,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// P(1) for the four Bell states, with noise intervals when noise is set.
    Bell,
    /// P(1) across the (|01> + e^{i w}|10>)/sqrt2 family on a uniform grid of w in [-pi, pi].
    OmegaSweep {
        #[arg(long, default_value_t = 41)]
        points: usize,
    },
    /// Random preparation settings classified by theory and simulation.
    RandomStates {
        #[arg(long, default_value_t = 2050)]
        states: u64,
    },
    /// Werner-like mixtures with a straight-line fit.
    Werner {
        #[command(flatten)]
        input: StateInput,
        #[arg(long, default_value_t = 11)]
        points: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::RealTime)]
        strategy: StrategyArg,
    },
    /// Fraction of `--trials` random pure states the ideal witness flags.
    DetectionRate {
        #[arg(long)]
        preprocess: bool,
        #[arg(long, value_enum, default_value_t = SamplerArg::Haar)]
        sampler: SamplerArg,
    },
    /// Mean and 2-sigma interval of P(1) under `--trials` noise draws.
    NoiseCi {
        #[command(flatten)]
        input: StateInput,
    },
    /// Runs every oracle check; exits nonzero if any fails.
    Verify,
    /// Verdict for a single state.
    WitnessOne {
        #[command(flatten)]
        input: StateInput,
        /// Best of the four locally rotated runs.
        #[arg(long)]
        preprocess: bool,
        /// Estimate P(1) on the chip model instead of the ideal value.
        #[arg(long)]
        simulate: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bell => "bell",
            Command::OmegaSweep { .. } => "omega-sweep",
            Command::RandomStates { .. } => "random-states",
            Command::Werner { .. } => "werner",
            Command::DetectionRate { .. } => "detection-rate",
            Command::NoiseCi { .. } => "noise-ci",
            Command::Verify => "verify",
            Command::WitnessOne { .. } => "witness-one",
        }
    }
}
