mod args;
mod error;
mod input;
mod output;
mod run;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;
use swapwit::experiments::ExperimentConfig;
use swapwit::photonic::Readout;

use args::{Cli, Format, ReadoutArg};
use error::{CliError, CliResult};
use output::{write_csv, write_json, Document};

fn build_config(cli: &Cli) -> CliResult<ExperimentConfig> {
    let g = &cli.global;
    let mut cfg = ExperimentConfig {
        seed: g.seed,
        shots: g.shots,
        trials: g.trials,
        noise: input::parse_noise(g.noise.as_deref(), g.noise_preset)?,
        exact: g.exact,
        readout: match g.readout {
            ReadoutArg::Eight => Readout::EightOutputs,
            ReadoutArg::Four => Readout::FourDetector,
        },
        ..ExperimentConfig::default()
    };
    cfg.threshold = match g.threshold {
        Some(t) => t,
        None => run::default_threshold(&cli.command, &cfg)?,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: &Cli) -> CliResult<bool> {
    let cfg = build_config(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.workers)
        .build()?;
    let started = chrono::Utc::now().to_rfc3339();
    let outcome = pool.install(|| run::run(&cli.command, &cfg))?;
    let finished = chrono::Utc::now().to_rfc3339();

    let doc = Document {
        manifest: json!({
            "tool": "swapwit",
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": cli.command.name(),
            "config": cfg,
            "args": cli.command,
            "rng": "ChaCha8, stream (block << 40) | trial",
            "workers": pool.current_num_threads(),
            "started": started,
            "finished": finished,
        }),
        records: outcome.records,
        summary: outcome.summary,
    };
    let sink: Box<dyn Write> = match &cli.global.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match cli.global.format {
        Format::Json => write_json(&doc, &mut sink)?,
        Format::Csv => write_csv(&doc, &mut sink)?,
    }
    sink.flush().map_err(CliError::from)?;
    Ok(!outcome.failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: {} reported failures", cli.command.name());
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
