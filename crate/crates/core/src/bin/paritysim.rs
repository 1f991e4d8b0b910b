use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use paritysim::experiments::{run_report, Experiment, ExperimentConfig};
use paritysim::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Spectrum,
    OptimizeFlux,
    Gate,
    Ghz,
    Disorder,
    CancelZz,
}

impl From<Command> for Experiment {
    fn from(c: Command) -> Self {
        match c {
            Command::Spectrum => Experiment::Spectrum,
            Command::OptimizeFlux => Experiment::OptimizeFlux,
            Command::Gate => Experiment::Gate,
            Command::Ghz => Experiment::Ghz,
            Command::Disorder => Experiment::Disorder,
            Command::CancelZz => Experiment::CancelZz,
        }
    }
}

/// Circuit spectroscopy and pulse-level simulation of parity-controlled gates.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    experiment: Command,
    #[arg(long)]
    config: PathBuf,
    /// Overrides `run.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `run.output`; without either the report goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidArgument(_) | Error::InvalidCircuit(_) | Error::DimensionCap { .. } => 2,
        Error::Io(_) => 1,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> paritysim::Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let mut config = ExperimentConfig::load(&cli.config)?;
    let wanted = Experiment::from(cli.experiment);
    if config.experiment != wanted {
        return Err(Error::Config(format!(
            "config describes `{}` but `{}` was requested",
            config.experiment.name(),
            wanted.name()
        )));
    }
    if let Some(s) = cli.seed {
        config.run.seed = s;
    }
    if let Some(p) = &cli.out {
        config.run.output = Some(p.display().to_string());
    }
    let report = run_report(&config)?;
    match &config.run.output {
        Some(p) => std::fs::write(p, report)?,
        None => print!("{report}"),
    }
    Ok(())
}
