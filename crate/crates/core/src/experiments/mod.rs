//! Config-driven experiments that write CSV reports.

pub mod config;
pub mod output;
mod runners;

pub use config::{Experiment, ExperimentConfig};
pub use output::{num, parse, render, sha256_hex, Table};
pub use runners::{
    circuit_device, effective_device, run_cancel_zz, run_disorder, run_gate, run_ghz, run_optimize_flux, run_spectrum,
};

use crate::error::Result;

/// Runs the experiment named in the config.
pub fn run(config: &ExperimentConfig) -> Result<Table> {
    config.validate()?;
    match config.experiment {
        Experiment::Spectrum => run_spectrum(config),
        Experiment::OptimizeFlux => run_optimize_flux(config),
        Experiment::Gate => run_gate(config),
        Experiment::Ghz => run_ghz(config),
        Experiment::Disorder => run_disorder(config),
        Experiment::CancelZz => run_cancel_zz(config),
    }
}

/// Runs the experiment and renders the full report.
pub fn run_report(config: &ExperimentConfig) -> Result<String> {
    render(config, &run(config)?)
}
