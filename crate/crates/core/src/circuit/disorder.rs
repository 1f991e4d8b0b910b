//! Ensembles of devices with randomized junction energies.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::extract::EffectiveParams;
use super::flux::{optimize_flux, FluxOptions, FluxResult};
use super::params::CircuitParams;
use super::quantize::{quantize, Truncation};
use super::spectrum::{Method, SpectrumOptions};
use super::device_params;
use crate::error::{Error, Result};

/// Redraws allowed per sample before giving up.
const MAX_REDRAWS: usize = 1000;

#[derive(Debug, Clone)]
pub struct DisorderOptions {
    /// Relative standard deviation of every junction energy.
    pub sigma_rel: f64,
    pub samples: usize,
    pub seed: u64,
    /// Values of the first ring's flux to sweep; other fluxes stay at the
    /// values in the ideal parameters.
    pub flux_sweep: Vec<f64>,
    pub method: Method,
    pub truncation: Truncation,
    pub spectrum: SpectrumOptions,
    /// Retune every sample with the flux optimizer.
    pub retune: Option<FluxOptions>,
}

impl Default for DisorderOptions {
    fn default() -> Self {
        Self {
            sigma_rel: 0.10,
            samples: 200,
            seed: 0,
            flux_sweep: (0..=10).map(|k| 0.01 * k as f64).collect(),
            method: Method::Sw2,
            truncation: Truncation::default(),
            spectrum: SpectrumOptions::default(),
            retune: Some(FluxOptions::default()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SampleResult {
    pub id: usize,
    pub junction_energy: Vec<[f64; 4]>,
    /// Draws rejected before this sample was accepted.
    pub redraws: usize,
    /// Effective parameters at each sweep point.
    pub curve: Vec<EffectiveParams>,
    pub retune: Option<FluxResult>,
}

/// Ensemble statistics of the couplings at one sweep point (rad/ns).
#[derive(Debug, Clone, PartialEq)]
pub struct FluxPointSummary {
    pub flux: f64,
    pub mean_g: Vec<f64>,
    pub std_g: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct DisorderResult {
    pub ideal: Vec<EffectiveParams>,
    pub samples: Vec<SampleResult>,
    pub summary: Vec<FluxPointSummary>,
}

impl DisorderResult {
    pub fn total_redraws(&self) -> usize {
        self.samples.iter().map(|s| s.redraws).sum()
    }

    /// Fraction of retuned samples whose coupling spread is below `tol` (rad/ns).
    pub fn retunable_fraction(&self, tol: f64) -> f64 {
        let ok = self.samples.iter().filter(|s| s.retune.as_ref().is_some_and(|r| r.spread < tol)).count();
        ok as f64 / self.samples.len() as f64
    }
}

fn sweep_params(base: &CircuitParams, f: f64) -> CircuitParams {
    let mut p = base.clone();
    p.flux[0] = f;
    p
}

fn draw_sample(ideal: &CircuitParams, sigma_rel: f64, seed: u64, id: usize, truncation: Truncation) -> Result<(CircuitParams, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id as u64);
    let mut redraws = 0;
    loop {
        let mut p = ideal.clone();
        let mut positive = true;
        for ring in p.junction_energy.iter_mut() {
            for e in ring.iter_mut() {
                let normal = Normal::new(*e, sigma_rel * *e).map_err(|err| Error::InvalidArgument(err.to_string()))?;
                *e = normal.sample(&mut rng);
                positive &= *e > 0.0;
            }
        }
        if positive && quantize(&p, truncation).is_ok() {
            return Ok((p, redraws));
        }
        redraws += 1;
        if redraws > MAX_REDRAWS {
            return Err(Error::Convergence(format!("sample {id}: no admissible draw after {MAX_REDRAWS} attempts")));
        }
    }
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Draws `samples` devices with every junction energy from
/// `Normal(E, sigma_rel * E)` and evaluates each over the flux sweep.
/// Sample `k` uses stream `k` of a ChaCha8 generator seeded with `seed`, so
/// results do not depend on scheduling.
pub fn disorder_ensemble(ideal: &CircuitParams, opts: &DisorderOptions) -> Result<DisorderResult> {
    ideal.validate()?;
    if !(opts.sigma_rel >= 0.0) || opts.samples == 0 {
        return Err(Error::InvalidArgument("need sigma_rel >= 0 and at least one sample".into()));
    }
    let eval_curve = |p: &CircuitParams| -> Result<Vec<EffectiveParams>> {
        opts.flux_sweep
            .iter()
            .map(|&f| device_params(&sweep_params(p, f), opts.method, opts.truncation, &opts.spectrum))
            .collect()
    };
    let ideal_curve = eval_curve(ideal)?;
    let samples: Vec<SampleResult> = (0..opts.samples)
        .into_par_iter()
        .map(|id| {
            let (p, redraws) = draw_sample(ideal, opts.sigma_rel, opts.seed, id, opts.truncation)?;
            let curve = eval_curve(&p)?;
            let retune = match &opts.retune {
                Some(fo) => Some(optimize_flux(&p, &FluxOptions { seed: opts.seed ^ id as u64, ..fo.clone() })?),
                None => None,
            };
            Ok(SampleResult { id, junction_energy: p.junction_energy, redraws, curve, retune })
        })
        .collect::<Result<_>>()?;
    let n = ideal.n_qubits();
    let summary = opts
        .flux_sweep
        .iter()
        .enumerate()
        .map(|(k, &flux)| {
            let (mean_g, std_g) = (0..n)
                .map(|i| mean_std(&samples.iter().map(|s| s.curve[k].coupling[i]).collect::<Vec<_>>()))
                .unzip();
            FluxPointSummary { flux, mean_g, std_g }
        })
        .collect();
    Ok(DisorderResult { ideal: ideal_curve, samples, summary })
}
