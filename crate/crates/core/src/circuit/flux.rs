//! Flux biasing that equalizes the qubit-ancilla couplings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::extract::EffectiveParams;
use super::params::{ghz_to_rad, CircuitParams};
use super::quantize::Truncation;
use super::spectrum::{Method, SpectrumOptions};
use super::device_params;
use crate::error::{Error, Result};
use crate::optimize::{brent_root, nelder_mead, NelderMeadOptions};

#[derive(Debug, Clone)]
pub struct FluxOptions {
    pub method: Method,
    pub truncation: Truncation,
    pub spectrum: SpectrumOptions,
    /// Fluxes are confined to `[-bound, bound]` flux quanta.
    pub bound: f64,
    pub restarts: usize,
    pub max_evaluations: usize,
    /// Coupling spread (rad/ns) regarded as equalized.
    pub target_spread: f64,
    pub seed: u64,
}

impl Default for FluxOptions {
    fn default() -> Self {
        Self {
            method: Method::Sw2,
            truncation: Truncation::default(),
            spectrum: SpectrumOptions::default(),
            bound: 0.25,
            restarts: 3,
            max_evaluations: 500,
            target_spread: ghz_to_rad(1e-3),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FluxResult {
    pub flux: Vec<f64>,
    pub params: EffectiveParams,
    /// `max g_i - min g_i` at the returned flux (rad/ns).
    pub spread: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Ring held at zero flux during the search, if any.
    pub pinned: Option<usize>,
}

fn objective(params: &CircuitParams, flux: &[f64], opts: &FluxOptions) -> f64 {
    match device_params(&params.clone().with_flux(flux), opts.method, opts.truncation, &opts.spectrum) {
        // variance in MHz^2 keeps the simplex tolerances meaningful
        Ok(p) => p.coupling_variance() * (1e3 / ghz_to_rad(1.0)).powi(2),
        Err(_) => f64::INFINITY,
    }
}

struct Search<'a> {
    params: &'a CircuitParams,
    opts: &'a FluxOptions,
    /// Index of the ring held at zero, or `None` for a free search.
    pinned: Option<usize>,
}

impl Search<'_> {
    fn expand(&self, free: &[f64]) -> Vec<f64> {
        match self.pinned {
            None => free.to_vec(),
            Some(p) => {
                let mut full = free.to_vec();
                full.insert(p, 0.0);
                full
            }
        }
    }

    fn run(&self, starts: &[Vec<f64>], budget: &mut usize) -> (Vec<f64>, f64, bool) {
        let mut best: Option<(Vec<f64>, f64, bool)> = None;
        for x0 in starts {
            if *budget == 0 {
                break;
            }
            let nm = NelderMeadOptions { max_evaluations: *budget, f_tol: 1e-8, x_tol: 1e-7, initial_step: 0.02 };
            let m = nelder_mead(|x| objective(self.params, &self.expand(x), self.opts), x0, (-self.opts.bound, self.opts.bound), &nm);
            *budget = budget.saturating_sub(m.evaluations);
            let full = self.expand(&m.x);
            if best.as_ref().map_or(true, |b| m.value < b.1) {
                best = Some((full, m.value, m.converged));
            }
            let spread_ok = objective_spread(self.params, &best.as_ref().unwrap().0, self.opts)
                .map_or(false, |s| s < self.opts.target_spread);
            if spread_ok {
                break;
            }
        }
        best.unwrap_or((vec![0.0; self.params.n_qubits()], f64::INFINITY, false))
    }
}

fn objective_spread(params: &CircuitParams, flux: &[f64], opts: &FluxOptions) -> Result<f64> {
    Ok(device_params(&params.clone().with_flux(flux), opts.method, opts.truncation, &opts.spectrum)?.coupling_spread())
}

/// Sweeps over the free rings, solving `|g_j(flux_j)| = |g_pin|` for each in
/// turn with the others held. Couplings are even in each ring's own flux and
/// move monotonically away from zero, so a root is bracketed by scanning
/// `[0, bound]` for a sign change. Rings whose coupling cannot reach the
/// target keep their flux.
fn equalize_rings(params: &CircuitParams, start: &[f64], pin: usize, opts: &FluxOptions, budget: &mut usize) -> Vec<f64> {
    const SWEEPS: usize = 6;
    const SCAN: usize = 10;
    let n = start.len();
    let mut flux = start.to_vec();
    let evals = std::cell::Cell::new(0usize);
    let couplings = |f: &[f64]| {
        evals.set(evals.get() + 1);
        device_params(&params.clone().with_flux(f), opts.method, opts.truncation, &opts.spectrum).map(|p| p.coupling)
    };
    for _ in 0..SWEEPS {
        for j in (0..n).filter(|&j| j != pin) {
            if evals.get() + SCAN + 40 > *budget {
                break;
            }
            let mismatch = |x: f64| -> Result<f64> {
                let mut f = flux.clone();
                f[j] = x;
                let g = couplings(&f)?;
                Ok(g[j].abs() - g[pin].abs())
            };
            let Ok(at_zero) = mismatch(0.0) else { continue };
            if at_zero == 0.0 {
                continue;
            }
            let grid: Vec<f64> = (1..=SCAN).map(|k| opts.bound * k as f64 / SCAN as f64).collect();
            let mut lo = 0.0;
            let Some(hi) = grid.into_iter().find(|&x| match mismatch(x) {
                Ok(v) if v.signum() != at_zero.signum() => true,
                _ => {
                    lo = x;
                    false
                }
            }) else {
                continue;
            };
            if let Ok(root) = brent_root(&mismatch, lo, hi, 1e-9, 40) {
                flux[j] = root;
            }
        }
        if objective_spread(params, &flux, opts).map_or(true, |s| s < opts.target_spread) {
            break;
        }
    }
    *budget = budget.saturating_sub(evals.get());
    flux
}

/// Minimizes the sample variance of the couplings over the ring fluxes.
///
/// The ring with the strongest coupling at zero flux is held at zero and the
/// other rings are tuned one at a time onto its coupling; if that fails, the
/// weakest ring is pinned instead. If the spread is still above the target,
/// a simplex search with the better pin polishes the result, and a search
/// over all fluxes follows only if that also falls short. Each search starts at zero flux and then from up to
/// `restarts` random points. For ring-symmetric devices the flux sign of each
/// ring is a symmetry, so results are reported with non-negative fluxes.
pub fn optimize_flux(params: &CircuitParams, opts: &FluxOptions) -> Result<FluxResult> {
    params.validate()?;
    let n = params.n_qubits();
    if n < 2 {
        return Err(Error::InvalidArgument("flux optimization needs at least two qubits".into()));
    }
    let zero = device_params(&params.clone().with_flux(&vec![0.0; n]), opts.method, opts.truncation, &opts.spectrum)?;
    let by_size = |a: &usize, b: &usize| zero.coupling[*a].abs().total_cmp(&zero.coupling[*b].abs());
    let strongest = (0..n).max_by(by_size).unwrap();
    let weakest = (0..n).min_by(by_size).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts = |dim: usize| {
        let mut s = vec![vec![0.0; dim]];
        for _ in 0..opts.restarts {
            s.push((0..dim).map(|_| rng.random_range(-opts.bound..opts.bound)).collect());
        }
        s
    };
    let mut budget = opts.max_evaluations;
    let mut pin = strongest;
    let mut flux = equalize_rings(params, &vec![0.0; n], pin, opts, &mut budget);
    let mut value = objective(params, &flux, opts);
    let mut converged = objective_spread(params, &flux, opts)? < opts.target_spread;
    if !converged && weakest != strongest {
        let f2 = equalize_rings(params, &vec![0.0; n], weakest, opts, &mut budget);
        let v2 = objective(params, &f2, opts);
        if v2 < value {
            (pin, flux, value) = (weakest, f2, v2);
            converged = objective_spread(params, &flux, opts)? < opts.target_spread;
        }
    }
    let mut pinned = Some(pin);
    if !converged && budget > 0 {
        let pinned_search = Search { params, opts, pinned: Some(pin) };
        let mut s = starts(n - 1);
        s.insert(0, flux.iter().enumerate().filter(|&(k, _)| k != pin).map(|(_, &f)| f).collect());
        let (f2, v2, c2) = pinned_search.run(&s, &mut budget);
        if v2 < value {
            flux = f2;
            value = v2;
            converged = c2;
        }
    }
    if objective_spread(params, &flux, opts)? >= opts.target_spread && budget > 0 {
        let free = Search { params, opts, pinned: None };
        let (f2, v2, c2) = free.run(&starts(n), &mut budget);
        if v2 < value {
            flux = f2;
            value = v2;
            converged = c2;
            pinned = None;
        }
    }
    if !value.is_finite() {
        return Err(Error::Convergence("flux search found no quantizable operating point".into()));
    }
    if params.is_ring_symmetric() {
        flux.iter_mut().for_each(|f| *f = f.abs());
    }
    let result = device_params(&params.clone().with_flux(&flux), opts.method, opts.truncation, &opts.spectrum)?;
    let spread = result.coupling_spread();
    Ok(FluxResult {
        flux,
        params: result,
        spread,
        evaluations: opts.max_evaluations - budget,
        converged: converged || spread < opts.target_spread,
        pinned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> FluxOptions {
        FluxOptions { truncation: Truncation { qubit: 3, ancilla: 4, theta: 2 }, ..Default::default() }
    }

    #[test]
    fn symmetric_device_stays_at_zero_flux() {
        let p = CircuitParams::symmetric(vec![22.0, 22.0], 19.0, vec![4.0, 4.0], &[10.0, 10.0]);
        let r = optimize_flux(&p, &small()).unwrap();
        assert!(r.flux.iter().all(|f| f.abs() < 1e-6), "{:?}", r.flux);
        assert!(r.spread < 1e-9);
    }

    #[test]
    fn equalizes_mismatched_rings() {
        let p = CircuitParams::two_qubit_reference();
        let r = optimize_flux(&p, &small()).unwrap();
        assert!(r.spread < ghz_to_rad(1e-3), "spread {}", r.spread);
        assert_eq!(r.flux[1], 0.0);
        assert!(r.flux[0] > 0.0 && r.flux[0] < 0.25);
    }

    #[test]
    fn equalizes_rings_whose_coupling_falls_with_flux() {
        let p = CircuitParams::four_qubit_reference();
        let opts = small();
        let r = optimize_flux(&p, &opts).unwrap();
        assert!(r.spread < ghz_to_rad(1e-3), "spread {}", r.spread);
        let zero = device_params(&p, opts.method, opts.truncation, &opts.spectrum).unwrap();
        let pin = r.pinned.unwrap();
        assert_eq!(r.flux[pin], 0.0);
        assert!((r.params.coupling[pin] - zero.coupling[pin]).abs() < 0.05 * zero.coupling[pin].abs());
    }

    #[test]
    fn rejects_single_qubit() {
        let p = CircuitParams::symmetric(vec![22.0], 19.0, vec![4.0], &[10.0]);
        assert!(optimize_flux(&p, &small()).is_err());
    }
}
