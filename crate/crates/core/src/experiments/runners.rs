use rayon::prelude::*;

use super::config::{CircuitBlock, EffectiveBlock, ExperimentConfig};
use super::output::{num, Table};
use crate::circuit::{
    device_params, disorder_ensemble, ghz_to_rad, optimize_flux, rad_to_ghz, DisorderOptions, EffectiveParams, FluxOptions, Method,
    SpectrumOptions,
};
use crate::dynamics::{ghz_factory, pcf_gate, zz_phase_rate, CancellationTone, Device, Noise, ProbeOptions};
use crate::effective::EffectiveModel;
use crate::error::{Error, Result};
use crate::pulses::{cancellation_tone, Envelope};

const NS_PER_US: f64 = 1e3;

fn mhz(rad_per_ns: f64) -> f64 {
    rad_to_ghz(rad_per_ns) * 1e3
}

fn from_mhz(x: f64) -> f64 {
    ghz_to_rad(x * 1e-3)
}

fn circuit_block(config: &ExperimentConfig) -> Result<&CircuitBlock> {
    config.circuit.as_ref().ok_or_else(|| Error::Config("a [circuit] block is required".into()))
}

fn effective_block(config: &ExperimentConfig) -> Result<&EffectiveBlock> {
    config.effective.as_ref().ok_or_else(|| Error::Config("an [effective] block is required".into()))
}

fn noise(config: &ExperimentConfig, on: bool) -> Noise {
    if on {
        Noise::new(config.noise.t1_us * NS_PER_US, config.noise.tphi_us * NS_PER_US)
    } else {
        Noise::none()
    }
}

fn noise_settings(config: &ExperimentConfig) -> Vec<bool> {
    match (config.noise.enabled, config.noise.compare) {
        (true, true) => vec![true, false],
        (on, _) => vec![on],
    }
}

/// Rotating-frame device from an `[effective]` block.
pub fn effective_device(block: &EffectiveBlock, noise: Noise) -> Device {
    let mut d = Device::new(EffectiveModel::rotating(block.n_qubits, from_mhz(block.g_mhz), from_mhz(block.alpha_mhz)), noise);
    if block.n_qubits >= 2 {
        d.zz = from_mhz(block.g12_mhz);
    }
    d
}

fn flux_options(config: &ExperimentConfig, block: &CircuitBlock) -> Result<FluxOptions> {
    Ok(FluxOptions { method: block.method()?, truncation: block.truncation(), seed: config.run.seed, ..FluxOptions::default() })
}

/// Two-qubit rotating-frame device from a `[circuit]` block: fluxes are
/// optimized, then the mean coupling, anharmonicity and `Z_1 Z_2` term are
/// read from the spectrum at the optimum.
pub fn circuit_device(config: &ExperimentConfig, noise: Noise) -> Result<(Device, EffectiveParams)> {
    let block = circuit_block(config)?;
    let params = block.params()?;
    if params.n_qubits() != 2 {
        return Err(Error::Config("cancel-zz on a circuit needs two qubits".into()));
    }
    let opt = optimize_flux(&params, &flux_options(config, block)?)?;
    let p = opt.params;
    let mut d = Device::new(EffectiveModel::rotating(2, p.mean_coupling(), p.ancilla_anharmonicity), noise);
    d.zz = p.zz[0][1];
    Ok((d, p))
}

fn param_columns(n: usize) -> Vec<String> {
    let mut c: Vec<String> = (1..=n).map(|i| format!("omega_{i}_ghz")).collect();
    c.push("omega_p_ghz".into());
    c.push("alpha_p_mhz".into());
    c.extend((1..=n).map(|i| format!("g_{i}_mhz")));
    for i in 1..=n {
        for j in i + 1..=n {
            c.push(format!("g_{i}{j}_mhz"));
        }
    }
    c.extend((1..=n).map(|i| format!("theta_{i}_ghz")));
    c
}

fn param_cells(p: &EffectiveParams) -> Vec<String> {
    let n = p.n_qubits();
    let mut r: Vec<String> = p.qubit_freq.iter().map(|&w| num(rad_to_ghz(w))).collect();
    r.push(num(rad_to_ghz(p.ancilla_freq)));
    r.push(num(mhz(p.ancilla_anharmonicity)));
    r.extend(p.coupling.iter().map(|&g| num(mhz(g))));
    for i in 0..n {
        for j in i + 1..n {
            r.push(num(mhz(p.zz[i][j])));
        }
    }
    r.extend((0..n).map(|i| p.theta_freq.get(i).map_or_else(String::new, |&w| num(rad_to_ghz(w)))));
    r
}

/// Effective parameters over the first ring's flux for each method. Without
/// an explicit method list, exact diagonalization is included only when the
/// truncated space fits under the dimension cap.
pub fn run_spectrum(config: &ExperimentConfig) -> Result<Table> {
    let block = circuit_block(config)?;
    let base = block.params()?;
    let n = base.n_qubits();
    let truncation = block.truncation();
    let opts = SpectrumOptions::default();
    let methods: Vec<Method> = match &config.sweep.methods {
        Some(m) => m.iter().map(|s| s.parse()).collect::<Result<_>>()?,
        None => {
            let dim: usize = truncation.dims(n).iter().product();
            let mut m = vec![Method::Rwa, Method::Sw2];
            if dim <= opts.dim_cap {
                m.push(Method::Exact);
            }
            m
        }
    };
    let points: Vec<(f64, Method)> = config.sweep.flux.iter().flat_map(|&f| methods.iter().map(move |&m| (f, m))).collect();
    let results: Vec<EffectiveParams> = points
        .par_iter()
        .map(|&(f, m)| {
            let mut p = base.clone();
            p.flux[0] = f;
            device_params(&p, m, truncation, &opts)
        })
        .collect::<Result<_>>()?;
    let mut columns = vec!["flux".to_string(), "method".to_string()];
    columns.extend(param_columns(n));
    let mut table = Table::new(columns);
    for ((f, m), p) in points.iter().zip(&results) {
        let mut row = vec![num(*f), m.name().to_string()];
        row.extend(param_cells(p));
        table.push(row)?;
    }
    Ok(table)
}

/// Flux bias that equalizes the couplings, with the parameters there.
pub fn run_optimize_flux(config: &ExperimentConfig) -> Result<Table> {
    let block = circuit_block(config)?;
    let params = block.params()?;
    let n = params.n_qubits();
    let r = optimize_flux(&params, &flux_options(config, block)?)?;
    let mut columns: Vec<String> = (1..=n).map(|i| format!("flux_{i}")).collect();
    columns.extend(param_columns(n));
    columns.extend(["spread_mhz", "evaluations", "converged", "pinned_ring"].map(String::from));
    let mut table = Table::new(columns);
    let mut row: Vec<String> = r.flux.iter().map(|&f| num(f)).collect();
    row.extend(param_cells(&r.params));
    row.push(num(mhz(r.spread)));
    row.push(r.evaluations.to_string());
    row.push(r.converged.to_string());
    row.push(r.pinned.map_or_else(String::new, |k| (k + 1).to_string()));
    table.push(row)?;
    Ok(table)
}

/// Process fidelity and leakage of the flip gate over gate times, schemes
/// and noise settings.
pub fn run_gate(config: &ExperimentConfig) -> Result<Table> {
    let block = effective_block(config)?;
    let mut table = Table::new(["gate_time_ns", "scheme", "noise_on", "process_fidelity", "leakage", "chi"]);
    for scheme in config.pulse.schemes()? {
        for t in config.pulse.gate_time_ns.to_vec() {
            let env = Envelope::pi_pulse(t, config.pulse.taper)?;
            for on in noise_settings(config) {
                let dev = effective_device(block, noise(config, on));
                let r = pcf_gate(&dev, &env, config.pulse.phase, scheme, config.run.dt_ns)?;
                table.push(vec![num(t), scheme.to_string(), on.to_string(), num(r.process_fidelity), num(r.leakage), num(r.chi)])?;
            }
        }
    }
    Ok(table)
}

/// GHZ-state fidelity of the two-flip phase gate applied to `|+>^4 |0_P>`.
/// `pulse.gate_time_ns` is the length of each flip.
pub fn run_ghz(config: &ExperimentConfig) -> Result<Table> {
    let block = effective_block(config)?;
    let mut table = Table::new(["total_time_ns", "gate_time_ns", "scheme", "noise_on", "state_fidelity", "chi"]);
    for scheme in config.pulse.schemes()? {
        for t in config.pulse.gate_time_ns.to_vec() {
            let env = Envelope::pi_pulse(t, config.pulse.taper)?;
            for on in noise_settings(config) {
                let dev = effective_device(block, noise(config, on));
                let r = ghz_factory(&dev, &env, scheme, config.run.dt_ns)?;
                table.push(vec![num(r.total_time), num(t), scheme.to_string(), on.to_string(), num(r.fidelity), num(r.chi)])?;
            }
        }
    }
    Ok(table)
}

/// Coupling statistics over the flux sweep (`summary` rows) and, when
/// retuning, the spread each sample reaches after flux optimization
/// (`sample` rows).
pub fn run_disorder(config: &ExperimentConfig) -> Result<Table> {
    let block = circuit_block(config)?;
    let params = block.params()?;
    let n = params.n_qubits();
    let opts = DisorderOptions {
        sigma_rel: config.disorder.sigma_rel,
        samples: config.disorder.samples,
        seed: config.run.seed,
        flux_sweep: config.sweep.flux.clone(),
        method: block.method()?,
        truncation: block.truncation(),
        spectrum: SpectrumOptions::default(),
        retune: if config.disorder.retune { Some(flux_options(config, block)?) } else { None },
    };
    let res = disorder_ensemble(&params, &opts)?;
    let mut columns = vec!["record".to_string(), "flux".to_string()];
    for i in 1..=n {
        columns.push(format!("mean_g_{i}_mhz"));
        columns.push(format!("std_g_{i}_mhz"));
    }
    columns.extend(["sample_id", "redraws", "retuned_spread_mhz"].map(String::from));
    columns.extend((1..=n).map(|i| format!("retuned_flux_{i}")));
    let width = columns.len();
    let mut table = Table::new(columns);
    for s in &res.summary {
        let mut row = vec!["summary".to_string(), num(s.flux)];
        for (m, sd) in s.mean_g.iter().zip(&s.std_g) {
            row.push(num(mhz(*m)));
            row.push(num(mhz(*sd)));
        }
        row.resize(width, String::new());
        table.push(row)?;
    }
    for s in &res.samples {
        let mut row = vec!["sample".to_string(), String::new()];
        row.resize(2 + 2 * n, String::new());
        row.push(s.id.to_string());
        row.push(s.redraws.to_string());
        match &s.retune {
            Some(r) => {
                row.push(num(mhz(r.spread)));
                row.extend(r.flux.iter().map(|&f| num(f)));
            }
            None => row.resize(width, String::new()),
        }
        table.push(row)?;
    }
    Ok(table)
}

/// Effective `Z_1 Z_2` rate over a scan of cancellation-tone amplitudes,
/// followed by the calibrated optimum.
pub fn run_cancel_zz(config: &ExperimentConfig) -> Result<Table> {
    let device = match &config.effective {
        Some(b) => effective_device(b, Noise::none()),
        None => circuit_device(config, Noise::none())?.0,
    };
    let probe = ProbeOptions { window: config.zz.window_ns, ramp: config.zz.ramp_ns, dt: config.run.dt_ns };
    let best = cancellation_tone(&device, &probe)?;
    let k = config.zz.scan_points;
    let amplitudes: Vec<f64> = (0..k).map(|i| config.zz.scan_max * best.tone.amplitude * i as f64 / (k - 1) as f64).collect();
    let scan = amplitudes
        .par_iter()
        .map(|&a| zz_phase_rate(&device, Some(&CancellationTone { amplitude: a, detuning: best.tone.detuning }), &probe))
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(["record", "amplitude_mhz", "detuning_mhz", "g12_eff_mhz", "leakage", "g12_input_mhz"]);
    let input = num(mhz(device.zz));
    for (a, p) in amplitudes.iter().zip(&scan) {
        table.push(vec!["scan".into(), num(mhz(*a)), num(mhz(best.tone.detuning)), num(mhz(p.rate)), num(p.leakage), input.clone()])?;
    }
    let at_best = zz_phase_rate(&device, Some(&best.tone), &probe)?;
    table.push(vec![
        "optimum".into(),
        num(mhz(best.tone.amplitude)),
        num(mhz(best.tone.detuning)),
        num(mhz(best.residual)),
        num(at_best.leakage),
        input,
    ])?;
    Ok(table)
}
