//! Headline acceptance checks. Each criterion prints one PASS or FAIL line;
//! the process exits nonzero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use paritysim::circuit::{
    device_params, disorder_ensemble, ghz_to_rad, optimize_flux, potential::potential_value, quantize, rad_to_ghz, retained_labels,
    spectrum, CircuitParams, DisorderOptions, FluxOptions, Method, SpectrumOptions, Truncation,
};
use paritysim::dynamics::{
    collapse_operators, device_model, ghz_factory, gksl_evolve, pcf_gate, Device, LindbladModel, Noise, ProbeOptions, SimOptions,
    TRACE_TOLERANCE,
};
use paritysim::effective::{
    modified_pcf_unitary, on_qubit, parity_kraus, pcf_unitary, pcp_unitary, readout_circuit_qubit1, EffectiveModel,
};
use paritysim::pulses::{cancellation_tone, pcf_program_2q, Envelope, Scheme};
use paritysim::qcore::{eig_hermitian, max_abs_diff, pauli_z, unitarity_deviation, CMatrix, CVector, HilbertSpace, ModeSpec, StateVector, C64};

/// Step used for every driven simulation below.
const DT: f64 = 0.005;

fn mhz(w: f64) -> f64 {
    rad_to_ghz(w) * 1e3
}

fn noisy(n: usize, g_mhz: f64) -> Device {
    Device::new(EffectiveModel::rotating(n, ghz_to_rad(g_mhz * 1e-3), ghz_to_rad(-0.1)), Noise::new(40_000.0, 40_000.0))
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within_rel(x: f64, target: f64, rel: f64) -> bool {
    (x - target).abs() <= rel * target.abs()
}

fn two_qubit_spectroscopy() -> Outcome {
    let start = Instant::now();
    let r = optimize_flux(&CircuitParams::two_qubit_reference(), &FluxOptions::default()).expect("flux optimization");
    let p = r.params.to_ghz();
    let g: Vec<f64> = p.coupling.iter().map(|x| x.abs() * 1e3).collect();
    let checks = [
        ("g", g.iter().all(|&x| within_rel(x, 280.0, 0.05))),
        ("qubits", p.qubit_freq.iter().all(|w| (6.9..=7.5).contains(w))),
        ("ancilla", within_rel(p.ancilla_freq, 9.8, 0.02)),
        ("theta", p.theta_freq.len() == 2 && p.theta_freq.iter().all(|w| (19.0..=21.0).contains(w))),
        ("flux1", (r.flux[0].abs() - 0.06).abs() <= 0.02),
        ("flux2", r.flux[1].abs() <= 0.005),
        ("runtime", start.elapsed().as_secs_f64() < 60.0),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    outcome(
        failed.is_empty(),
        format!(
            "flux = ({:.4}, {:.4}), |g| = {:.1?} MHz, qubits = {:.3?} GHz, ancilla = {:.3} GHz, theta = {:.2?} GHz, {:.1} s; failing: {failed:?}",
            r.flux[0],
            r.flux[1],
            g,
            p.qubit_freq,
            p.ancilla_freq,
            p.theta_freq,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn four_qubit_spectroscopy() -> Outcome {
    let start = Instant::now();
    let r = optimize_flux(&CircuitParams::four_qubit_reference(), &FluxOptions::default()).expect("flux optimization");
    let p = r.params.to_ghz();
    let g: Vec<f64> = p.coupling.iter().map(|x| x.abs() * 1e3).collect();
    let checks = [
        ("g", g.iter().all(|&x| within_rel(x, 214.0, 0.05))),
        ("qubits", p.qubit_freq.iter().all(|w| (8.7..=9.7).contains(w))),
        ("ancilla", within_rel(p.ancilla_freq, 15.0, 0.02)),
        ("runtime", start.elapsed().as_secs_f64() < 300.0),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    outcome(
        failed.is_empty(),
        format!(
            "flux = {:.4?}, |g| = {:.1?} MHz, qubits = {:.3?} GHz, ancilla = {:.3} GHz, {:.1} s; failing: {failed:?}",
            r.flux,
            g,
            p.qubit_freq,
            p.ancilla_freq,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn method_ordering() -> Outcome {
    let opts = SpectrumOptions::default();
    let mut ordered = true;
    let mut worst_rel: f64 = 0.0;
    for k in 0..=10 {
        let f = 0.01 * k as f64;
        let params = CircuitParams::two_qubit_reference().with_flux(&[f, 0.0]);
        let at = |m| device_params(&params, m, Truncation::default(), &opts).expect("spectrum");
        let (rwa, sw2, exact) = (at(Method::Rwa), at(Method::Sw2), at(Method::Exact));
        for i in 0..2 {
            let (r, s, e) = (rwa.coupling[i], sw2.coupling[i], exact.coupling[i]);
            ordered &= (s - e).abs() < (r - e).abs();
            worst_rel = worst_rel.max((s - e).abs() / e.abs());
        }
    }
    outcome(
        ordered && worst_rel < 0.10,
        format!("sw2 closer than rwa at every point: {ordered}; largest |g_sw2 - g_exact| / |g_exact| = {worst_rel:.4}"),
    )
}

fn two_qubit_flip() -> Outcome {
    let dev = noisy(2, -250.0);
    let mut lines = Vec::new();
    let mut pass = false;
    for t in [20.0, 22.5, 25.0, 27.5, 30.0] {
        let env = Envelope::pi_pulse(t, 0.5).unwrap();
        let adv = pcf_gate(&dev, &env, 0.0, Scheme::Advanced, DT).expect("advanced gate").process_fidelity;
        let basic = pcf_gate(&dev, &env, 0.0, Scheme::Basic, DT).expect("basic gate").process_fidelity;
        pass |= adv >= 0.99 && 1.0 - basic > 1.0 - adv;
        lines.push(format!("T = {t}: advanced {adv:.5}, basic {basic:.5}"));
    }
    outcome(pass, lines.join("; "))
}

fn four_qubit_flip() -> Outcome {
    let dev = noisy(4, -200.0);
    let mut lines = Vec::new();
    for t in [30.0, 35.0, 40.0, 25.0] {
        let start = Instant::now();
        let env = Envelope::pi_pulse(t, 0.5).unwrap();
        let f = pcf_gate(&dev, &env, 0.0, Scheme::Advanced, DT).expect("four-qubit gate").process_fidelity;
        lines.push(format!("T = {t}: {f:.5} ({:.0} s)", start.elapsed().as_secs_f64()));
        if f >= 0.99 {
            return outcome(true, lines.join("; "));
        }
    }
    outcome(false, lines.join("; "))
}

fn ghz_factory_fidelity() -> Outcome {
    let dev = noisy(4, -200.0);
    let mut lines = Vec::new();
    for t in [37.5, 35.0, 40.0, 32.5, 42.5, 30.0, 45.0] {
        let env = Envelope::pi_pulse(t, 0.5).unwrap();
        let r = ghz_factory(&dev, &env, Scheme::Advanced, DT).expect("ghz sequence");
        lines.push(format!("total {} ns: {:.5}", r.total_time, r.fidelity));
        if r.fidelity >= 0.99 {
            return outcome(true, lines.join("; "));
        }
    }
    outcome(false, lines.join("; "))
}

fn disorder() -> Outcome {
    let ideal = CircuitParams::two_qubit_reference();
    let opts = DisorderOptions { seed: 2024, ..DisorderOptions::default() };
    let res = disorder_ensemble(&ideal, &opts).expect("ensemble");
    let mut worst: f64 = 0.0;
    for (s, base) in res.summary.iter().zip(&res.ideal) {
        for (m, g) in s.mean_g.iter().zip(&base.coupling) {
            worst = worst.max((m - g).abs() / g.abs());
        }
    }
    let frac = res.retunable_fraction(ghz_to_rad(1e-3));
    outcome(
        res.samples.len() == 200 && worst < 0.15 && frac >= 0.95,
        format!("{} samples, largest relative shift of the mean coupling {worst:.4}, retunable fraction {frac:.3}", res.samples.len()),
    )
}

fn zz_cancellation() -> Outcome {
    let r = optimize_flux(&CircuitParams::two_qubit_reference(), &FluxOptions::default()).expect("flux optimization");
    let mut dev = Device::new(EffectiveModel::rotating(2, r.params.mean_coupling(), r.params.ancilla_anharmonicity), Noise::none());
    dev.zz = r.params.zz[0][1];
    let c = cancellation_tone(&dev, &ProbeOptions::default()).expect("cancellation");
    let ratio = c.undriven.abs() / c.residual.abs();
    outcome(
        ratio >= 10.0,
        format!(
            "g = {:.1} MHz, g12 = {:.4} MHz, tone {:.2} MHz at {:+.1} MHz, residual {:.2e} MHz, reduction {ratio:.3e}x",
            mhz(dev.model.coupling),
            mhz(c.undriven),
            mhz(c.tone.amplitude),
            mhz(c.tone.detuning),
            mhz(c.residual)
        ),
    )
}

fn z_product(n: usize) -> CMatrix {
    (0..n).fold(CMatrix::identity(1 << n, 1 << n), |acc, i| acc * on_qubit(n, i, &pauli_z()).unwrap().matrix)
}

fn property_suite() -> Outcome {
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
    };

    let mut gates = vec![readout_circuit_qubit1(2).unwrap().matrix, readout_circuit_qubit1(4).unwrap().matrix];
    for n in [2, 4] {
        gates.push(pcf_unitary(n, 0.37).unwrap().matrix);
        gates.push(pcp_unitary(n, FRAC_PI_2).unwrap().matrix);
    }
    gates.push(modified_pcf_unitary(4, 0.2, -1.1, 0.05).unwrap().matrix);
    check("unitarity", gates.iter().all(|u| unitarity_deviation(u) < 1e-12));

    for n in [2, 4] {
        let [k0, k1] = parity_kraus(n).unwrap();
        let s = k0.matrix.adjoint() * &k0.matrix + k1.matrix.adjoint() * &k1.matrix;
        let ground = CMatrix::from_diagonal(&CVector::from_fn(2 << n, |k, _| C64::from(if k % 2 == 0 { 1.0 } else { 0.0 })));
        check("kraus completeness", s == ground);
    }

    for n in [2, 4] {
        let u = readout_circuit_qubit1(n).unwrap().matrix;
        let z1 = on_qubit(n, 0, &pauli_z()).unwrap().matrix;
        check("readout identity", max_abs_diff(&(u.adjoint() * z1 * &u), &z_product(n)) < 1e-12);
    }

    let dev = noisy(2, -250.0);
    let program = pcf_program_2q(&Envelope::pi_pulse(25.0, 0.5).unwrap(), 0.3, dev.model.coupling, dev.model.anharmonicity, Scheme::Advanced, 0.01)
        .unwrap();
    let model = device_model(&dev, &program).unwrap();
    let space = dev.space().unwrap();
    let psi = StateVector::new(space.clone(), CVector::from_fn(12, |k, _| C64::new(1.0, 0.2 * k as f64))).unwrap().normalized();
    let out = gksl_evolve(&psi.projector(), &model, &SimOptions::default()).unwrap();
    let (vals, _) = eig_hermitian(&out.state.matrix).unwrap();
    check("trace drift", out.trace_drift <= TRACE_TOLERANCE);
    check("positivity", vals[0] >= -1e-7);

    let mode = HilbertSpace::compose(vec![ModeSpec::new("m", 3)]).unwrap();
    let t1 = 25.0;
    let decay = LindbladModel::constant(mode.clone(), CMatrix::zeros(3, 3), collapse_operators(&mode, &Noise { t1: Some(t1), t_phi: None }).unwrap(), 10.0, 0.01)
        .unwrap();
    let excited = StateVector::basis(mode.clone(), 1).projector();
    let pops = gksl_evolve(&excited, &decay, &SimOptions { store_populations: true, ..Default::default() }).unwrap().populations.unwrap();
    check("single-mode decay", pops.iter().all(|(t, p)| (p[1] - (-t / t1).exp()).abs() < 1e-6));

    let pair = HilbertSpace::compose(vec![ModeSpec::new("a", 3), ModeSpec::qubit("b")]).unwrap();
    let h = CMatrix::from_fn(6, 6, |r, c| C64::new(0.05 * (r * c) as f64 - 0.1, 0.03 * (c as f64 - r as f64)));
    let h = (&h + h.adjoint()) * C64::from(0.5);
    let t = 4.0;
    let closed = LindbladModel::constant(pair.clone(), h.clone(), vec![], t, 0.01).unwrap();
    let phi = StateVector::new(pair.clone(), CVector::from_fn(6, |k, _| C64::new(0.3 + k as f64, 1.0 - 0.4 * k as f64))).unwrap().normalized();
    let rho = phi.projector();
    let got = gksl_evolve(&rho, &closed, &SimOptions::default()).unwrap().state.matrix;
    let u = (&h * C64::new(0.0, -t)).exp();
    check("matrix exponential", max_abs_diff(&got, &(&u * &rho.matrix * u.adjoint())) < 1e-8);

    let params = CircuitParams::two_qubit_reference();
    let bare = quantize(&params, Truncation::default()).unwrap().with_offdiagonal_scale(0.0);
    let labels = retained_labels(2);
    let opts = SpectrumOptions::default();
    let s = spectrum(&bare, Method::Sw2, &labels, &opts).unwrap();
    let e = spectrum(&bare, Method::Exact, &labels, &opts).unwrap();
    check("sw2 equals exact without H_X", labels.iter().all(|l| (s.energies[l] - e.energies[l]).abs() < 1e-9 * s.energies[l].abs().max(1.0)));

    let shifted = CircuitParams::two_qubit_reference().with_flux(&[0.06, -0.13]);
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let x: Vec<f64> = (0..5).map(|j| PI * (((k * 7 + j * 3) % 23) as f64 / 11.5 - 1.0)).collect();
        let closed_form: f64 = (0..2)
            .map(|i| {
                let e = ghz_to_rad(shifted.junction_energy[i][0]);
                let q = PI * shifted.flux[i] / 2.0;
                let (a, p, th) = (x[i], x[2], x[3 + i]);
                -4.0 * e * (a.cos() * p.cos() * th.cos() * q.cos() - a.sin() * p.sin() * th.sin() * q.sin())
            })
            .sum();
        let v = potential_value(&shifted, &x);
        worst = worst.max((v - closed_form).abs() / v.abs().max(1.0));
    }
    check("symmetric potential reduction", worst < 1e-12);

    let pass = failures.is_empty();
    outcome(pass, if pass { "all properties hold".into() } else { format!("violated: {failures:?}") })
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("two-qubit circuit spectroscopy", two_qubit_spectroscopy),
        ("four-qubit circuit spectroscopy", four_qubit_spectroscopy),
        ("method ordering", method_ordering),
        ("two-qubit flip fidelity", two_qubit_flip),
        ("four-qubit flip fidelity", four_qubit_flip),
        ("GHZ factory", ghz_factory_fidelity),
        ("disorder ensemble", disorder),
        ("ZZ cancellation", zz_cancellation),
        ("property suite", property_suite),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let id = k + 1;
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id} [{name}]: {tag} ({:.1} s) {}", start.elapsed().as_secs_f64(), o.detail);
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
