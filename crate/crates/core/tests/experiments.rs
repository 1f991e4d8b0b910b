use std::f64::consts::{FRAC_PI_2, TAU};

use paritysim::circuit::{effective_params, quantize, retained_labels, spectrum, CircuitParams, Method, SpectrumOptions, Truncation};
use paritysim::dynamics::{ghz_factory, Device, Noise};
use paritysim::effective::{ghz_target, pcp_unitary, plus_state, EffectiveModel};
use paritysim::experiments::{parse, run, run_report, ExperimentConfig, Table};
use paritysim::pulses::{Envelope, Scheme};

const CIRCUIT_2Q: &str = r#"
[circuit]
qubit_capacitance_ff = [22.0, 22.0]
ancilla_capacitance_ff = 19.0
junction_capacitance_ff = [4.0, 4.0]
junction_energy_ghz = [[10.0, 10.0, 10.0, 10.0], [11.0, 11.0, 11.0, 11.0]]
truncation = { qubit = 3, ancilla = 4, theta = 2 }
"#;

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_toml(text).unwrap()
}

fn column<'a>(t: &'a Table, name: &str) -> Vec<&'a str> {
    let k = t.column(name).unwrap();
    t.rows.iter().map(|r| r[k].as_str()).collect()
}

#[test]
fn uncoupled_modes_give_zero_coupling() {
    let h = quantize(&CircuitParams::two_qubit_reference(), Truncation::default()).unwrap().without_cross_terms();
    let s = spectrum(&h, Method::Sw2, &retained_labels(2), &SpectrumOptions::default()).unwrap();
    let p = effective_params(&s).unwrap();
    assert!(p.coupling.iter().all(|g| g.abs() < 1e-9), "{:?}", p.coupling);
    assert!(p.zz[0][1].abs() < 1e-9);
}

#[test]
fn spectrum_rows_cover_every_method_and_flux() {
    let t = run(&config(&format!("experiment = \"spectrum\"\n{CIRCUIT_2Q}\n[sweep]\nflux = [0.0, 0.05]\n"))).unwrap();
    assert_eq!(column(&t, "method"), vec!["rwa", "sw2", "exact", "rwa", "sw2", "exact"]);
    assert_eq!(t.values("flux").unwrap(), vec![0.0, 0.0, 0.0, 0.05, 0.05, 0.05]);
    assert!(t.values("g_1_mhz").unwrap().iter().all(|g| *g < -100.0));
}

#[test]
fn noise_never_helps_the_gate() {
    let t = run(&config(
        r#"
experiment = "gate"
[effective]
n_qubits = 2
g_mhz = -250.0
alpha_mhz = -100.0
[noise]
t1_us = 10.0
tphi_us = 10.0
compare = true
[pulse]
gate_time_ns = [15.0, 25.0, 35.0]
scheme = ["basic", "advanced"]
[run]
dt_ns = 0.02
"#,
    ))
    .unwrap();
    let f = t.values("process_fidelity").unwrap();
    let noise = column(&t, "noise_on");
    assert_eq!(f.len(), 12);
    for k in (0..12).step_by(2) {
        assert_eq!((noise[k], noise[k + 1]), ("true", "false"));
        assert!(f[k + 1] >= f[k], "row {k}: {} < {}", f[k + 1], f[k]);
    }
}

#[test]
fn ideal_phase_gate_prepares_ghz() {
    let u = pcp_unitary(4, FRAC_PI_2).unwrap();
    let out = &u.matrix * &plus_state(4).unwrap().data;
    let overlap = (ghz_target(4).unwrap().data.adjoint() * out)[0].norm_sqr();
    assert!((overlap - 1.0).abs() < 1e-12, "{overlap}");
}

#[test]
fn ghz_fidelity_drops_with_shorter_t1() {
    let env = Envelope::pi_pulse(30.0, 0.5).unwrap();
    let model = EffectiveModel::rotating(4, -TAU * 0.2, -TAU * 0.1);
    let f = |t1: f64| ghz_factory(&Device::new(model.clone(), Noise::new(t1, 40_000.0)), &env, Scheme::Advanced, 0.02).unwrap().fidelity;
    let (long, short) = (f(40_000.0), f(4_000.0));
    assert!(short < long, "{short} vs {long}");
}

fn disorder_config(sigma: f64) -> ExperimentConfig {
    config(&format!(
        "experiment = \"disorder\"\n{CIRCUIT_2Q}\n[sweep]\nflux = [0.0, 0.05, 0.1]\n[disorder]\nsigma_rel = {sigma}\nsamples = 6\n[run]\nseed = 99\n"
    ))
}

#[test]
fn zero_disorder_has_no_spread() {
    let t = run(&disorder_config(0.0)).unwrap();
    for name in ["std_g_1_mhz", "std_g_2_mhz"] {
        let v = t.values(name).unwrap();
        assert_eq!(v.len(), 3);
        assert!(v.iter().all(|&s| s == 0.0), "{name}: {v:?}");
    }
    assert_eq!(column(&t, "record").iter().filter(|r| **r == "sample").count(), 6);
}

#[test]
fn seeded_reports_are_byte_identical() {
    let c = disorder_config(0.1);
    let a = run_report(&c).unwrap();
    let b = run_report(&c).unwrap();
    assert_eq!(a, b);
    let mut other = c.clone();
    other.run.seed = 100;
    let (_, ta) = parse(&a).unwrap();
    let (_, tc) = parse(&run_report(&other).unwrap()).unwrap();
    assert_ne!(ta.rows, tc.rows);
}

#[test]
fn cancellation_scan_brackets_the_optimum() {
    let t = run(&config(
        r#"
experiment = "cancel-zz"
[effective]
n_qubits = 2
g_mhz = -250.0
alpha_mhz = -100.0
g12_mhz = 1.2
[zz]
window_ns = 100.0
ramp_ns = 10.0
scan_points = 7
scan_max = 1.5
[run]
dt_ns = 0.02
"#,
    ))
    .unwrap();
    let records = column(&t, "record");
    let g12 = t.values("g12_eff_mhz").unwrap();
    let amp = t.values("amplitude_mhz").unwrap();
    assert_eq!(records.last(), Some(&"optimum"));
    assert!((g12[0] - 1.2).abs() < 0.02 * 1.2, "{}", g12[0]);
    let best = *g12.last().unwrap();
    assert!(best.abs() <= 0.1 * 1.2);
    let scan = &g12[..g12.len() - 1];
    assert!(scan.windows(2).all(|w| w[1] < w[0]), "{scan:?}");
    assert!(scan[0] > 0.0 && *scan.last().unwrap() < 0.0);
    let opt = *amp.last().unwrap();
    let k = amp.iter().position(|&a| a > opt).unwrap();
    assert!(scan[k - 1] > 0.0 && scan[k] < 0.0);
}
