//! TOML experiment configuration.

use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitParams, Method, Truncation};
use crate::error::{Error, Result};
use crate::pulses::Scheme;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Spectrum,
    OptimizeFlux,
    Gate,
    Ghz,
    Disorder,
    CancelZz,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Spectrum => "spectrum",
            Experiment::OptimizeFlux => "optimize-flux",
            Experiment::Gate => "gate",
            Experiment::Ghz => "ghz",
            Experiment::Disorder => "disorder",
            Experiment::CancelZz => "cancel-zz",
        }
    }
}

impl std::str::FromStr for Experiment {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [Experiment::Spectrum, Experiment::OptimizeFlux, Experiment::Gate, Experiment::Ghz, Experiment::Disorder, Experiment::CancelZz]
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

/// A scalar or a list of scalars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationBlock {
    pub qubit: usize,
    pub ancilla: usize,
    pub theta: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitBlock {
    pub qubit_capacitance_ff: Vec<f64>,
    pub ancilla_capacitance_ff: f64,
    pub junction_capacitance_ff: Vec<f64>,
    /// Four junction energies per ring, GHz.
    pub junction_energy_ghz: Vec<[f64; 4]>,
    #[serde(default)]
    pub flux: Option<Vec<f64>>,
    #[serde(default)]
    pub truncation: Option<TruncationBlock>,
    /// Method used by the optimizer, the disorder sweep and coupling extraction.
    #[serde(default = "default_method")]
    pub method: String,
}

fn default_method() -> String {
    "sw2".into()
}

impl CircuitBlock {
    pub fn params(&self) -> Result<CircuitParams> {
        let n = self.junction_energy_ghz.len();
        let p = CircuitParams {
            qubit_capacitance: self.qubit_capacitance_ff.clone(),
            ancilla_capacitance: self.ancilla_capacitance_ff,
            junction_capacitance: self.junction_capacitance_ff.clone(),
            junction_energy: self.junction_energy_ghz.clone(),
            flux: self.flux.clone().unwrap_or_else(|| vec![0.0; n]),
        };
        p.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(p)
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation.map_or_else(Truncation::default, |t| Truncation { qubit: t.qubit, ancilla: t.ancilla, theta: t.theta })
    }

    pub fn method(&self) -> Result<Method> {
        self.method.parse().map_err(|e: Error| Error::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectiveBlock {
    pub n_qubits: usize,
    pub g_mhz: f64,
    pub alpha_mhz: f64,
    /// Residual `Z_1 Z_2` coefficient, MHz.
    #[serde(default)]
    pub g12_mhz: f64,
    /// Lab-frame frequencies; informational, the simulation runs in the rotating frame.
    #[serde(default)]
    pub qubit_ghz: Option<Vec<f64>>,
    #[serde(default)]
    pub ancilla_ghz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseBlock {
    #[serde(default = "yes")]
    pub enabled: bool,
    #[serde(default = "forty")]
    pub t1_us: f64,
    #[serde(default = "forty")]
    pub tphi_us: f64,
    /// Also emit noiseless rows.
    #[serde(default)]
    pub compare: bool,
}

fn yes() -> bool {
    true
}

fn forty() -> f64 {
    40.0
}

impl Default for NoiseBlock {
    fn default() -> Self {
        Self { enabled: true, t1_us: 40.0, tphi_us: 40.0, compare: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseBlock {
    #[serde(default = "tukey")]
    pub shape: String,
    #[serde(default = "half")]
    pub taper: f64,
    #[serde(default = "default_gate_time")]
    pub gate_time_ns: OneOrMany<f64>,
    #[serde(default)]
    pub phase: f64,
    #[serde(default = "default_scheme")]
    pub scheme: OneOrMany<String>,
}

fn tukey() -> String {
    "tukey".into()
}

fn half() -> f64 {
    0.5
}

fn default_gate_time() -> OneOrMany<f64> {
    OneOrMany::One(25.0)
}

fn default_scheme() -> OneOrMany<String> {
    OneOrMany::One("advanced".into())
}

impl Default for PulseBlock {
    fn default() -> Self {
        Self { shape: tukey(), taper: 0.5, gate_time_ns: default_gate_time(), phase: 0.0, scheme: default_scheme() }
    }
}

impl PulseBlock {
    pub fn schemes(&self) -> Result<Vec<Scheme>> {
        self.scheme.to_vec().iter().map(|s| s.parse().map_err(|e: Error| Error::Config(e.to_string()))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    /// Values of the first ring's flux, in flux quanta.
    #[serde(default = "default_flux_sweep")]
    pub flux: Vec<f64>,
    /// Spectrum methods; absent means rwa, sw2, and exact where feasible.
    #[serde(default)]
    pub methods: Option<Vec<String>>,
}

fn default_flux_sweep() -> Vec<f64> {
    (0..=10).map(|k| 0.01 * k as f64).collect()
}

impl Default for SweepBlock {
    fn default() -> Self {
        Self { flux: default_flux_sweep(), methods: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderBlock {
    #[serde(default = "tenth")]
    pub sigma_rel: f64,
    #[serde(default = "two_hundred")]
    pub samples: usize,
    #[serde(default = "yes")]
    pub retune: bool,
}

fn tenth() -> f64 {
    0.1
}

fn two_hundred() -> usize {
    200
}

impl Default for DisorderBlock {
    fn default() -> Self {
        Self { sigma_rel: 0.1, samples: 200, retune: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZzBlock {
    #[serde(default = "two_hundred_f")]
    pub window_ns: f64,
    #[serde(default = "twenty")]
    pub ramp_ns: f64,
    /// Amplitudes in the scan, from zero to `scan_max` times the calibrated one.
    #[serde(default = "eleven")]
    pub scan_points: usize,
    #[serde(default = "one_and_half")]
    pub scan_max: f64,
}

fn two_hundred_f() -> f64 {
    200.0
}

fn twenty() -> f64 {
    20.0
}

fn eleven() -> usize {
    11
}

fn one_and_half() -> f64 {
    1.5
}

impl Default for ZzBlock {
    fn default() -> Self {
        Self { window_ns: 200.0, ramp_ns: 20.0, scan_points: 11, scan_max: 1.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunBlock {
    #[serde(default = "hundredth")]
    pub dt_ns: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<String>,
}

fn hundredth() -> f64 {
    0.01
}

impl Default for RunBlock {
    fn default() -> Self {
        Self { dt_ns: 0.01, seed: 0, output: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit: Option<CircuitBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effective: Option<EffectiveBlock>,
    #[serde(default)]
    pub noise: NoiseBlock,
    #[serde(default)]
    pub pulse: PulseBlock,
    #[serde(default)]
    pub sweep: SweepBlock,
    #[serde(default)]
    pub disorder: DisorderBlock,
    #[serde(default)]
    pub zz: ZzBlock,
    #[serde(default)]
    pub run: RunBlock,
}

impl ExperimentConfig {
    /// Parses and validates a TOML document.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// The resolved configuration, with every default filled in.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        match (&self.circuit, &self.effective) {
            (Some(_), Some(_)) => return bad("give either a [circuit] or an [effective] block, not both"),
            (None, None) => return bad("a [circuit] or an [effective] block is required"),
            _ => {}
        }
        let needs_circuit = matches!(self.experiment, Experiment::Spectrum | Experiment::OptimizeFlux | Experiment::Disorder);
        let needs_effective = matches!(self.experiment, Experiment::Gate | Experiment::Ghz);
        if needs_circuit && self.circuit.is_none() {
            return Err(Error::Config(format!("`{}` needs a [circuit] block", self.experiment.name())));
        }
        if needs_effective && self.effective.is_none() {
            return Err(Error::Config(format!("`{}` needs an [effective] block", self.experiment.name())));
        }
        if let Some(c) = &self.circuit {
            c.params()?;
            c.method()?;
        }
        if let Some(e) = &self.effective {
            if !(1..=6).contains(&e.n_qubits) {
                return bad("effective.n_qubits must be between 1 and 6");
            }
            if e.g_mhz == 0.0 || e.alpha_mhz == 0.0 {
                return bad("effective.g_mhz and effective.alpha_mhz must be nonzero");
            }
            match self.experiment {
                Experiment::Gate if !matches!(e.n_qubits, 2 | 4) => return bad("gate runs need 2 or 4 qubits"),
                Experiment::Ghz if e.n_qubits != 4 => return bad("ghz runs need 4 qubits"),
                Experiment::CancelZz if e.n_qubits != 2 => return bad("cancel-zz runs need 2 qubits"),
                _ => {}
            }
        }
        if self.pulse.shape != "tukey" {
            return bad("pulse.shape must be `tukey`");
        }
        if !(0.0..=1.0).contains(&self.pulse.taper) {
            return bad("pulse.taper must lie in [0, 1]");
        }
        if self.pulse.gate_time_ns.to_vec().iter().any(|&t| !(t > 0.0)) {
            return bad("pulse.gate_time_ns must be positive");
        }
        self.pulse.schemes()?;
        if !(self.run.dt_ns > 0.0) {
            return bad("run.dt_ns must be positive");
        }
        if !(self.noise.t1_us > 0.0 && self.noise.tphi_us > 0.0) {
            return bad("noise times must be positive");
        }
        if self.sweep.flux.is_empty() {
            return bad("sweep.flux needs at least one value");
        }
        if let Some(m) = &self.sweep.methods {
            for s in m {
                s.parse::<Method>().map_err(|e| Error::Config(e.to_string()))?;
            }
        }
        if !(self.disorder.sigma_rel >= 0.0) || self.disorder.samples == 0 {
            return bad("disorder needs sigma_rel >= 0 and at least one sample");
        }
        if !(self.zz.window_ns > 0.0 && self.zz.ramp_ns >= 0.0 && self.zz.scan_points >= 2 && self.zz.scan_max > 0.0) {
            return bad("zz needs a positive window, non-negative ramp, scan_points >= 2 and scan_max > 0");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GATE: &str = r#"
experiment = "gate"

[effective]
n_qubits = 2
g_mhz = -250
alpha_mhz = -100

[pulse]
gate_time_ns = [20, 25]
scheme = ["basic", "advanced"]
"#;

    #[test]
    fn parses_and_fills_defaults() {
        let c = ExperimentConfig::from_toml(GATE).unwrap();
        assert_eq!(c.experiment, Experiment::Gate);
        assert_eq!(c.pulse.gate_time_ns.to_vec(), vec![20.0, 25.0]);
        assert_eq!(c.pulse.schemes().unwrap(), vec![Scheme::Basic, Scheme::Advanced]);
        assert_eq!(c.run.dt_ns, 0.01);
        assert!(c.noise.enabled);
        let again = ExperimentConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = GATE.replace("alpha_mhz = -100", "alpha_mhz = -100\nalpha_ghz = 1");
        assert!(matches!(ExperimentConfig::from_toml(&text), Err(Error::Config(_))));
    }

    #[test]
    fn rejects_both_model_blocks() {
        let text = format!(
            "{GATE}\n[circuit]\nqubit_capacitance_ff = [22, 22]\nancilla_capacitance_ff = 19\njunction_capacitance_ff = [4, 4]\njunction_energy_ghz = [[10, 10, 10, 10], [11, 11, 11, 11]]\n"
        );
        let err = ExperimentConfig::from_toml(&text).unwrap_err();
        assert!(err.to_string().contains("not both"), "{err}");
    }

    #[test]
    fn rejects_mismatched_experiment() {
        let text = GATE.replace("experiment = \"gate\"", "experiment = \"spectrum\"");
        assert!(ExperimentConfig::from_toml(&text).is_err());
        assert!("ghz".parse::<Experiment>().is_ok());
        assert!("ghz-factory".parse::<Experiment>().is_err());
    }
}
