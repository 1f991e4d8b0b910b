use super::params::rad_to_ghz;
use super::spectrum::{Label, SpectrumResult};
use crate::error::Result;

/// Parameters of the longitudinal spin model, in rad/ns.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveParams {
    pub qubit_freq: Vec<f64>,
    pub ancilla_freq: f64,
    pub ancilla_anharmonicity: f64,
    /// Change of the ancilla transition when qubit `i` is excited.
    pub coupling: Vec<f64>,
    /// `zz[i][j]`: coefficient of `Z_i Z_j` (symmetric, zero diagonal).
    pub zz: Vec<Vec<f64>>,
    /// First excitation energy of each theta mode, when present in the spectrum.
    pub theta_freq: Vec<f64>,
}

impl EffectiveParams {
    pub fn n_qubits(&self) -> usize {
        self.qubit_freq.len()
    }

    pub fn coupling_spread(&self) -> f64 {
        let max = self.coupling.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.coupling.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }

    /// Sample variance of the couplings.
    pub fn coupling_variance(&self) -> f64 {
        let n = self.coupling.len() as f64;
        if n < 2.0 {
            return 0.0;
        }
        let mean = self.coupling.iter().sum::<f64>() / n;
        self.coupling.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (n - 1.0)
    }

    pub fn mean_coupling(&self) -> f64 {
        self.coupling.iter().sum::<f64>() / self.coupling.len() as f64
    }

    /// Same parameters with every entry converted to GHz.
    pub fn to_ghz(&self) -> EffectiveParams {
        let f = |v: &Vec<f64>| v.iter().map(|&x| rad_to_ghz(x)).collect::<Vec<_>>();
        EffectiveParams {
            qubit_freq: f(&self.qubit_freq),
            ancilla_freq: rad_to_ghz(self.ancilla_freq),
            ancilla_anharmonicity: rad_to_ghz(self.ancilla_anharmonicity),
            coupling: f(&self.coupling),
            zz: self.zz.iter().map(f).collect(),
            theta_freq: f(&self.theta_freq),
        }
    }
}

pub fn effective_params(spectrum: &SpectrumResult) -> Result<EffectiveParams> {
    let n = spectrum.energies.keys().next().map_or(0, |l| l.qubits.len());
    let e = |q: &[usize], p: u8| spectrum.energy(&Label::excited(n, q, p));
    let e0 = e(&[], 0)?;
    let f0 = e(&[], 1)? - e0;
    let qubit_freq = (0..n).map(|i| Ok(e(&[i], 0)? - e0)).collect::<Result<Vec<_>>>()?;
    let coupling = (0..n).map(|i| Ok(e(&[i], 1)? - e(&[i], 0)? - f0)).collect::<Result<Vec<_>>>()?;
    let ancilla_anharmonicity = e(&[], 2)? - 2.0 * e(&[], 1)? + e0;
    let mut zz = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = (e(&[i, j], 0)? - e(&[i], 0)? - e(&[j], 0)? + e0) / 4.0;
            zz[i][j] = v;
            zz[j][i] = v;
        }
    }
    let theta_freq = (0..n)
        .filter_map(|i| spectrum.energies.get(&Label::theta_excited(n, i)).map(|&x| x - e0))
        .collect();
    Ok(EffectiveParams { qubit_freq, ancilla_freq: f0, ancilla_anharmonicity, coupling, zz, theta_freq })
}
