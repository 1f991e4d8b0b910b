use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `(2e)^2 / (h * 1 fF)` in GHz: converts `1 / (8 C[fF])` into a linear frequency.
pub const COOPER_PAIR_CHARGE_GHZ_FF: f64 = {
    const E: f64 = 1.602_176_634e-19;
    const H: f64 = 6.626_070_15e-34;
    4.0 * E * E / (H * 1e-15) / 1e9
};

/// Linear frequency (GHz) to angular frequency (rad/ns).
pub fn ghz_to_rad(f: f64) -> f64 {
    2.0 * PI * f
}

/// Angular frequency (rad/ns) to linear frequency (GHz).
pub fn rad_to_ghz(w: f64) -> f64 {
    w / (2.0 * PI)
}

/// Star-topology device: one Josephson ring modulator per qubit, all sharing
/// the single ancilla mode.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitParams {
    /// Shunt capacitance of each qubit island, fF.
    pub qubit_capacitance: Vec<f64>,
    /// Ancilla shunt capacitance, fF.
    pub ancilla_capacitance: f64,
    /// Junction capacitance of each ring, fF.
    pub junction_capacitance: Vec<f64>,
    /// Josephson energies (GHz) of the four junctions of each ring.
    pub junction_energy: Vec<[f64; 4]>,
    /// External flux through each ring in units of the flux quantum.
    pub flux: Vec<f64>,
}

impl CircuitParams {
    /// Device with equal junctions inside every ring.
    pub fn symmetric(
        qubit_capacitance: Vec<f64>,
        ancilla_capacitance: f64,
        junction_capacitance: Vec<f64>,
        ring_energy: &[f64],
    ) -> Self {
        let n = ring_energy.len();
        Self {
            qubit_capacitance,
            ancilla_capacitance,
            junction_capacitance,
            junction_energy: ring_energy.iter().map(|&e| [e; 4]).collect(),
            flux: vec![0.0; n],
        }
    }

    /// Two-qubit reference device.
    pub fn two_qubit_reference() -> Self {
        Self::symmetric(vec![22.0, 22.0], 19.0, vec![4.0, 4.0], &[10.0, 11.0])
    }

    /// Four-qubit plaquette reference device.
    pub fn four_qubit_reference() -> Self {
        Self::symmetric(vec![13.0, 15.0, 13.0, 15.0], 13.0, vec![4.0; 4], &[13.0, 13.0, 12.0, 12.0])
    }

    pub fn n_qubits(&self) -> usize {
        self.junction_energy.len()
    }

    pub fn with_flux(mut self, flux: &[f64]) -> Self {
        self.flux = flux.to_vec();
        self
    }

    /// True when all four junctions of every ring share one energy.
    pub fn is_ring_symmetric(&self) -> bool {
        self.junction_energy.iter().all(|r| r.iter().all(|&e| e == r[0]))
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits();
        if n == 0 {
            return Err(Error::InvalidCircuit("need at least one qubit".into()));
        }
        for (name, len) in [
            ("qubit_capacitance", self.qubit_capacitance.len()),
            ("junction_capacitance", self.junction_capacitance.len()),
            ("flux", self.flux.len()),
        ] {
            if len != n {
                return Err(Error::InvalidCircuit(format!("{name} has {len} entries, expected {n}")));
            }
        }
        let caps = self
            .qubit_capacitance
            .iter()
            .chain(&self.junction_capacitance)
            .chain(std::iter::once(&self.ancilla_capacitance));
        for &c in caps {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidCircuit(format!("capacitance {c} fF must be positive")));
            }
        }
        for ring in &self.junction_energy {
            for &e in ring {
                if !(e > 0.0 && e.is_finite()) {
                    return Err(Error::InvalidCircuit(format!("Josephson energy {e} GHz must be positive")));
                }
            }
        }
        if self.flux.iter().any(|f| !f.is_finite()) {
            return Err(Error::InvalidCircuit("flux must be finite".into()));
        }
        Ok(())
    }
}

/// Charging energies in rad/ns.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargingEnergies {
    pub qubit: Vec<f64>,
    pub ancilla: f64,
    pub theta: Vec<f64>,
}

fn charging(c_ff: f64) -> f64 {
    ghz_to_rad(COOPER_PAIR_CHARGE_GHZ_FF / (8.0 * c_ff))
}

pub fn charging_energies(params: &CircuitParams) -> Result<ChargingEnergies> {
    params.validate()?;
    let qubit = params
        .qubit_capacitance
        .iter()
        .zip(&params.junction_capacitance)
        .map(|(c, cj)| charging(c + cj))
        .collect();
    let ancilla = charging(params.ancilla_capacitance + params.junction_capacitance.iter().sum::<f64>());
    let theta = params.junction_capacitance.iter().map(|&cj| charging(cj)).collect();
    Ok(ChargingEnergies { qubit, ancilla, theta })
}
