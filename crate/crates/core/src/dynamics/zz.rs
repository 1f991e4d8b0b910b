//! Conditional-phase probe for the residual `Z_1 Z_2` interaction.

use nalgebra::{Matrix3, Vector3};

use super::Device;
use crate::error::{Error, Result};
use crate::pulses::{cw_program, DriveProgram};
use crate::qcore::C64;

/// Largest ancilla population tolerated at the end of a probe.
pub const PROBE_LEAKAGE_LIMIT: f64 = 0.01;

/// Continuous tone on the ancilla used to cancel the residual interaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CancellationTone {
    pub amplitude: f64,
    /// Tone frequency relative to the bare ancilla (rad/ns).
    pub detuning: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeOptions {
    /// Shorter of the two hold times; the longer one is twice this.
    pub window: f64,
    pub ramp: f64,
    pub dt: f64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self { window: 200.0, ramp: 20.0, dt: 0.01 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZzProbe {
    /// Effective `Z_1 Z_2` coefficient (rad/ns).
    pub rate: f64,
    /// Largest ancilla population left after a probe.
    pub leakage: f64,
}

/// Evolves `|q>|0_P>` coherently and returns the unwrapped phase
/// `-arg <q, 0_P | psi(T)>` and the final ancilla excitation.
fn register_phase(device: &Device, program: &DriveProgram, q: usize) -> (f64, f64) {
    let diag = Vector3::from_fn(|p, _| C64::from(device.static_energy(q, p)));
    let h0 = Matrix3::from_diagonal(&diag);
    let mut b = Matrix3::<C64>::zeros();
    b[(0, 1)] = C64::from(1.0);
    b[(1, 2)] = C64::from(2f64.sqrt());
    let bdag = b.adjoint();
    let minus_i = C64::new(0.0, -1.0);
    let h_at = |k: usize| {
        let c = program.coefficient(k);
        h0 + bdag * c + b * c.conj()
    };
    let dt = program.grid.dt();
    let (cdt, half) = (C64::from(dt), C64::from(0.5 * dt));
    let mut psi = Vector3::new(C64::from(1.0), C64::from(0.0), C64::from(0.0));
    let mut phase = 0.0;
    let mut last = psi[0].arg();
    for step in 0..program.grid.steps {
        let (ha, hb, hc) = (h_at(2 * step), h_at(2 * step + 1), h_at(2 * step + 2));
        let k1 = ha * psi * minus_i;
        let k2 = hb * (psi + k1 * half) * minus_i;
        let k3 = hb * (psi + k2 * half) * minus_i;
        let k4 = hc * (psi + k3 * cdt) * minus_i;
        psi += (k1 + (k2 + k3) * C64::from(2.0) + k4) * (cdt / C64::from(6.0));
        let a = psi[0].arg();
        let mut d = a - last;
        d -= std::f64::consts::TAU * (d / std::f64::consts::TAU).round();
        phase -= d;
        last = a;
    }
    (phase, 1.0 - psi[0].norm_sqr())
}

fn conditional_phase(device: &Device, program: &DriveProgram) -> (f64, f64) {
    let r: Vec<(f64, f64)> = (0..4).map(|q| register_phase(device, program, q)).collect();
    let d = r[0].0 + r[3].0 - r[1].0 - r[2].0;
    let leak = r.iter().map(|x| x.1).fold(0.0, f64::max);
    (d, leak)
}

/// Effective `Z_1 Z_2` rate of a two-qubit device, with or without a
/// cancellation tone. Two hold times are simulated and the conditional
/// phase `phi_00 + phi_11 - phi_01 - phi_10` is differenced between them,
/// so ramp contributions drop out. Noise is ignored.
pub fn zz_phase_rate(device: &Device, tone: Option<&CancellationTone>, opts: &ProbeOptions) -> Result<ZzProbe> {
    if device.n_qubits() != 2 {
        return Err(Error::InvalidArgument("the phase probe needs a two-qubit device".into()));
    }
    if !(opts.window > 0.0 && opts.ramp >= 0.0) {
        return Err(Error::InvalidArgument("probe window must be positive and ramp non-negative".into()));
    }
    let program = |hold: f64| -> Result<DriveProgram> {
        let total = hold + 2.0 * opts.ramp;
        match tone {
            Some(t) => cw_program(2, total, opts.ramp, t.amplitude, t.detuning, opts.dt),
            None => DriveProgram::idle(2, total, opts.dt),
        }
    };
    let (d1, l1) = conditional_phase(device, &program(opts.window)?);
    let (d2, l2) = conditional_phase(device, &program(2.0 * opts.window)?);
    let leakage = l1.max(l2);
    if leakage > PROBE_LEAKAGE_LIMIT {
        return Err(Error::ProbeLeakage(leakage));
    }
    Ok(ZzProbe { rate: (d2 - d1) / (4.0 * opts.window), leakage })
}
