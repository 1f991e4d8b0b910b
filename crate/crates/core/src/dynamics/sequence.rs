//! Back-to-back pulses applied to a state.

use super::{apply_frame_to_state, evolve_blocked, frame_correction, simulate_channel, to_interaction_frame, Device, ProcessMap};
use crate::effective::{ghz_target, modified_pcf_unitary, pcf_unitary};
use crate::error::{Error, Result};
use crate::metrics::{process_fidelity, pure_state_fidelity};
use crate::pulses::{pcf_program_2q, pcf_program_4q, stark_schedule_4q, DriveProgram, Envelope, Grid, Scheme};
use crate::qcore::{CVector, DensityMatrix, StateVector, C64};

/// Runs the programs in order. After each one the state is moved into the
/// interaction picture of the undriven device and the program's frame
/// correction is applied.
pub fn run_sequence(rho0: &DensityMatrix, device: &Device, programs: &[DriveProgram]) -> Result<DensityMatrix> {
    programs.iter().try_fold(rho0.clone(), |rho, p| {
        let out = evolve_blocked(&rho, device, p)?;
        let out = to_interaction_frame(&out, device, p.duration())?;
        apply_frame_to_state(&out, device.n_qubits(), &p.frame)
    })
}

/// `|+>^n |0_P>` on the dynamics space.
pub fn plus_ground_state(device: &Device) -> Result<StateVector> {
    let space = device.space()?;
    let n = device.n_qubits();
    let levels = space.total_dim() >> n;
    let amp = C64::from((1.0 / (1u64 << n) as f64).sqrt());
    StateVector::new(space.clone(), CVector::from_fn(space.total_dim(), |k, _| if k % levels == 0 { amp } else { C64::from(0.0) }))
}

/// GHZ target of the qubits with the ancilla in its ground state.
pub fn ghz_with_ground_ancilla(device: &Device) -> Result<StateVector> {
    let space = device.space()?;
    let n = device.n_qubits();
    let levels = space.total_dim() >> n;
    let target = ghz_target(n)?;
    StateVector::new(space.clone(), CVector::from_fn(space.total_dim(), |k, _| if k % levels == 0 { target.data[k / levels] } else { C64::from(0.0) }))
}

#[derive(Debug, Clone)]
pub struct GhzRun {
    pub total_time: f64,
    pub fidelity: f64,
    pub chi: f64,
    pub state: DensityMatrix,
}

/// Parity-phase gate with `phi = pi/2` built from two four-qubit flips:
/// the first with phases `(phi - 2 chi, phi + 2 chi)`, the second a plain
/// `pi` flip, applied to `|+>^4 |0_P>`.
pub fn ghz_factory(device: &Device, pulse: &Envelope, scheme: Scheme, dt: f64) -> Result<GhzRun> {
    if device.n_qubits() != 4 {
        return Err(Error::InvalidArgument("the GHZ factory runs on four qubits".into()));
    }
    let (g, alpha) = (device.model.coupling, device.model.anharmonicity);
    let chi = match scheme {
        Scheme::Basic => 0.0,
        Scheme::Advanced => stark_schedule_4q(pulse, &Grid::new(pulse.gate_time, dt)?, g, alpha)?.chi,
    };
    let phi = std::f64::consts::FRAC_PI_2;
    let first = pcf_program_4q(pulse, phi - 2.0 * chi, phi + 2.0 * chi, g, alpha, scheme, dt)?;
    let second = pcf_program_4q(pulse, std::f64::consts::PI, std::f64::consts::PI, g, alpha, scheme, dt)?;
    let rho0 = plus_ground_state(device)?.projector();
    let state = run_sequence(&rho0, device, &[first, second])?;
    let fidelity = pure_state_fidelity(&state, &ghz_with_ground_ancilla(device)?)?;
    Ok(GhzRun { total_time: 2.0 * pulse.gate_time, fidelity, chi, state })
}

#[derive(Debug, Clone)]
pub struct GateRun {
    pub gate_time: f64,
    pub process_fidelity: f64,
    pub leakage: f64,
    pub chi: f64,
    /// Frame-corrected channel on qubits and ancilla levels 0 and 1.
    pub map: ProcessMap,
}

/// Simulates a parity-controlled flip with phase `phi` on a two- or
/// four-qubit device and scores it against the ideal flip. On four qubits
/// the target carries the residual phase `chi` of the advanced drive.
pub fn pcf_gate(device: &Device, pulse: &Envelope, phi: f64, scheme: Scheme, dt: f64) -> Result<GateRun> {
    let n = device.n_qubits();
    let (g, alpha) = (device.model.coupling, device.model.anharmonicity);
    let (program, target) = match n {
        2 => (pcf_program_2q(pulse, phi, g, alpha, scheme, dt)?, pcf_unitary(2, phi)?),
        4 => {
            let p = pcf_program_4q(pulse, phi, phi, g, alpha, scheme, dt)?;
            let u = modified_pcf_unitary(4, phi, phi, p.chi)?;
            (p, u)
        }
        _ => return Err(Error::InvalidArgument(format!("flip gates run on two or four qubits, got {n}"))),
    };
    let map = frame_correction(&simulate_channel(device, &program)?, &program.frame)?;
    Ok(GateRun {
        gate_time: pulse.gate_time,
        process_fidelity: process_fidelity(&map, &target.matrix)?,
        leakage: map.leakage(),
        chi: program.chi,
        map,
    })
}
