//! Driven open-system dynamics in the frame rotating with the qubits and
//! the bare ancilla.
//!
//! The drive term is `c(t) b^dagger + c(t)^* b` with
//! `c(t) = -(Omega/2) sum_tones exp(i(-nu t + phi(t)))`, so a resonant tone
//! with phase `phi` generates `-(Omega/2)(cos(phi) X_P + sin(phi) Y_P)` on the
//! ancilla's lowest two levels.

mod blocked;
mod channel;
mod sequence;
mod zz;

pub use blocked::{evolve_blocked, BlockedPropagator};
pub use channel::{
    apply_frame_to_state, frame_correction, frame_unitary, simulate_channel, simulate_channel_dense, static_frame_unitary,
    to_interaction_frame, ProcessMap,
};
pub use sequence::{ghz_factory, ghz_with_ground_ancilla, pcf_gate, plus_ground_state, run_sequence, GateRun, GhzRun};
pub use zz::{zz_phase_rate, CancellationTone, ProbeOptions, ZzProbe};

use crate::effective::{device_space, z_value, EffectiveModel};
use crate::error::{Error, Result};
use crate::pulses::{DriveProgram, Grid};
use crate::qcore::{hermitian_deviation, ladder, number_op, CMatrix, DensityMatrix, HilbertSpace, Operator, C64};

/// Largest accepted change of the trace over one propagation.
pub const TRACE_TOLERANCE: f64 = 1e-7;

/// Ancilla levels kept in every dynamics simulation.
pub const ANCILLA_LEVELS: usize = 3;

/// Decoherence times in ns; `None` disables the channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Noise {
    pub t1: Option<f64>,
    pub t_phi: Option<f64>,
}

impl Noise {
    pub fn none() -> Self {
        Self { t1: None, t_phi: None }
    }

    pub fn new(t1: f64, t_phi: f64) -> Self {
        Self { t1: Some(t1), t_phi: Some(t_phi) }
    }

    /// Relaxation rate `1/T1` of the `b` collapse operators.
    pub fn gamma_relax(&self) -> f64 {
        self.t1.map_or(0.0, |t| 1.0 / t)
    }

    /// Rate `2/T_phi` of the `b^dagger b` collapse operators, which makes
    /// neighbouring-level coherences decay as `exp(-t/T_phi)`.
    pub fn gamma_phi(&self) -> f64 {
        self.t_phi.map_or(0.0, |t| 2.0 / t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub dt: f64,
    pub store_populations: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self { dt: 0.01, store_populations: false }
    }
}

/// Qubits plus a three-level ancilla with a longitudinal coupling, an
/// optional `zz Z_1 Z_2` term, and decoherence.
#[derive(Debug, Clone, PartialEq)]
pub struct Device {
    pub model: EffectiveModel,
    /// Coefficient of `Z_1 Z_2` (rad/ns).
    pub zz: f64,
    pub noise: Noise,
}

impl Device {
    pub fn new(model: EffectiveModel, noise: Noise) -> Self {
        Self { model, zz: 0.0, noise }
    }

    pub fn n_qubits(&self) -> usize {
        self.model.n_qubits()
    }

    /// Qubit-only energy of register `q` in the rotating frame.
    pub fn qubit_energy(&self, q: usize) -> f64 {
        let n = self.n_qubits();
        if n >= 2 {
            self.zz * z_value(n, q, 0) * z_value(n, q, 1)
        } else {
            0.0
        }
    }

    /// Diagonal of the undriven Hamiltonian for register `q`, ancilla level `p`.
    pub fn static_energy(&self, q: usize, p: usize) -> f64 {
        let p = p as f64;
        self.qubit_energy(q) + self.model.detuning(q) * p + 0.5 * self.model.anharmonicity * p * (p - 1.0)
    }

    pub fn space(&self) -> Result<HilbertSpace> {
        device_space(self.n_qubits(), ANCILLA_LEVELS)
    }
}

/// Dense GKSL model `H(t) = H_0 + c_k A + c_k^* A^dagger` with `c_k`
/// sampled on a half-step grid.
#[derive(Debug, Clone)]
pub struct LindbladModel {
    pub space: HilbertSpace,
    pub h0: CMatrix,
    /// Operator multiplied by the drive coefficient (its adjoint takes the conjugate).
    pub drive_op: Option<CMatrix>,
    pub coefficients: Vec<C64>,
    pub grid: Grid,
    pub collapse: Vec<(CMatrix, f64)>,
}

impl LindbladModel {
    /// Time-independent model over `duration`.
    pub fn constant(space: HilbertSpace, h0: CMatrix, collapse: Vec<(CMatrix, f64)>, duration: f64, dt: f64) -> Result<Self> {
        let grid = Grid::new(duration, dt)?;
        let m = Self { space, h0, drive_op: None, coefficients: vec![C64::from(0.0); grid.samples()], grid, collapse };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.space.total_dim();
        if self.h0.nrows() != d || self.h0.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: self.h0.nrows() });
        }
        let dev = hermitian_deviation(&self.h0);
        if dev > 1e-9 {
            return Err(Error::NotHermitian(dev));
        }
        for (l, rate) in &self.collapse {
            if !(*rate >= 0.0) {
                return Err(Error::InvalidArgument(format!("collapse rate {rate} must be non-negative")));
            }
            if l.nrows() != d {
                return Err(Error::DimensionMismatch { expected: d, got: l.nrows() });
            }
        }
        if self.coefficients.len() != self.grid.samples() {
            return Err(Error::DimensionMismatch { expected: self.grid.samples(), got: self.coefficients.len() });
        }
        Ok(())
    }

    /// Hamiltonian at grid sample `k`.
    pub fn hamiltonian(&self, k: usize) -> CMatrix {
        match &self.drive_op {
            Some(a) => {
                let c = self.coefficients[k];
                let drive = a * c;
                &self.h0 + &drive + drive.adjoint()
            }
            None => self.h0.clone(),
        }
    }
}

fn embed(space: &HilbertSpace, label: &str, m: &CMatrix) -> Result<CMatrix> {
    Ok(space.embed(label, m)?.matrix)
}

/// Collapse operators: `b` at rate `1/T1` and `b^dagger b` at rate `2/T_phi`
/// on every qubit and on the ancilla.
pub fn collapse_operators(space: &HilbertSpace, noise: &Noise) -> Result<Vec<(CMatrix, f64)>> {
    let mut out = Vec::new();
    for mode in space.modes() {
        let (g1, gp) = (noise.gamma_relax(), noise.gamma_phi());
        if g1 > 0.0 {
            out.push((embed(space, &mode.label, &ladder(mode.dim)?)?, g1));
        }
        if gp > 0.0 {
            out.push((embed(space, &mode.label, &number_op(mode.dim))?, gp));
        }
    }
    Ok(out)
}

/// Full dense model of a driven device.
pub fn device_model(device: &Device, program: &DriveProgram) -> Result<LindbladModel> {
    if program.n_qubits != device.n_qubits() {
        return Err(Error::DimensionMismatch { expected: device.n_qubits(), got: program.n_qubits });
    }
    let space = device.space()?;
    let d = space.total_dim();
    let h0 = CMatrix::from_fn(d, d, |r, c| {
        if r == c {
            C64::from(device.static_energy(r / ANCILLA_LEVELS, r % ANCILLA_LEVELS))
        } else {
            C64::from(0.0)
        }
    });
    let bdag = embed(&space, "P", &ladder(ANCILLA_LEVELS)?.adjoint())?;
    let coefficients = (0..program.grid.samples()).map(|k| program.coefficient(k)).collect();
    let collapse = collapse_operators(&space, &device.noise)?;
    let m = LindbladModel { space, h0, drive_op: Some(bdag), coefficients, grid: program.grid, collapse };
    m.validate()?;
    Ok(m)
}

fn drive_hamiltonian(device: &Device, program: &DriveProgram, t: f64) -> Result<Operator> {
    let model = device_model(device, program)?;
    let k = ((t / program.grid.spacing()).round() as usize).min(program.grid.samples() - 1);
    Operator::new(model.space.clone(), model.hamiltonian(k))
}

/// Rotating-frame Hamiltonian of a two-qubit device under a single-tone
/// program, at the grid sample nearest `t`.
pub fn drive_hamiltonian_2q(device: &Device, program: &DriveProgram, t: f64) -> Result<Operator> {
    if device.n_qubits() != 2 || program.tones.len() > 1 {
        return Err(Error::InvalidArgument("two-qubit drive expects two qubits and at most one tone".into()));
    }
    drive_hamiltonian(device, program, t)
}

/// Rotating-frame Hamiltonian of a four-qubit device under a two-tone program.
pub fn drive_hamiltonian_4q(device: &Device, program: &DriveProgram, t: f64) -> Result<Operator> {
    if device.n_qubits() != 4 || program.tones.len() != 2 {
        return Err(Error::InvalidArgument("four-qubit drive expects four qubits and two tones".into()));
    }
    drive_hamiltonian(device, program, t)
}

#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub state: DensityMatrix,
    /// `(time, diagonal populations)` after every step, when requested.
    pub populations: Option<Vec<(f64, Vec<f64>)>>,
    /// Population of ancilla levels above the first excited one.
    pub leakage: f64,
    pub trace_drift: f64,
}

/// `(L, L^dagger L, L^dagger, rate)` for each collapse operator.
type Dissipator = (CMatrix, CMatrix, CMatrix, f64);

fn lindblad_rhs(h: &CMatrix, rho: &CMatrix, dissipators: &[Dissipator]) -> CMatrix {
    let mut out = (h * rho - rho * h) * C64::new(0.0, -1.0);
    for (l, ldl, ldag, rate) in dissipators {
        let term = l * rho * ldag - (ldl * rho + rho * ldl) * C64::from(0.5);
        out += term * C64::from(*rate);
    }
    out
}

/// Fixed-step RK4 of the GKSL equation for an arbitrary operator input.
/// When `symmetrize` is set the state is replaced by `(rho + rho^dagger)/2`
/// after every step.
pub fn rk4_dense(rho0: &CMatrix, model: &LindbladModel, symmetrize: bool, store_populations: bool) -> Result<(CMatrix, Option<Vec<(f64, Vec<f64>)>>, f64)> {
    model.validate()?;
    let d = model.space.total_dim();
    if rho0.nrows() != d || rho0.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, got: rho0.nrows() });
    }
    let pre: Vec<Dissipator> =
        model.collapse.iter().map(|(l, r)| (l.clone(), l.adjoint() * l, l.adjoint(), *r)).collect();
    let dt = C64::from(model.grid.dt());
    let half = C64::from(0.5);
    let mut rho = rho0.clone();
    let tr0 = rho0.trace();
    let mut pops = store_populations.then(|| vec![(0.0, rho.diagonal().iter().map(|z| z.re).collect::<Vec<_>>())]);
    let mut drift: f64 = 0.0;
    for step in 0..model.grid.steps {
        let (h0, h1, h2) = (model.hamiltonian(2 * step), model.hamiltonian(2 * step + 1), model.hamiltonian(2 * step + 2));
        let k1 = lindblad_rhs(&h0, &rho, &pre);
        let k2 = lindblad_rhs(&h1, &(&rho + &k1 * (dt * half)), &pre);
        let k3 = lindblad_rhs(&h1, &(&rho + &k2 * (dt * half)), &pre);
        let k4 = lindblad_rhs(&h2, &(&rho + &k3 * dt), &pre);
        rho += (k1 + (k2 + k3) * C64::from(2.0) + k4) * (dt / C64::from(6.0));
        if symmetrize {
            rho = (&rho + rho.adjoint()) * half;
        }
        drift = drift.max((rho.trace() - tr0).norm());
        if let Some(p) = pops.as_mut() {
            p.push((model.grid.time(2 * step + 2), rho.diagonal().iter().map(|z| z.re).collect()));
        }
    }
    if drift > TRACE_TOLERANCE {
        return Err(Error::TraceDrift { drift, bound: TRACE_TOLERANCE });
    }
    Ok((rho, pops, drift))
}

/// Population outside the ancilla's two lowest levels.
pub fn ancilla_leakage(rho: &CMatrix, space: &HilbertSpace) -> f64 {
    let Ok(pi) = space.mode_index("P") else { return 0.0 };
    (0..space.total_dim())
        .filter(|&k| space.occupation_of(k)[pi] >= 2)
        .map(|k| rho[(k, k)].re)
        .sum()
}

/// Dense RK4 propagation of a density matrix with per-step symmetrization.
pub fn gksl_evolve(rho0: &DensityMatrix, model: &LindbladModel, opts: &SimOptions) -> Result<EvolutionResult> {
    if rho0.space != model.space {
        return Err(Error::InvalidArgument("initial state and model live on different spaces".into()));
    }
    let (rho, populations, trace_drift) = rk4_dense(&rho0.matrix, model, true, opts.store_populations)?;
    let leakage = ancilla_leakage(&rho, &model.space);
    Ok(EvolutionResult { state: DensityMatrix::new_unchecked(model.space.clone(), rho), populations, leakage, trace_drift })
}
