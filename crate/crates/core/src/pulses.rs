//! Drive programs: Tukey envelopes, pi-area calibration and the phase
//! schedules that absorb drive-induced Stark shifts.
//!
//! All times are in ns and all rates in rad/ns. A program is sampled on a
//! uniform grid of half integration steps, which is where a fixed-step RK4
//! integrator evaluates the Hamiltonian.

use std::f64::consts::PI;

use crate::dynamics::{zz_phase_rate, CancellationTone, Device, ProbeOptions};
use crate::error::{Error, Result};
use crate::optimize::brent_root;
use crate::qcore::C64;

/// Smallest `|2 alpha - 4 g|` (rad/ns) accepted by the four-qubit schedule.
pub const POLE_GUARD: f64 = 2.0 * PI * 1e-3;

/// Flat-top window with cosine ramps occupying a fraction `taper` of the gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub gate_time: f64,
    pub taper: f64,
    pub amplitude: f64,
}

/// Tukey window value at `t`.
pub fn tukey(t: f64, gate_time: f64, taper: f64, amplitude: f64) -> Result<f64> {
    if !(0.0..=gate_time).contains(&t) {
        return Err(Error::InvalidArgument(format!("t = {t} outside [0, {gate_time}]")));
    }
    if !(0.0..=1.0).contains(&taper) {
        return Err(Error::InvalidArgument(format!("taper {taper} outside [0, 1]")));
    }
    let ramp = taper * gate_time / 2.0;
    let edge = t.min(gate_time - t);
    if edge >= ramp {
        Ok(amplitude)
    } else {
        Ok(amplitude * 0.5 * (1.0 - (PI * edge / ramp).cos()))
    }
}

/// Amplitude giving a pulse area of exactly pi.
pub fn calibrate_pi(gate_time: f64, taper: f64) -> Result<f64> {
    if !(gate_time > 0.0) {
        return Err(Error::InvalidArgument(format!("gate time must be positive, got {gate_time}")));
    }
    if !(0.0..=1.0).contains(&taper) {
        return Err(Error::InvalidArgument(format!("taper {taper} outside [0, 1]")));
    }
    Ok(PI / (gate_time * (1.0 - taper / 2.0)))
}

impl Envelope {
    pub fn new(gate_time: f64, taper: f64, amplitude: f64) -> Result<Self> {
        tukey(0.0, gate_time, taper, amplitude)?;
        Ok(Self { gate_time, taper, amplitude })
    }

    /// Pulse of area pi.
    pub fn pi_pulse(gate_time: f64, taper: f64) -> Result<Self> {
        Self::new(gate_time, taper, calibrate_pi(gate_time, taper)?)
    }

    /// Envelope value, zero outside the gate.
    pub fn at(&self, t: f64) -> f64 {
        tukey(t.clamp(0.0, self.gate_time), self.gate_time, self.taper, self.amplitude).unwrap_or(0.0)
    }

    pub fn area(&self) -> f64 {
        self.amplitude * self.gate_time * (1.0 - self.taper / 2.0)
    }
}

/// Uniform sample grid `t_k = k * spacing`, `k = 0..=2 * steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub duration: f64,
    pub steps: usize,
}

impl Grid {
    /// Grid whose integration step is as close as possible to `dt` without
    /// exceeding it.
    pub fn new(duration: f64, dt: f64) -> Result<Self> {
        if !(duration > 0.0 && dt > 0.0) {
            return Err(Error::InvalidArgument(format!("need positive duration and step, got {duration}, {dt}")));
        }
        let steps = ((duration / dt) - 1e-9).ceil().max(1.0) as usize;
        Ok(Self { duration, steps })
    }

    pub fn dt(&self) -> f64 {
        self.duration / self.steps as f64
    }

    pub fn spacing(&self) -> f64 {
        self.dt() / 2.0
    }

    pub fn samples(&self) -> usize {
        2 * self.steps + 1
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.spacing()
    }
}

/// Cumulative trapezoidal integral of samples on the grid.
pub fn cumulative_trapezoid(values: &[f64], spacing: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in values.windows(2) {
        acc += 0.5 * spacing * (w[0] + w[1]);
        out.push(acc);
    }
    out
}

/// Stark-shift rates sampled on a grid, with their running integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct StarkSchedule {
    pub delta_q: Vec<f64>,
    /// One ancilla shift per tone: `delta_P` for two qubits,
    /// `(delta_P1, delta_P3)` for four.
    pub delta_p: Vec<Vec<f64>>,
    /// Residual phase of the four-qubit two-tone drive (zero for two qubits).
    pub chi: f64,
    pub spacing: f64,
}

impl StarkSchedule {
    pub fn zero(samples: usize, tones: usize, spacing: f64) -> Self {
        Self { delta_q: vec![0.0; samples], delta_p: vec![vec![0.0; samples]; tones], chi: 0.0, spacing }
    }

    pub fn integral_q(&self) -> f64 {
        *cumulative_trapezoid(&self.delta_q, self.spacing).last().unwrap()
    }

    pub fn integral_p(&self, tone: usize) -> f64 {
        *cumulative_trapezoid(&self.delta_p[tone], self.spacing).last().unwrap()
    }

    /// Compensated phase `phi - int_0^t delta_P` for the given tone.
    pub fn phase_schedule(&self, tone: usize, phi: f64) -> Vec<f64> {
        cumulative_trapezoid(&self.delta_p[tone], self.spacing).into_iter().map(|x| phi - x).collect()
    }
}

fn envelope_samples(env: &Envelope, grid: &Grid) -> Vec<f64> {
    (0..grid.samples()).map(|k| env.at(grid.time(k))).collect()
}

/// `delta_Q = -Omega^2/(4g)` and `delta_P = -Omega^2/(2 alpha)`.
pub fn stark_schedule_2q(env: &Envelope, grid: &Grid, g: f64, alpha: f64) -> Result<StarkSchedule> {
    if g == 0.0 || alpha == 0.0 {
        return Err(Error::InvalidArgument("Stark schedule needs nonzero g and alpha".into()));
    }
    let om = envelope_samples(env, grid);
    Ok(StarkSchedule {
        delta_q: om.iter().map(|w| -w * w / (4.0 * g)).collect(),
        delta_p: vec![om.iter().map(|w| -w * w / (2.0 * alpha)).collect()],
        chi: 0.0,
        spacing: grid.spacing(),
    })
}

/// Two-tone schedules:
/// `delta_Q = -Omega^2/(6g)`,
/// `delta_P1 = -Omega^2/(4g) - Omega^2/(2 alpha) - Omega^2/(2 alpha - 4g)`,
/// `delta_P3 = delta_Q + Omega^2/(8g) - Omega^2/(2 alpha)`,
/// `chi = int Omega^2/(24 g)`.
pub fn stark_schedule_4q(env: &Envelope, grid: &Grid, g: f64, alpha: f64) -> Result<StarkSchedule> {
    if g == 0.0 || alpha == 0.0 {
        return Err(Error::InvalidArgument("Stark schedule needs nonzero g and alpha".into()));
    }
    let pole = 2.0 * alpha - 4.0 * g;
    if pole.abs() < POLE_GUARD {
        return Err(Error::DrivePole(pole.abs()));
    }
    let om = envelope_samples(env, grid);
    let w2: Vec<f64> = om.iter().map(|w| w * w).collect();
    let delta_q: Vec<f64> = w2.iter().map(|x| -x / (6.0 * g)).collect();
    let p1 = w2.iter().map(|x| -x / (4.0 * g) - x / (2.0 * alpha) - x / pole).collect();
    let p3 = w2.iter().zip(&delta_q).map(|(x, dq)| dq + x / (8.0 * g) - x / (2.0 * alpha)).collect();
    let chi_rate: Vec<f64> = w2.iter().map(|x| x / (24.0 * g)).collect();
    let chi = *cumulative_trapezoid(&chi_rate, grid.spacing()).last().unwrap();
    Ok(StarkSchedule { delta_q, delta_p: vec![p1, p3], chi, spacing: grid.spacing() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Constant drive phase, no frame correction.
    Basic,
    /// Stark-compensating phase schedules and terminal frame correction.
    Advanced,
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basic" => Ok(Scheme::Basic),
            "advanced" => Ok(Scheme::Advanced),
            _ => Err(Error::InvalidArgument(format!("unknown scheme `{s}`"))),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            Scheme::Basic => "basic",
            Scheme::Advanced => "advanced",
        })
    }
}

/// One drive tone, detuned by `detuning` from the bare ancilla frequency,
/// with its phase sampled on the program grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Tone {
    pub detuning: f64,
    pub phase: Vec<f64>,
}

/// Integrated frame rotation `int_0^T H_ac`: a qubit part `-(D_Q/2) sum Z`
/// and an ancilla part `D_P(w) n_P` that depends on the register weight `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameShift {
    pub qubit: f64,
    pub ancilla_by_weight: Vec<f64>,
}

impl FrameShift {
    pub fn zero(n: usize) -> Self {
        Self { qubit: 0.0, ancilla_by_weight: vec![0.0; n + 1] }
    }

    pub fn is_zero(&self) -> bool {
        self.qubit == 0.0 && self.ancilla_by_weight.iter().all(|&x| x == 0.0)
    }
}

/// Everything the propagator needs to apply a drive.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveProgram {
    pub n_qubits: usize,
    pub grid: Grid,
    /// Envelope samples on the grid (rad/ns).
    pub omega: Vec<f64>,
    pub tones: Vec<Tone>,
    pub frame: FrameShift,
    pub chi: f64,
    pub scheme: Scheme,
}

impl DriveProgram {
    /// Coefficient of `b^dagger` at sample `k`:
    /// `-(Omega/2) sum_tones exp(i(-nu t + phi(t)))`.
    pub fn coefficient(&self, k: usize) -> C64 {
        let t = self.grid.time(k);
        let half = -0.5 * self.omega[k];
        self.tones.iter().map(|tone| C64::from_polar(half, -tone.detuning * t + tone.phase[k])).sum()
    }

    /// Zero drive of the given duration.
    pub fn idle(n_qubits: usize, duration: f64, dt: f64) -> Result<Self> {
        let grid = Grid::new(duration, dt)?;
        Ok(Self {
            n_qubits,
            grid,
            omega: vec![0.0; grid.samples()],
            tones: vec![],
            frame: FrameShift::zero(n_qubits),
            chi: 0.0,
            scheme: Scheme::Basic,
        })
    }

    pub fn duration(&self) -> f64 {
        self.grid.duration
    }
}

/// Integrated second-order shift of `|1_P>` relative to `|0_P>` for a
/// register whose ancilla sits `delta` from the bare frequency and is
/// driven off-resonantly by tones at `tones`. Each tone contributes
/// `Omega^2/(2(delta - nu)) - Omega^2/(2(delta - nu + alpha))`.
pub fn spectator_shift(omega_sq_integral: f64, delta: f64, alpha: f64, tones: &[f64]) -> Result<f64> {
    tones.iter().try_fold(0.0, |acc, &nu| {
        let (d01, d12) = (delta - nu, delta - nu + alpha);
        if d01.abs() < POLE_GUARD || d12.abs() < POLE_GUARD {
            return Err(Error::DrivePole(d01.abs().min(d12.abs())));
        }
        Ok(acc + omega_sq_integral * (0.5 / d01 - 0.5 / d12))
    })
}

/// Frame entries for the even-weight registers, which the drive never
/// flips: `ancilla_by_weight[w]` becomes the spectator shift of weight `w`.
fn fill_even_weights(frame: &mut FrameShift, omega: &[f64], spacing: f64, n: usize, g: f64, alpha: f64, tones: &[f64]) -> Result<()> {
    let w2: Vec<f64> = omega.iter().map(|w| w * w).collect();
    let integral = *cumulative_trapezoid(&w2, spacing).last().unwrap_or(&0.0);
    for w in (0..=n).step_by(2) {
        let delta = -0.5 * g * (n as f64 - 2.0 * w as f64);
        frame.ancilla_by_weight[w] = spectator_shift(integral, delta, alpha, tones)?;
    }
    Ok(())
}

/// Single-tone flip on two qubits, resonant with odd registers.
pub fn pcf_program_2q(env: &Envelope, phi: f64, g: f64, alpha: f64, scheme: Scheme, dt: f64) -> Result<DriveProgram> {
    let grid = Grid::new(env.gate_time, dt)?;
    let omega = envelope_samples(env, &grid);
    let (phase, frame) = match scheme {
        Scheme::Basic => (vec![phi; grid.samples()], FrameShift::zero(2)),
        Scheme::Advanced => {
            let s = stark_schedule_2q(env, &grid, g, alpha)?;
            let dp = s.integral_p(0);
            let mut frame = FrameShift { qubit: s.integral_q(), ancilla_by_weight: vec![dp; 3] };
            fill_even_weights(&mut frame, &omega, grid.spacing(), 2, g, alpha, &[0.0])?;
            (s.phase_schedule(0, phi), frame)
        }
    };
    Ok(DriveProgram { n_qubits: 2, grid, omega, tones: vec![Tone { detuning: 0.0, phase }], frame, chi: 0.0, scheme })
}

/// Two-tone flip on four qubits: the tone at `-g` addresses weight-1
/// registers with phase `phi1`, the tone at `+g` weight-3 registers with `phi3`.
pub fn pcf_program_4q(env: &Envelope, phi1: f64, phi3: f64, g: f64, alpha: f64, scheme: Scheme, dt: f64) -> Result<DriveProgram> {
    let grid = Grid::new(env.gate_time, dt)?;
    let omega = envelope_samples(env, &grid);
    let n = grid.samples();
    let (p1, p3, frame, chi) = match scheme {
        Scheme::Basic => (vec![phi1; n], vec![phi3; n], FrameShift::zero(4), 0.0),
        Scheme::Advanced => {
            let s = stark_schedule_4q(env, &grid, g, alpha)?;
            let mut frame = FrameShift { qubit: s.integral_q(), ancilla_by_weight: vec![0.0, s.integral_p(0), 0.0, s.integral_p(1), 0.0] };
            fill_even_weights(&mut frame, &omega, grid.spacing(), 4, g, alpha, &[-g, g])?;
            (s.phase_schedule(0, phi1), s.phase_schedule(1, phi3), frame, s.chi)
        }
    };
    Ok(DriveProgram {
        n_qubits: 4,
        grid,
        omega,
        tones: vec![Tone { detuning: -g, phase: p1 }, Tone { detuning: g, phase: p3 }],
        frame,
        chi,
        scheme,
    })
}

/// Continuous tone of amplitude `amplitude` at `detuning`, switched on and
/// off with cosine ramps of length `ramp`.
pub fn cw_program(n_qubits: usize, duration: f64, ramp: f64, amplitude: f64, detuning: f64, dt: f64) -> Result<DriveProgram> {
    if !(2.0 * ramp <= duration) {
        return Err(Error::InvalidArgument(format!("ramps of {ramp} ns do not fit in {duration} ns")));
    }
    let grid = Grid::new(duration, dt)?;
    let taper = 2.0 * ramp / duration;
    let env = Envelope::new(duration, taper, amplitude)?;
    let omega = envelope_samples(&env, &grid);
    Ok(DriveProgram {
        n_qubits,
        grid,
        omega,
        tones: vec![Tone { detuning, phase: vec![0.0; grid.samples()] }],
        frame: FrameShift::zero(n_qubits),
        chi: 0.0,
        scheme: Scheme::Basic,
    })
}

/// Calibrated cancellation tone and the residuals it was judged by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CancellationResult {
    pub tone: CancellationTone,
    /// Effective `Z_1 Z_2` rate without the tone (rad/ns).
    pub undriven: f64,
    /// Effective rate with the tone (rad/ns).
    pub residual: f64,
    /// The tone sits at `+g/2` because `g` and `g12` share a sign.
    pub mirrored: bool,
}

/// Finds the amplitude of a continuous tone half way between the ancilla's
/// even-register transitions that cancels the residual `Z_1 Z_2` rate.
///
/// At detuning `-g/2` the drive adds `Omega^2/(3g)` to the rate, so the tone
/// is placed at `-g/2` when `g` and `g12` have opposite signs and at `+g/2`
/// otherwise. The amplitude is the root of the measured rate, bracketed
/// around `sqrt(3 |g g12|)`.
pub fn cancellation_tone(device: &Device, probe: &ProbeOptions) -> Result<CancellationResult> {
    let g = device.model.coupling;
    if g == 0.0 {
        return Err(Error::InvalidArgument("cancellation needs a nonzero coupling".into()));
    }
    let undriven = zz_phase_rate(device, None, probe)?.rate;
    let mirrored = g * undriven > 0.0;
    let detuning = if mirrored { 0.5 * g } else { -0.5 * g };
    if undriven == 0.0 {
        let tone = CancellationTone { amplitude: 0.0, detuning };
        return Ok(CancellationResult { tone, undriven, residual: 0.0, mirrored: false });
    }
    let rate = |amplitude: f64| -> Result<f64> {
        Ok(zz_phase_rate(device, Some(&CancellationTone { amplitude, detuning }), probe)?.rate)
    };
    let guess = (3.0 * (g * undriven).abs()).sqrt();
    let (mut lo, mut hi) = (0.0, 1.5 * guess);
    let mut f_hi = rate(hi)?;
    let mut widen = 0;
    while f_hi.signum() == undriven.signum() {
        widen += 1;
        if widen > 4 {
            return Err(Error::Convergence(format!(
                "no sign change of the residual up to amplitude {hi:.4} rad/ns (rate {f_hi:e})"
            )));
        }
        lo = hi;
        hi *= 1.5;
        f_hi = rate(hi)?;
    }
    let amplitude = brent_root(rate, lo, hi, 1e-6 * guess, 60)?;
    let tone = CancellationTone { amplitude, detuning };
    let residual = rate(amplitude)?;
    if residual.abs() > 0.1 * undriven.abs() {
        return Err(Error::Convergence(format!(
            "residual {residual:e} rad/ns is above 10% of the undriven {undriven:e} rad/ns at amplitude {amplitude:.4}"
        )));
    }
    Ok(CancellationResult { tone, undriven, residual, mirrored })
}
