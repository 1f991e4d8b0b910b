//! Ideal parity-gate model: projectors, gate unitaries, the parity
//! measurement, GHZ targets and the longitudinal device Hamiltonian.
//!
//! Qubits `q1..qN` precede the ancilla `P`, `q1` is the most significant bit,
//! and `|0>` is the `Z = +1` eigenstate.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::qcore::{pauli_x, pauli_y, CMatrix, CVector, HilbertSpace, ModeSpec, Operator, StateVector, C64, I, ONE, ZERO};

pub fn qubit_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("q{i}")).collect()
}

pub fn qubit_space(n: usize) -> Result<HilbertSpace> {
    HilbertSpace::compose(qubit_labels(n).into_iter().map(ModeSpec::qubit).collect())
}

/// Qubits followed by an ancilla with `ancilla_levels` levels.
pub fn device_space(n: usize, ancilla_levels: usize) -> Result<HilbertSpace> {
    let mut modes: Vec<ModeSpec> = qubit_labels(n).into_iter().map(ModeSpec::qubit).collect();
    modes.push(ModeSpec::new("P", ancilla_levels));
    HilbertSpace::compose(modes)
}

/// Hamming weight of qubit register index `q`.
pub fn weight(q: usize) -> usize {
    q.count_ones() as usize
}

/// `Z_i` eigenvalue (+1 for `|0>`) of qubit `i` in register index `q`.
pub fn z_value(n: usize, q: usize, i: usize) -> f64 {
    if (q >> (n - 1 - i)) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > 16 {
        return Err(Error::InvalidArgument(format!("unsupported qubit count {n}")));
    }
    Ok(())
}

fn diagonal_on_qubits(n: usize, f: impl Fn(usize) -> C64) -> Result<Operator> {
    check_n(n)?;
    let space = qubit_space(n)?;
    let d = 1 << n;
    let m = CMatrix::from_diagonal(&CVector::from_fn(d, |q, _| f(q)));
    Operator::new(space, m)
}

/// `(P+, P-)`, projectors onto even and odd register parity.
pub fn parity_projectors(n: usize) -> Result<(Operator, Operator)> {
    let even = diagonal_on_qubits(n, |q| if weight(q) % 2 == 0 { ONE } else { ZERO })?;
    let odd = diagonal_on_qubits(n, |q| if weight(q) % 2 == 1 { ONE } else { ZERO })?;
    Ok((even, odd))
}

/// Projector onto register states of Hamming weight `m`.
pub fn weight_projector(n: usize, m: usize) -> Result<Operator> {
    diagonal_on_qubits(n, |q| if weight(q) == m { ONE } else { ZERO })
}

/// `i (cos(phi) X + sin(phi) Y)` on the two-level ancilla.
fn ancilla_flip(phi: f64) -> CMatrix {
    (pauli_x() * C64::from(phi.cos()) + pauli_y() * C64::from(phi.sin())) * I
}

/// Block-diagonal operator on qubits (x) 2-level ancilla with the ancilla block
/// chosen per register index.
fn controlled_on_register(n: usize, block: impl Fn(usize) -> CMatrix) -> Result<Operator> {
    check_n(n)?;
    let space = device_space(n, 2)?;
    let mut m = CMatrix::zeros(space.total_dim(), space.total_dim());
    for q in 0..(1 << n) {
        let b = block(q);
        m.view_mut((2 * q, 2 * q), (2, 2)).copy_from(&b);
    }
    Operator::new(space, m)
}

/// `P+ (x) 1 + i P- (x) (cos(phi) X_P + sin(phi) Y_P)`.
pub fn pcf_unitary(n: usize, phi: f64) -> Result<Operator> {
    let flip = ancilla_flip(phi);
    controlled_on_register(n, |q| if weight(q) % 2 == 0 { CMatrix::identity(2, 2) } else { flip.clone() })
}

/// `P+ + e^{i phi} P-`.
pub fn pcp_unitary(n: usize, phi: f64) -> Result<Operator> {
    let odd = C64::from_polar(1.0, phi);
    diagonal_on_qubits(n, |q| if weight(q) % 2 == 0 { ONE } else { odd })
}

/// Four-qubit flip with separate phases for weight-1 and weight-3 registers
/// and the residual phase `chi` left by the two-tone drive.
pub fn modified_pcf_unitary(n: usize, phi1: f64, phi3: f64, chi: f64) -> Result<Operator> {
    if n != 4 {
        return Err(Error::InvalidArgument(format!("modified flip is defined for four qubits, got {n}")));
    }
    let f1 = ancilla_flip(phi1) * C64::from_polar(1.0, chi);
    let f3 = ancilla_flip(phi3) * C64::from_polar(1.0, -chi);
    controlled_on_register(n, |q| match weight(q) {
        1 => f1.clone(),
        3 => f3.clone(),
        _ => CMatrix::identity(2, 2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParityGate {
    Pcf { phi: f64 },
    Pcp { phi: f64 },
    ModifiedPcf { phi1: f64, phi3: f64, chi: f64 },
}

impl ParityGate {
    pub fn unitary(&self, n: usize) -> Result<Operator> {
        match *self {
            ParityGate::Pcf { phi } => pcf_unitary(n, phi),
            ParityGate::Pcp { phi } => pcp_unitary(n, phi),
            ParityGate::ModifiedPcf { phi1, phi3, chi } => modified_pcf_unitary(n, phi1, phi3, chi),
        }
    }
}

/// Kraus operators of the ancilla-mediated parity measurement:
/// `K0 = P+ |0_P><0_P|`, `K1 = P- |1_P><0_P|`.
pub fn parity_kraus(n: usize) -> Result<[Operator; 2]> {
    check_n(n)?;
    let space = device_space(n, 2)?;
    let d = space.total_dim();
    let mut k0 = CMatrix::zeros(d, d);
    let mut k1 = CMatrix::zeros(d, d);
    for q in 0..(1 << n) {
        if weight(q) % 2 == 0 {
            k0[(2 * q, 2 * q)] = ONE;
        } else {
            k1[(2 * q + 1, 2 * q)] = ONE;
        }
    }
    Ok([Operator::new(space.clone(), k0)?, Operator::new(space, k1)?])
}

/// Outcome probabilities of the parity measurement on `state`.
pub fn parity_outcome_probabilities(state: &StateVector) -> Result<[f64; 2]> {
    let n = state.space.modes().len() - 1;
    let k = parity_kraus(n)?;
    let p = |op: &Operator| (&op.matrix * &state.data).norm_squared();
    Ok([p(&k[0]), p(&k[1])])
}

pub fn plus_state(n: usize) -> Result<StateVector> {
    check_n(n)?;
    let d = 1 << n;
    StateVector::new(qubit_space(n)?, CVector::from_element(d, C64::from((d as f64).sqrt().recip())))
}

/// `(|+>^n - i |->^n) / sqrt 2`.
pub fn ghz_target(n: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::InvalidArgument("GHZ target needs at least two qubits".into()));
    }
    let d = 1 << n;
    let amp = (d as f64).sqrt().recip();
    let data = CVector::from_fn(d, |q, _| {
        // <q|->^n carries (-1)^{weight(q)}
        let minus = if weight(q) % 2 == 0 { ONE } else { -ONE };
        (ONE - I * minus) * (amp * FRAC_1_SQRT_2)
    });
    StateVector::new(qubit_space(n)?, data)
}

pub fn hadamard() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ONE, ONE, -ONE]) * C64::from(FRAC_1_SQRT_2)
}

pub fn phase_s() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, I])
}

/// Single-qubit gate acting on qubit `i` of an `n`-qubit register.
pub fn on_qubit(n: usize, i: usize, gate: &CMatrix) -> Result<Operator> {
    let space = qubit_space(n)?;
    space.embed(&format!("q{}", i + 1), gate)
}

/// `H_1 S_1^dagger U_PCP(pi/2) H_1`, which maps `Z_1` onto the register parity:
/// `U^dagger Z_1 U = Z_1 Z_2 ... Z_N`.
pub fn readout_circuit_qubit1(n: usize) -> Result<Operator> {
    let h = on_qubit(n, 0, &hadamard())?;
    let sd = on_qubit(n, 0, &phase_s().adjoint())?;
    let pcp = pcp_unitary(n, std::f64::consts::FRAC_PI_2)?;
    Ok(h.mul(&sd).mul(&pcp).mul(&h))
}

/// Longitudinal spin model. Frequencies in rad/ns.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveModel {
    pub qubit_freq: Vec<f64>,
    pub ancilla_freq: f64,
    pub coupling: f64,
    pub anharmonicity: f64,
    pub ancilla_levels: usize,
}

impl EffectiveModel {
    /// Model in the frame rotating with every qubit and the bare ancilla,
    /// which is what the drive simulations use.
    pub fn rotating(n: usize, coupling: f64, anharmonicity: f64) -> Self {
        Self { qubit_freq: vec![0.0; n], ancilla_freq: 0.0, coupling, anharmonicity, ancilla_levels: 3 }
    }

    pub fn n_qubits(&self) -> usize {
        self.qubit_freq.len()
    }

    /// Ancilla detuning `-(g/2) sum Z_i` for register index `q`.
    pub fn detuning(&self, q: usize) -> f64 {
        let n = self.n_qubits();
        -0.5 * self.coupling * (0..n).map(|i| z_value(n, q, i)).sum::<f64>()
    }
}

/// Diagonal Hamiltonian of qubits and ancilla. The two-level form is
/// `-(w_P + Delta)(Z_P - 1)/2 - sum w_i Z_i / 2`; with three levels the
/// ancilla term becomes `(w_P + Delta) n + (alpha/2) n (n - 1)`.
pub fn effective_h0(model: &EffectiveModel) -> Result<Operator> {
    let n = model.n_qubits();
    check_n(n)?;
    let levels = model.ancilla_levels;
    if !(levels == 2 || levels == 3) {
        return Err(Error::InvalidArgument(format!("ancilla must keep 2 or 3 levels, got {levels}")));
    }
    let space = device_space(n, levels)?;
    let alpha = if levels == 3 { model.anharmonicity } else { 0.0 };
    let diag = CVector::from_fn(space.total_dim(), |k, _| {
        let (q, p) = (k / levels, (k % levels) as f64);
        let qubits: f64 = (0..n).map(|i| -0.5 * model.qubit_freq[i] * z_value(n, q, i)).sum();
        C64::from(qubits + (model.ancilla_freq + model.detuning(q)) * p + 0.5 * alpha * p * (p - 1.0))
    });
    Operator::new(space, CMatrix::from_diagonal(&diag))
}

/// `-(omega/2)(cos(phi) X + sin(phi) Y)`: effective single-qubit drive while
/// the ancilla stays in its ground state.
pub fn single_qubit_drive_generator(omega: f64, phi: f64) -> CMatrix {
    (pauli_x() * C64::from(phi.cos()) + pauli_y() * C64::from(phi.sin())) * C64::from(-omega / 2.0)
}
