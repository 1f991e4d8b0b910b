//! Quantum channels on the computational subspace (qubits plus ancilla
//! levels 0 and 1).

use rayon::prelude::*;

use super::blocked::BlockedPropagator;
use super::{device_model, rk4_dense, Device, ANCILLA_LEVELS};
use crate::effective::{weight, z_value};
use crate::error::{Error, Result};
use crate::pulses::{DriveProgram, FrameShift};
use crate::qcore::{CMatrix, CVector, DensityMatrix, C64};

/// Images `E(|i><j|)` of all computational matrix units, truncated to the
/// computational subspace. Index `i = 2 q + p` for register `q` and ancilla `p`.
#[derive(Debug, Clone)]
pub struct ProcessMap {
    pub n_qubits: usize,
    pub dim: usize,
    outputs: Vec<CMatrix>,
}

impl ProcessMap {
    pub fn from_outputs(n_qubits: usize, outputs: Vec<CMatrix>) -> Result<Self> {
        let dim = 1usize << (n_qubits + 1);
        if outputs.len() != dim * dim || outputs.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: outputs.len() });
        }
        Ok(Self { n_qubits, dim, outputs })
    }

    /// The channel `rho -> U rho U^dagger`.
    pub fn unitary(n_qubits: usize, u: &CMatrix) -> Result<Self> {
        let dim = 1usize << (n_qubits + 1);
        if u.nrows() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: u.nrows() });
        }
        let outputs = (0..dim * dim)
            .map(|k| {
                let (i, j) = (k / dim, k % dim);
                u.column(i) * u.column(j).adjoint()
            })
            .collect();
        Ok(Self { n_qubits, dim, outputs })
    }

    pub fn output(&self, i: usize, j: usize) -> &CMatrix {
        &self.outputs[i * self.dim + j]
    }

    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.nrows() != self.dim || rho.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: rho.nrows() });
        }
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                if rho[(i, j)].norm() > 0.0 {
                    out += self.output(i, j) * rho[(i, j)];
                }
            }
        }
        Ok(out)
    }

    /// Composition `other ∘ self`.
    pub fn then(&self, other: &ProcessMap) -> Result<ProcessMap> {
        let outputs = self.outputs.iter().map(|m| other.apply(m)).collect::<Result<_>>()?;
        ProcessMap::from_outputs(self.n_qubits, outputs)
    }

    /// Mean population lost from the computational subspace over basis inputs.
    pub fn leakage(&self) -> f64 {
        (0..self.dim).map(|i| 1.0 - self.output(i, i).trace().re).sum::<f64>() / self.dim as f64
    }
}

fn computational_to_full(c: usize) -> usize {
    (c / 2) * ANCILLA_LEVELS + c % 2
}

fn truncate(full: &CMatrix, dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |r, c| full[(computational_to_full(r), computational_to_full(c))])
}

/// Diagonal of `exp(+i H_ac)` with `H_ac = D_P(w) n_P - (D_Q/2) sum_i Z_i`,
/// over the full space with `levels` ancilla levels.
pub fn frame_unitary(n_qubits: usize, frame: &FrameShift, levels: usize) -> Result<CVector> {
    if frame.ancilla_by_weight.len() != n_qubits + 1 {
        return Err(Error::DimensionMismatch { expected: n_qubits + 1, got: frame.ancilla_by_weight.len() });
    }
    let nq = 1usize << n_qubits;
    Ok(CVector::from_fn(nq * levels, |k, _| {
        let (q, p) = (k / levels, k % levels);
        let zsum: f64 = (0..n_qubits).map(|i| z_value(n_qubits, q, i)).sum();
        let phase = frame.ancilla_by_weight[weight(q)] * p as f64 - 0.5 * frame.qubit * zsum;
        C64::from_polar(1.0, phase)
    }))
}

fn conjugate_diag(m: &CMatrix, v: &CVector) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| v[r] * m[(r, c)] * v[c].conj())
}

/// Conjugates every output of the channel by the terminal frame rotation.
pub fn frame_correction(map: &ProcessMap, frame: &FrameShift) -> Result<ProcessMap> {
    let v = frame_unitary(map.n_qubits, frame, 2)?;
    let outputs = map.outputs.iter().map(|m| conjugate_diag(m, &v)).collect();
    ProcessMap::from_outputs(map.n_qubits, outputs)
}

/// Applies the frame rotation to a state with three ancilla levels.
pub fn apply_frame_to_state(rho: &DensityMatrix, n_qubits: usize, frame: &FrameShift) -> Result<DensityMatrix> {
    let v = frame_unitary(n_qubits, frame, ANCILLA_LEVELS)?;
    if v.len() != rho.matrix.nrows() {
        return Err(Error::DimensionMismatch { expected: v.len(), got: rho.matrix.nrows() });
    }
    Ok(DensityMatrix::new_unchecked(rho.space.clone(), conjugate_diag(&rho.matrix, &v)))
}

/// Diagonal of `exp(+i H_0 T)` for the undriven device Hamiltonian over the
/// full space.
pub fn static_frame_unitary(device: &Device, duration: f64) -> CVector {
    let nq = 1usize << device.n_qubits();
    CVector::from_fn(nq * ANCILLA_LEVELS, |k, _| {
        C64::from_polar(1.0, device.static_energy(k / ANCILLA_LEVELS, k % ANCILLA_LEVELS) * duration)
    })
}

/// Moves a state from the rotating frame into the interaction picture of
/// the undriven device Hamiltonian.
pub fn to_interaction_frame(rho: &DensityMatrix, device: &Device, duration: f64) -> Result<DensityMatrix> {
    let v = static_frame_unitary(device, duration);
    if v.len() != rho.matrix.nrows() {
        return Err(Error::DimensionMismatch { expected: v.len(), got: rho.matrix.nrows() });
    }
    Ok(DensityMatrix::new_unchecked(rho.space.clone(), conjugate_diag(&rho.matrix, &v)))
}

fn unit(d: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(i, j)] = C64::from(1.0);
    m
}

/// Channel of a drive program in the interaction picture of the undriven
/// device, from the blocked propagator with matrix units `|i><j|` as
/// inputs. Register pairs run in parallel.
pub fn simulate_channel(device: &Device, program: &DriveProgram) -> Result<ProcessMap> {
    let n = device.n_qubits();
    let nq = 1usize << n;
    let dim = 2 * nq;
    let full = nq * ANCILLA_LEVELS;
    let frame = static_frame_unitary(device, program.duration());
    let pairs: Vec<(usize, usize)> = (0..nq).flat_map(|a| (a..nq).map(move |b| (a, b))).collect();
    let results: Vec<((usize, usize), Vec<CMatrix>)> = pairs
        .par_iter()
        .map(|&(qa, qb)| {
            let prop = BlockedPropagator::new(device, program, &[(qa, qb)])?;
            let outs = (0..4)
                .map(|k| {
                    let (pa, pb) = (k / 2, k % 2);
                    let rho = unit(full, qa * ANCILLA_LEVELS + pa, qb * ANCILLA_LEVELS + pb);
                    Ok(truncate(&conjugate_diag(&prop.propagate_matrix(&rho)?, &frame), dim))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(((qa, qb), outs))
        })
        .collect::<Result<_>>()?;
    let mut outputs = vec![CMatrix::zeros(dim, dim); dim * dim];
    for ((qa, qb), outs) in results {
        for (k, m) in outs.into_iter().enumerate() {
            let (i, j) = (2 * qa + k / 2, 2 * qb + k % 2);
            outputs[j * dim + i] = m.adjoint();
            outputs[i * dim + j] = m;
        }
    }
    ProcessMap::from_outputs(n, outputs)
}

/// Channel of a drive program in the interaction picture of the undriven
/// device, from dense RK4 propagation of the Hermitian
/// operator basis `{|i><i|, (|i><j| + |j><i|)/√2, i(|i><j| - |j><i|)/√2}`.
pub fn simulate_channel_dense(device: &Device, program: &DriveProgram) -> Result<ProcessMap> {
    let model = device_model(device, program)?;
    let n = device.n_qubits();
    let dim = 1usize << (n + 1);
    let full = model.space.total_dim();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let frame = static_frame_unitary(device, program.duration());
    let evolve = |m: CMatrix| -> Result<CMatrix> { Ok(truncate(&conjugate_diag(&rk4_dense(&m, &model, true, false)?.0, &frame), dim)) };
    let pairs: Vec<(usize, usize)> = (0..dim).flat_map(|a| (a..dim).map(move |b| (a, b))).collect();
    let results: Vec<(usize, usize, CMatrix)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (fi, fj) = (computational_to_full(i), computational_to_full(j));
            if i == j {
                return Ok((i, j, evolve(unit(full, fi, fi))?));
            }
            let sym = (unit(full, fi, fj) + unit(full, fj, fi)) * C64::from(s);
            let anti = (unit(full, fi, fj) - unit(full, fj, fi)) * C64::new(0.0, s);
            let (es, ea) = (evolve(sym)?, evolve(anti)?);
            Ok((i, j, (es - ea * C64::new(0.0, 1.0)) * C64::from(s)))
        })
        .collect::<Result<_>>()?;
    let mut outputs = vec![CMatrix::zeros(dim, dim); dim * dim];
    for (i, j, m) in results {
        outputs[j * dim + i] = m.adjoint();
        outputs[i * dim + j] = m;
    }
    ProcessMap::from_outputs(n, outputs)
}
