//! Propagation that exploits a qubit-diagonal Hamiltonian.
//!
//! The density matrix is split into ancilla blocks `rho_{q q'}` labelled by
//! a pair of qubit registers. Dephasing of the qubits scales a block, and
//! qubit relaxation moves weight from `(q + e_i, q' + e_i)` into `(q, q')`,
//! so only blocks reachable from the initial data by clearing shared bits
//! are ever populated.

use std::collections::BTreeMap;

use nalgebra::Matrix3;

use super::{Device, ANCILLA_LEVELS, TRACE_TOLERANCE};
use crate::error::{Error, Result};
use crate::pulses::DriveProgram;
use crate::qcore::{CMatrix, DensityMatrix, C64};

type Block = Matrix3<C64>;

/// Precomputed data for propagating a fixed set of blocks.
#[derive(Debug, Clone)]
pub struct BlockedPropagator {
    n_qubits: usize,
    pairs: Vec<(usize, usize)>,
    /// Static ancilla Hamiltonian of each register.
    static_h: Vec<Block>,
    /// Scalar decay of each block from qubit noise.
    decay: Vec<f64>,
    /// Blocks feeding each block through qubit relaxation.
    sources: Vec<Vec<usize>>,
    gamma_relax: f64,
    gamma_phi: f64,
    b: Block,
    bdag: Block,
    n_op: Block,
    coefficients: Vec<C64>,
    dt: f64,
    steps: usize,
}

fn ancilla_ops() -> (Block, Block) {
    let mut b = Block::zeros();
    b[(0, 1)] = C64::from(1.0);
    b[(1, 2)] = C64::from(2f64.sqrt());
    let n = Block::from_diagonal(&nalgebra::Vector3::new(C64::from(0.0), C64::from(1.0), C64::from(2.0)));
    (b, n)
}

/// Closes `seeds` under clearing any bit set in both registers.
fn reachable_pairs(seeds: &[(usize, usize)], n_qubits: usize) -> Vec<(usize, usize)> {
    let mut seen: Vec<(usize, usize)> = seeds.to_vec();
    let mut k = 0;
    while k < seen.len() {
        let (q, qp) = seen[k];
        for i in 0..n_qubits {
            let bit = 1 << i;
            if q & bit != 0 && qp & bit != 0 {
                let next = (q & !bit, qp & !bit);
                if !seen.contains(&next) {
                    seen.push(next);
                }
            }
        }
        k += 1;
    }
    seen.sort_unstable();
    seen
}

impl BlockedPropagator {
    /// Propagator for the blocks reachable from `seeds`.
    pub fn new(device: &Device, program: &DriveProgram, seeds: &[(usize, usize)]) -> Result<Self> {
        let n = device.n_qubits();
        if program.n_qubits != n {
            return Err(Error::DimensionMismatch { expected: n, got: program.n_qubits });
        }
        let nq = 1usize << n;
        if let Some(&(q, qp)) = seeds.iter().find(|&&(q, qp)| q >= nq || qp >= nq) {
            return Err(Error::InvalidArgument(format!("register pair ({q}, {qp}) outside a {n}-qubit device")));
        }
        let pairs = reachable_pairs(seeds, n);
        let index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let (b, n_op) = ancilla_ops();
        let static_h = (0..nq)
            .map(|q| {
                Block::from_diagonal(&nalgebra::Vector3::from_fn(|p, _| C64::from(device.static_energy(q, p))))
            })
            .collect();
        let (g1, gp) = (device.noise.gamma_relax(), device.noise.gamma_phi());
        let bit = |q: usize, i: usize| ((q >> i) & 1) as f64;
        let mut decay = Vec::with_capacity(pairs.len());
        let mut sources = Vec::with_capacity(pairs.len());
        for &(q, qp) in &pairs {
            let mut d = 0.0;
            let mut src = Vec::new();
            for i in 0..n {
                let (a, c) = (bit(q, i), bit(qp, i));
                d += 0.5 * g1 * (a + c) + 0.5 * gp * (a - c).powi(2);
                let flag = 1 << i;
                if q & flag == 0 && qp & flag == 0 {
                    if let Some(&s) = index.get(&(q | flag, qp | flag)) {
                        src.push(s);
                    }
                }
            }
            decay.push(d);
            sources.push(src);
        }
        let coefficients = (0..program.grid.samples()).map(|k| program.coefficient(k)).collect();
        Ok(Self {
            n_qubits: n,
            pairs,
            static_h,
            decay,
            sources,
            gamma_relax: g1,
            gamma_phi: gp,
            bdag: b.adjoint(),
            b,
            n_op,
            coefficients,
            dt: program.grid.dt(),
            steps: program.grid.steps,
        })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    fn position(&self, pair: (usize, usize)) -> Option<usize> {
        self.pairs.binary_search(&pair).ok()
    }

    fn rhs(&self, k: usize, state: &[Block], out: &mut [Block]) {
        let c = self.coefficients[k];
        let drive = self.bdag * c + self.b * c.conj();
        let minus_i = C64::new(0.0, -1.0);
        let (g1, gp) = (C64::from(self.gamma_relax), C64::from(self.gamma_phi));
        let half = C64::from(0.5);
        let bdb = self.bdag * self.b;
        let n2 = self.n_op * self.n_op;
        for (idx, &(q, qp)) in self.pairs.iter().enumerate() {
            let rho = &state[idx];
            let hq = self.static_h[q] + drive;
            let hqp = self.static_h[qp] + drive;
            let mut d = (hq * rho - rho * hqp) * minus_i;
            if self.gamma_relax > 0.0 {
                d += (self.b * rho * self.bdag - (bdb * rho + rho * bdb) * half) * g1;
            }
            if self.gamma_phi > 0.0 {
                d += (self.n_op * rho * self.n_op - (n2 * rho + rho * n2) * half) * gp;
            }
            d -= rho * C64::from(self.decay[idx]);
            for &s in &self.sources[idx] {
                d += state[s] * g1;
            }
            out[idx] = d;
        }
    }

    /// RK4 propagation of the blocks over the whole program.
    pub fn propagate(&self, mut state: Vec<Block>) -> Vec<Block> {
        let m = state.len();
        let mut k1 = vec![Block::zeros(); m];
        let mut k2 = k1.clone();
        let mut k3 = k1.clone();
        let mut k4 = k1.clone();
        let mut tmp = k1.clone();
        let dt = C64::from(self.dt);
        let h = C64::from(0.5 * self.dt);
        for step in 0..self.steps {
            self.rhs(2 * step, &state, &mut k1);
            for i in 0..m {
                tmp[i] = state[i] + k1[i] * h;
            }
            self.rhs(2 * step + 1, &tmp, &mut k2);
            for i in 0..m {
                tmp[i] = state[i] + k2[i] * h;
            }
            self.rhs(2 * step + 1, &tmp, &mut k3);
            for i in 0..m {
                tmp[i] = state[i] + k3[i] * dt;
            }
            self.rhs(2 * step + 2, &tmp, &mut k4);
            for i in 0..m {
                state[i] += (k1[i] + (k2[i] + k3[i]) * C64::from(2.0) + k4[i]) * (dt / C64::from(6.0));
            }
        }
        state
    }

    /// Splits a full density matrix into blocks, propagates them and
    /// reassembles the result. Blocks outside the propagator's set must be zero.
    pub fn propagate_matrix(&self, rho: &CMatrix) -> Result<CMatrix> {
        let nq = 1usize << self.n_qubits;
        let d = nq * ANCILLA_LEVELS;
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: rho.nrows() });
        }
        let mut state = vec![Block::zeros(); self.pairs.len()];
        for q in 0..nq {
            for qp in 0..nq {
                let block = rho.fixed_view::<3, 3>(q * ANCILLA_LEVELS, qp * ANCILLA_LEVELS).into_owned();
                match self.position((q, qp)) {
                    Some(i) => state[i] = block,
                    None if block.iter().any(|z| z.norm() > 0.0) => {
                        return Err(Error::InvalidArgument(format!("block ({q}, {qp}) is not tracked")))
                    }
                    None => {}
                }
            }
        }
        let out = self.propagate(state);
        let mut result = CMatrix::zeros(d, d);
        for (i, &(q, qp)) in self.pairs.iter().enumerate() {
            result.fixed_view_mut::<3, 3>(q * ANCILLA_LEVELS, qp * ANCILLA_LEVELS).copy_from(&out[i]);
        }
        Ok(result)
    }
}

/// Blocked propagation of a density matrix over a drive program.
pub fn evolve_blocked(rho0: &DensityMatrix, device: &Device, program: &DriveProgram) -> Result<DensityMatrix> {
    let space = device.space()?;
    if rho0.space != space {
        return Err(Error::InvalidArgument("initial state does not match the device space".into()));
    }
    let nq = 1usize << device.n_qubits();
    let seeds: Vec<(usize, usize)> = (0..nq)
        .flat_map(|q| (0..nq).map(move |qp| (q, qp)))
        .filter(|&(q, qp)| {
            (0..ANCILLA_LEVELS).any(|a| {
                (0..ANCILLA_LEVELS).any(|b| rho0.matrix[(q * ANCILLA_LEVELS + a, qp * ANCILLA_LEVELS + b)].norm() > 0.0)
            })
        })
        .collect();
    let prop = BlockedPropagator::new(device, program, &seeds)?;
    let out = prop.propagate_matrix(&rho0.matrix)?;
    let drift = (out.trace() - rho0.matrix.trace()).norm();
    if drift > TRACE_TOLERANCE {
        return Err(Error::TraceDrift { drift, bound: TRACE_TOLERANCE });
    }
    let out = (&out + out.adjoint()) * C64::from(0.5);
    Ok(DensityMatrix::new_unchecked(space, out))
}
