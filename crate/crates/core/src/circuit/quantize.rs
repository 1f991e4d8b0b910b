//! Promotion of the Taylor-expanded circuit Hamiltonian to truncated
//! number-basis operators.

use nalgebra::DMatrix;

use super::params::{charging_energies, CircuitParams};
use super::potential::{n_vars, potential_minimum, potential_series, Polynomial};
use crate::error::{Error, Result};
use crate::qcore::{HilbertSpace, ModeSpec};

/// Extra levels carried when forming powers of `phi` before truncating, so
/// every kept matrix element of `phi^k` (k <= 4) is exact.
const POWER_PADDING: usize = 4;

/// Levels kept per mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    pub qubit: usize,
    pub ancilla: usize,
    pub theta: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Self { qubit: 4, ancilla: 5, theta: 3 }
    }
}

impl Truncation {
    pub fn dims(&self, n: usize) -> Vec<usize> {
        let mut d = vec![self.qubit; n];
        d.push(self.ancilla);
        d.extend(std::iter::repeat(self.theta).take(n));
        d
    }
}

/// Harmonic data of one circuit mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeInfo {
    pub label: String,
    /// Kinetic coefficient `E_C` in `E_C q^2` (rad/ns).
    pub charging: f64,
    /// Quadratic stiffness `k` in `k/2 phi^2` (rad/ns).
    pub stiffness: f64,
    /// `sqrt(2 k E_C)`.
    pub frequency: f64,
    /// `sqrt(2 E_C / k)`.
    pub impedance: f64,
}

/// Product of powers of single-mode phase operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: f64,
    /// `(mode, power)` with `power` in `1..=4`.
    pub factors: Vec<(usize, usize)>,
}

/// Nonzero entries of one column of a local matrix.
type SparseColumn = Vec<(usize, f64)>;

#[derive(Debug, Clone)]
pub struct QuarticHamiltonian {
    space: HilbertSpace,
    modes: Vec<ModeInfo>,
    terms: Vec<Term>,
    /// `phi_cols[m][p][n]`: column `n` of `phi_m^p`.
    phi_cols: Vec<Vec<Vec<SparseColumn>>>,
    diag: Vec<f64>,
    offdiag_scale: f64,
}

fn phi_powers(dim: usize, impedance: f64) -> Vec<DMatrix<f64>> {
    let big = dim + POWER_PADDING;
    let amp = (impedance / 2.0).sqrt();
    let phi = DMatrix::from_fn(big, big, |i, j| {
        if i + 1 == j {
            amp * (j as f64).sqrt()
        } else if j + 1 == i {
            amp * (i as f64).sqrt()
        } else {
            0.0
        }
    });
    let mut out = vec![DMatrix::identity(big, big)];
    for p in 1..=4 {
        let next = &out[p - 1] * &phi;
        out.push(next);
    }
    out.into_iter().map(|m| m.view((0, 0), (dim, dim)).into_owned()).collect()
}

fn columns(m: &DMatrix<f64>) -> Vec<SparseColumn> {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).filter(|&i| m[(i, j)] != 0.0).map(|i| (i, m[(i, j)])).collect())
        .collect()
}

impl QuarticHamiltonian {
    /// Builds the Hamiltonian `sum_m E_C,m q_m^2 + V(phi)` from a potential
    /// polynomial. Pure single-mode quadratic monomials set the harmonic basis;
    /// every other non-constant monomial is kept as a term.
    pub fn from_polynomial(labels: &[String], charging: &[f64], poly: &Polynomial, dims: &[usize]) -> Result<Self> {
        let m = labels.len();
        if charging.len() != m || dims.len() != m || poly.nvars() != m {
            return Err(Error::DimensionMismatch { expected: m, got: charging.len().min(dims.len()).min(poly.nvars()) });
        }
        let space = HilbertSpace::compose(labels.iter().zip(dims).map(|(l, &d)| ModeSpec::new(l.clone(), d)).collect())?;
        let mut modes = Vec::with_capacity(m);
        for v in 0..m {
            let mut e = vec![0u8; m];
            e[v] = 2;
            let k = 2.0 * poly.coefficient(&e);
            if !(k > 0.0) {
                return Err(Error::NotPositiveDefinite { mode: labels[v].clone(), coefficient: k });
            }
            if !(charging[v] > 0.0) {
                return Err(Error::InvalidArgument(format!("charging energy of `{}` must be positive", labels[v])));
            }
            modes.push(ModeInfo {
                label: labels[v].clone(),
                charging: charging[v],
                stiffness: k,
                frequency: (2.0 * k * charging[v]).sqrt(),
                impedance: (2.0 * charging[v] / k).sqrt(),
            });
        }
        let mut terms = Vec::new();
        for (e, c) in poly.iter() {
            let order: u32 = e.iter().map(|&x| x as u32).sum();
            let single_quadratic = order == 2 && e.iter().filter(|&&x| x > 0).count() == 1;
            if order == 0 || single_quadratic || c == 0.0 {
                continue;
            }
            if e.iter().any(|&x| x > 4) {
                return Err(Error::InvalidArgument("monomial power above 4".into()));
            }
            let factors = e.iter().enumerate().filter(|(_, &x)| x > 0).map(|(v, &x)| (v, x as usize)).collect();
            terms.push(Term { coeff: c, factors });
        }
        let phi_cols = modes
            .iter()
            .zip(dims)
            .map(|(md, &d)| phi_powers(d, md.impedance).iter().map(columns).collect())
            .collect();
        let mut h = Self { space, modes, terms, phi_cols, diag: Vec::new(), offdiag_scale: 1.0 };
        h.diag = h.compute_diagonal();
        Ok(h)
    }

    fn local_diag(&self, mode: usize, power: usize, n: usize) -> f64 {
        self.phi_cols[mode][power][n].iter().find(|(i, _)| *i == n).map_or(0.0, |(_, v)| *v)
    }

    fn compute_diagonal(&self) -> Vec<f64> {
        let dims = self.space.dims();
        let total = self.space.total_dim();
        let mut occ = vec![0usize; dims.len()];
        let mut out = Vec::with_capacity(total);
        for _ in 0..total {
            let mut e: f64 = self.modes.iter().zip(&occ).map(|(md, &n)| md.frequency * (n as f64 + 0.5)).sum();
            for t in &self.terms {
                e += t.coeff * t.factors.iter().map(|&(mo, p)| self.local_diag(mo, p, occ[mo])).product::<f64>();
            }
            out.push(e);
            // advance the mixed-radix counter, last mode fastest
            for k in (0..dims.len()).rev() {
                occ[k] += 1;
                if occ[k] < dims[k] {
                    break;
                }
                occ[k] = 0;
            }
        }
        out
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn modes(&self) -> &[ModeInfo] {
        &self.modes
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    /// Diagonal part `H_D` in the product number basis.
    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Copy with the off-diagonal part `H_X` multiplied by `s`.
    pub fn with_offdiagonal_scale(&self, s: f64) -> Self {
        let mut h = self.clone();
        h.offdiag_scale *= s;
        h
    }

    /// Copy keeping only single-mode terms (every mode decoupled).
    pub fn without_cross_terms(&self) -> Self {
        let mut h = self.clone();
        h.terms.retain(|t| t.factors.len() == 1);
        h.diag = h.compute_diagonal();
        h
    }

    /// Nonzero off-diagonal entries `H_X[beta, alpha]` of column `alpha`,
    /// sorted by row.
    pub fn offdiagonal_column(&self, alpha: usize) -> Vec<(usize, f64)> {
        let dims = self.space.dims();
        let occ = self.space.occupation_of(alpha);
        let strides: Vec<usize> = (0..dims.len()).map(|k| dims[k + 1..].iter().product()).collect();
        let mut acc: Vec<(usize, f64)> = Vec::new();
        for t in &self.terms {
            // expand the product of sparse local columns
            let mut partial: Vec<(usize, f64)> = vec![(alpha, t.coeff)];
            for &(mo, p) in &t.factors {
                let col = &self.phi_cols[mo][p][occ[mo]];
                let base = occ[mo] * strides[mo];
                let mut next = Vec::with_capacity(partial.len() * col.len());
                for &(idx, amp) in &partial {
                    for &(row, v) in col {
                        next.push((idx - base + row * strides[mo], amp * v));
                    }
                }
                partial = next;
            }
            acc.extend(partial.into_iter().filter(|&(i, _)| i != alpha));
        }
        acc.sort_by_key(|&(i, _)| i);
        let mut out: Vec<(usize, f64)> = Vec::with_capacity(acc.len());
        for (i, v) in acc {
            match out.last_mut() {
                Some((j, w)) if *j == i => *w += v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|&(_, v)| v != 0.0);
        out.iter_mut().for_each(|(_, v)| *v *= self.offdiag_scale);
        out
    }

    /// Full real symmetric matrix `H_D + H_X`.
    pub fn dense(&self) -> DMatrix<f64> {
        let d = self.dim();
        let mut h = DMatrix::zeros(d, d);
        for a in 0..d {
            h[(a, a)] = self.diag[a];
            for (b, v) in self.offdiagonal_column(a) {
                h[(b, a)] = v;
            }
        }
        // symmetrize rounding differences between the two triangles
        (&h + h.transpose()) * 0.5
    }
}

pub fn mode_labels(n: usize) -> Vec<String> {
    let mut l: Vec<String> = (1..=n).map(|i| format!("q{i}")).collect();
    l.push("P".into());
    l.extend((1..=n).map(|i| format!("theta{i}")));
    l
}

/// Quantizes the device around `point` (phase-space origin when `None`).
pub fn quantize_at(params: &CircuitParams, point: Option<&[f64]>, truncation: Truncation) -> Result<QuarticHamiltonian> {
    let n = params.n_qubits();
    let origin = vec![0.0; n_vars(n)];
    let poly = potential_series(params, point.unwrap_or(&origin))?;
    let ec = charging_energies(params)?;
    let mut charging = ec.qubit.clone();
    charging.push(ec.ancilla);
    charging.extend(&ec.theta);
    QuarticHamiltonian::from_polynomial(&mode_labels(n), &charging, &poly, &truncation.dims(n))
}

/// Quantizes around the origin for ring-symmetric devices and around the
/// numerically located potential minimum otherwise.
pub fn quantize(params: &CircuitParams, truncation: Truncation) -> Result<QuarticHamiltonian> {
    if params.is_ring_symmetric() {
        quantize_at(params, None, truncation)
    } else {
        let x0 = potential_minimum(params)?;
        quantize_at(params, Some(&x0), truncation)
    }
}
