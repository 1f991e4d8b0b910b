//! Labeled spectra of the quartic circuit Hamiltonian.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::SymmetricEigen;

use super::params::ghz_to_rad;
use super::quantize::QuarticHamiltonian;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Rwa,
    Sw2,
    Exact,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Rwa => "rwa",
            Method::Sw2 => "sw2",
            Method::Exact => "exact",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rwa" => Ok(Method::Rwa),
            "sw2" => Ok(Method::Sw2),
            "exact" => Ok(Method::Exact),
            _ => Err(Error::InvalidArgument(format!("unknown spectrum method `{s}`"))),
        }
    }
}

/// Occupations `(n_1..n_N; n_P; m_1..m_N)` of a product basis state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub qubits: Vec<u8>,
    pub ancilla: u8,
    pub theta: Vec<u8>,
}

impl Label {
    pub fn ground(n: usize) -> Self {
        Self { qubits: vec![0; n], ancilla: 0, theta: vec![0; n] }
    }

    /// Qubit excitations given as a set of indices, ancilla level `p`.
    pub fn excited(n: usize, qubits: &[usize], p: u8) -> Self {
        let mut l = Self::ground(n);
        for &i in qubits {
            l.qubits[i] = 1;
        }
        l.ancilla = p;
        l
    }

    pub fn theta_excited(n: usize, i: usize) -> Self {
        let mut l = Self::ground(n);
        l.theta[i] = 1;
        l
    }

    fn occupation(&self) -> Vec<usize> {
        self.qubits
            .iter()
            .chain(std::iter::once(&self.ancilla))
            .chain(&self.theta)
            .map(|&x| x as usize)
            .collect()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q: String = self.qubits.iter().map(|d| d.to_string()).collect();
        let t: String = self.theta.iter().map(|d| d.to_string()).collect();
        write!(f, "|{q};{};{t}>", self.ancilla)
    }
}

/// Labels needed for effective-parameter extraction: every qubit bit string
/// with ancilla in `0..=2` and theta modes empty, plus each single theta
/// excitation.
pub fn retained_labels(n: usize) -> Vec<Label> {
    let mut out = Vec::new();
    for bits in 0..(1u32 << n) {
        for p in 0..=2 {
            let mut l = Label::ground(n);
            for i in 0..n {
                l.qubits[i] = ((bits >> (n - 1 - i)) & 1) as u8;
            }
            l.ancilla = p;
            out.push(l);
        }
    }
    out.extend((0..n).map(|i| Label::theta_excited(n, i)));
    out
}

/// A near-degenerate pair skipped in the second-order sum.
#[derive(Debug, Clone, PartialEq)]
pub struct DegeneratePair {
    pub label: Label,
    pub partner: usize,
    pub gap: f64,
    pub coupling: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Largest dimension accepted for exact diagonalization.
    pub dim_cap: usize,
    /// Pairs closer than this (rad/ns) are treated as degenerate.
    pub degeneracy_gap: f64,
    /// Couplings above this (rad/ns) across a degenerate gap are flagged.
    pub coupling_floor: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { dim_cap: 2000, degeneracy_gap: ghz_to_rad(1e-3), coupling_floor: ghz_to_rad(1e-6) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub method: Method,
    /// Energies in rad/ns.
    pub energies: BTreeMap<Label, f64>,
    pub degenerate: Vec<DegeneratePair>,
}

impl SpectrumResult {
    pub fn energy(&self, label: &Label) -> Result<f64> {
        self.energies.get(label).copied().ok_or_else(|| Error::MissingLabel(label.to_string()))
    }
}

fn index_of(h: &QuarticHamiltonian, label: &Label) -> Result<usize> {
    let occ = label.occupation();
    let dims = h.space().dims();
    if occ.len() != dims.len() || occ.iter().zip(&dims).any(|(o, d)| o >= d) {
        return Err(Error::MissingLabel(format!("{label} outside the truncated space")));
    }
    Ok(h.space().index_of(&occ))
}

/// Second-order shifted energy of basis state `alpha`.
fn sw2_energy(h: &QuarticHamiltonian, alpha: usize, opts: &SpectrumOptions, label: &Label, flags: &mut Vec<DegeneratePair>) -> f64 {
    let d = h.diagonal();
    let ea = d[alpha];
    let mut shift = 0.0;
    for (beta, x) in h.offdiagonal_column(alpha) {
        let gap = ea - d[beta];
        if gap.abs() < opts.degeneracy_gap {
            if x.abs() > opts.coupling_floor {
                flags.push(DegeneratePair { label: label.clone(), partner: beta, gap, coupling: x });
            }
            continue;
        }
        shift += x * x / gap;
    }
    ea + shift
}

pub fn spectrum(h: &QuarticHamiltonian, method: Method, labels: &[Label], opts: &SpectrumOptions) -> Result<SpectrumResult> {
    let idx: Vec<usize> = labels.iter().map(|l| index_of(h, l)).collect::<Result<_>>()?;
    let mut energies = BTreeMap::new();
    let mut degenerate = Vec::new();
    match method {
        Method::Rwa => {
            for (l, &a) in labels.iter().zip(&idx) {
                energies.insert(l.clone(), h.diagonal()[a]);
            }
        }
        Method::Sw2 => {
            for (l, &a) in labels.iter().zip(&idx) {
                let e = sw2_energy(h, a, opts, l, &mut degenerate);
                energies.insert(l.clone(), e);
            }
        }
        Method::Exact => {
            if h.dim() > opts.dim_cap {
                return Err(Error::DimensionCap { dim: h.dim(), cap: opts.dim_cap });
            }
            let eig = SymmetricEigen::new(h.dense());
            // greedy maximum-overlap assignment, each eigenvector used once
            let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
            for (li, &a) in idx.iter().enumerate() {
                for k in 0..h.dim() {
                    let w = eig.eigenvectors[(a, k)].powi(2);
                    if w > 1e-3 {
                        candidates.push((w, li, k));
                    }
                }
            }
            candidates.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
            let mut used = vec![false; h.dim()];
            let mut assigned: Vec<Option<usize>> = vec![None; labels.len()];
            for (_, li, k) in candidates {
                if assigned[li].is_none() && !used[k] {
                    assigned[li] = Some(k);
                    used[k] = true;
                }
            }
            for (li, l) in labels.iter().enumerate() {
                let k = assigned[li].ok_or_else(|| Error::MissingLabel(format!("{l} has no dominant eigenvector")))?;
                energies.insert(l.clone(), eig.eigenvalues[k]);
            }
        }
    }
    Ok(SpectrumResult { method, energies, degenerate })
}
