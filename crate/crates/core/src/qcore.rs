//! Composite Hilbert-space bookkeeping and dense complex linear algebra.
//!
//! Modes are laid out in declaration order with the first mode as the most
//! significant digit of the flat basis index, so `|n_0, n_1, ...>` maps to
//! `((n_0 * d_1) + n_1) * d_2 + ...`.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

const HERMITIAN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeSpec {
    pub label: String,
    pub dim: usize,
}

impl ModeSpec {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        Self { label: label.into(), dim }
    }

    pub fn qubit(label: impl Into<String>) -> Self {
        Self::new(label, 2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSpace {
    modes: Vec<ModeSpec>,
    total_dim: usize,
}

impl HilbertSpace {
    pub fn compose(modes: Vec<ModeSpec>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut seen = HashSet::new();
        for m in &modes {
            if m.dim == 0 {
                return Err(Error::ZeroDimension(m.label.clone()));
            }
            if !seen.insert(m.label.as_str()) {
                return Err(Error::DuplicateLabel(m.label.clone()));
            }
        }
        let total_dim = modes.iter().map(|m| m.dim).product();
        Ok(Self { modes, total_dim })
    }

    pub fn modes(&self) -> &[ModeSpec] {
        &self.modes
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn dims(&self) -> Vec<usize> {
        self.modes.iter().map(|m| m.dim).collect()
    }

    pub fn mode_index(&self, label: &str) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| m.label == label)
            .ok_or_else(|| Error::UnknownMode(label.to_string()))
    }

    /// Flat basis index of a per-mode occupation list.
    pub fn index_of(&self, occupation: &[usize]) -> usize {
        debug_assert_eq!(occupation.len(), self.modes.len());
        occupation
            .iter()
            .zip(&self.modes)
            .fold(0, |acc, (&n, m)| acc * m.dim + n)
    }

    /// Inverse of [`HilbertSpace::index_of`].
    pub fn occupation_of(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.modes.len()];
        for (slot, m) in occ.iter_mut().zip(&self.modes).rev() {
            *slot = index % m.dim;
            index /= m.dim;
        }
        occ
    }

    /// Places `local` on the named mode with identities elsewhere.
    pub fn embed(&self, label: &str, local: &CMatrix) -> Result<Operator> {
        let k = self.mode_index(label)?;
        let dim = self.modes[k].dim;
        if local.nrows() != dim || local.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: local.nrows() });
        }
        let left: usize = self.modes[..k].iter().map(|m| m.dim).product();
        let right: usize = self.modes[k + 1..].iter().map(|m| m.dim).product();
        let matrix = CMatrix::identity(left, left)
            .kronecker(local)
            .kronecker(&CMatrix::identity(right, right));
        Ok(Operator { space: self.clone(), matrix })
    }

    pub fn identity(&self) -> Operator {
        Operator {
            space: self.clone(),
            matrix: CMatrix::identity(self.total_dim, self.total_dim),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    pub space: HilbertSpace,
    pub matrix: CMatrix,
}

impl Operator {
    pub fn new(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        let d = space.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: matrix.nrows() });
        }
        Ok(Self { space, matrix })
    }

    pub fn dagger(&self) -> Self {
        Self { space: self.space.clone(), matrix: self.matrix.adjoint() }
    }

    pub fn mul(&self, other: &Operator) -> Self {
        Self { space: self.space.clone(), matrix: &self.matrix * &other.matrix }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { space: self.space.clone(), matrix: self.matrix.scale_complex(s) }
    }

    pub fn add(&self, other: &Operator) -> Self {
        Self { space: self.space.clone(), matrix: &self.matrix + &other.matrix }
    }
}

trait ScaleComplex {
    fn scale_complex(&self, s: C64) -> Self;
}

impl ScaleComplex for CMatrix {
    fn scale_complex(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub space: HilbertSpace,
    pub data: CVector,
}

impl StateVector {
    pub fn new(space: HilbertSpace, data: CVector) -> Result<Self> {
        if data.len() != space.total_dim() {
            return Err(Error::DimensionMismatch { expected: space.total_dim(), got: data.len() });
        }
        Ok(Self { space, data })
    }

    pub fn basis(space: HilbertSpace, index: usize) -> Self {
        let mut data = CVector::zeros(space.total_dim());
        data[index] = ONE;
        Self { space, data }
    }

    pub fn norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.data.norm();
        self.data /= C64::from(n);
        self
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            space: self.space.clone(),
            matrix: &self.data * self.data.adjoint(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub space: HilbertSpace,
    pub matrix: CMatrix,
}

impl DensityMatrix {
    /// Wraps a matrix after checking Hermiticity, unit trace and positivity at 1e-9.
    pub fn new(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        let d = space.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: matrix.nrows() });
        }
        let rho = Self { space, matrix };
        rho.validate(HERMITIAN_TOL)?;
        Ok(rho)
    }

    /// Wraps without validation; used for intermediate channel outputs.
    pub fn new_unchecked(space: HilbertSpace, matrix: CMatrix) -> Self {
        Self { space, matrix }
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let dev = hermitian_deviation(&self.matrix);
        if dev > tol {
            return Err(Error::NotHermitian(dev));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > tol {
            return Err(Error::InvalidArgument(format!("density matrix trace {tr} != 1")));
        }
        let (evals, _) = eig_hermitian(&self.matrix)?;
        if evals[0] < -tol {
            return Err(Error::InvalidArgument(format!(
                "density matrix has negative eigenvalue {:e}",
                evals[0]
            )));
        }
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// Truncated lowering operator with `sqrt(n)` on the first superdiagonal.
pub fn ladder(dim: usize) -> Result<CMatrix> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!("ladder operator needs dim >= 2, got {dim}")));
    }
    let mut b = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        b[(n - 1, n)] = C64::from((n as f64).sqrt());
    }
    Ok(b)
}

pub fn number_op(dim: usize) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_fn(dim, |n, _| C64::from(n as f64)))
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Largest entry modulus of `U^dagger U - 1`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let p = u.adjoint() * u;
    let mut dev: f64 = 0.0;
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            let target = if i == j { ONE } else { ZERO };
            dev = dev.max((p[(i, j)] - target).norm());
        }
    }
    dev
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending and
/// eigenvectors stored as matching columns.
pub fn eig_hermitian(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let dev = hermitian_deviation(m);
    if dev > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(dev));
    }
    let sym = (m + m.adjoint()).map(|z| z * 0.5);
    let mut eig = sym.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        // The QR sweep can underflow on large clusters of near-zero eigenvalues.
        let n = sym.nrows();
        eig = (sym + CMatrix::identity(n, n) * C64::from(scale)).symmetric_eigen();
        eig.eigenvalues.iter_mut().for_each(|v| *v -= scale);
        if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(Error::Convergence("hermitian eigendecomposition".into()));
        }
    }
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(m.nrows(), m.ncols());
    for (col, &k) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(k));
    }
    Ok((values, vectors))
}

/// Hermitian matrix function `f(A)` through the spectral decomposition.
pub fn hermitian_map(m: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let (vals, vecs) = eig_hermitian(m)?;
    let diag = CMatrix::from_diagonal(&CVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| C64::from(f(v))),
    ));
    Ok(&vecs * diag * vecs.adjoint())
}

/// Reduced state on the kept modes, in their declared order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[&str]) -> Result<DensityMatrix> {
    let space = &rho.space;
    let mut keep_idx = Vec::with_capacity(keep.len());
    for label in keep {
        keep_idx.push(space.mode_index(label)?);
    }
    keep_idx.sort_unstable();
    keep_idx.dedup();
    let kept_modes: Vec<ModeSpec> = keep_idx.iter().map(|&k| space.modes()[k].clone()).collect();
    let reduced_space = HilbertSpace::compose(kept_modes)?;
    let traced_idx: Vec<usize> = (0..space.modes().len()).filter(|k| !keep_idx.contains(k)).collect();
    let dims = space.dims();
    let dr = reduced_space.total_dim();
    let mut out = CMatrix::zeros(dr, dr);

    let traced_dims: Vec<usize> = traced_idx.iter().map(|&k| dims[k]).collect();
    let n_traced: usize = traced_dims.iter().product();
    let kept_dims: Vec<usize> = keep_idx.iter().map(|&k| dims[k]).collect();

    let split = |mut idx: usize, ds: &[usize]| -> Vec<usize> {
        let mut v = vec![0; ds.len()];
        for (slot, d) in v.iter_mut().zip(ds).rev() {
            *slot = idx % d;
            idx /= d;
        }
        v
    };

    let mut occ = vec![0usize; dims.len()];
    for a in 0..dr {
        let ka = split(a, &kept_dims);
        for b in 0..dr {
            let kb = split(b, &kept_dims);
            let mut acc = ZERO;
            for t in 0..n_traced {
                let tt = split(t, &traced_dims);
                for (slot, &k) in keep_idx.iter().enumerate() {
                    occ[k] = ka[slot];
                }
                for (slot, &k) in traced_idx.iter().enumerate() {
                    occ[k] = tt[slot];
                }
                let i = space.index_of(&occ);
                for (slot, &k) in keep_idx.iter().enumerate() {
                    occ[k] = kb[slot];
                }
                let j = space.index_of(&occ);
                acc += rho.matrix[(i, j)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(DensityMatrix::new_unchecked(reduced_space, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMatrix {
        let a = CMatrix::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        (&a + a.adjoint()).map(|z| z * 0.5)
    }

    fn random_density(n: usize, rng: &mut impl Rng) -> CMatrix {
        let a = CMatrix::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let p = &a * a.adjoint();
        let tr = p.trace();
        p.map(|z| z / tr)
    }

    fn two_qubit_ancilla() -> HilbertSpace {
        HilbertSpace::compose(vec![ModeSpec::qubit("q1"), ModeSpec::qubit("q2"), ModeSpec::new("p", 3)]).unwrap()
    }

    #[test]
    fn compose_dimensions() {
        assert_eq!(two_qubit_ancilla().total_dim(), 12);
        assert_eq!(HilbertSpace::compose(vec![ModeSpec::new("p", 3)]).unwrap().total_dim(), 3);
        let mut modes: Vec<_> = (1..=4).map(|i| ModeSpec::qubit(format!("q{i}"))).collect();
        modes.push(ModeSpec::new("p", 3));
        assert_eq!(HilbertSpace::compose(modes).unwrap().total_dim(), 48);
    }

    #[test]
    fn compose_errors() {
        assert!(matches!(
            HilbertSpace::compose(vec![ModeSpec::qubit("a"), ModeSpec::qubit("a")]),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(HilbertSpace::compose(vec![ModeSpec::new("a", 0)]), Err(Error::ZeroDimension(_))));
        assert!(matches!(HilbertSpace::compose(vec![]), Err(Error::EmptySpace)));
    }

    #[test]
    fn embed_z_pattern() {
        let s = two_qubit_ancilla();
        let z1 = s.embed("q1", &pauli_z()).unwrap();
        for i in 0..12 {
            let expected = if s.occupation_of(i)[0] == 0 { 1.0 } else { -1.0 };
            assert_eq!(z1.matrix[(i, i)], C64::from(expected));
            for j in 0..12 {
                if i != j {
                    assert_eq!(z1.matrix[(i, j)], ZERO);
                }
            }
        }
        let id = s.embed("p", &CMatrix::identity(3, 3)).unwrap();
        assert_eq!(id.matrix, CMatrix::identity(12, 12));
    }

    #[test]
    fn embed_lowering_annihilates_ground() {
        let s = two_qubit_ancilla();
        let b = s.embed("p", &ladder(3).unwrap()).unwrap();
        for i in 0..12 {
            if s.occupation_of(i)[2] == 0 {
                assert!(b.matrix.column(i).iter().all(|z| z.norm() == 0.0));
            }
        }
    }

    #[test]
    fn embed_errors() {
        let s = two_qubit_ancilla();
        assert!(matches!(s.embed("x", &pauli_z()), Err(Error::UnknownMode(_))));
        assert!(matches!(s.embed("p", &pauli_z()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn embed_is_homomorphism_and_distinct_modes_commute() {
        let s = two_qubit_ancilla();
        let b = ladder(3).unwrap();
        let bd = b.adjoint();
        let lhs = s.embed("p", &b).unwrap().mul(&s.embed("p", &bd).unwrap());
        let rhs = s.embed("p", &(&b * &bd)).unwrap();
        assert!(max_abs_diff(&lhs.matrix, &rhs.matrix) < 1e-12);
        let x1 = s.embed("q1", &pauli_x()).unwrap();
        let bp = s.embed("p", &b).unwrap();
        let comm = &x1.matrix * &bp.matrix - &bp.matrix * &x1.matrix;
        assert!(comm.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn ladder_matrices() {
        let b2 = ladder(2).unwrap();
        assert_eq!(b2, CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]));
        let b3 = ladder(3).unwrap();
        assert_eq!(b3[(0, 1)], ONE);
        assert_relative_eq!(b3[(1, 2)].re, 2f64.sqrt());
        assert!(ladder(1).is_err());
        let d = 6;
        let b = ladder(d).unwrap();
        let comm = &b * b.adjoint() - b.adjoint() * &b;
        for n in 0..d - 1 {
            assert_relative_eq!(comm[(n, n)].re, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn eig_small_cases() {
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![C64::from(3.0), C64::from(1.0), C64::from(2.0)]));
        let (v, _) = eig_hermitian(&d).unwrap();
        assert_eq!(v, vec![1.0, 2.0, 3.0]);
        let (v, _) = eig_hermitian(&pauli_x()).unwrap();
        assert_relative_eq!(v[0], -1.0, epsilon = 1e-12);
        assert_relative_eq!(v[1], 1.0, epsilon = 1e-12);
        let nh = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
        assert!(matches!(eig_hermitian(&nh), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_hermitian(20, &mut rng);
        let (vals, vecs) = eig_hermitian(&a).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let diag = CMatrix::from_diagonal(&CVector::from_iterator(20, vals.iter().map(|&x| C64::from(x))));
        let rec = &vecs * diag * vecs.adjoint();
        assert!(max_abs_diff(&rec, &a) < 1e-8);
        assert!(unitarity_deviation(&vecs) < 1e-9);
        let norm = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (k, &lam) in vals.iter().enumerate() {
            let v = vecs.column(k);
            let r = &a * v - v * C64::from(lam);
            assert!(r.norm() < 1e-8 * norm.max(1.0));
        }
    }

    #[test]
    fn partial_trace_of_product_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ra = random_density(2, &mut rng);
        let rb = random_density(3, &mut rng);
        let space = HilbertSpace::compose(vec![ModeSpec::qubit("a"), ModeSpec::new("b", 3)]).unwrap();
        let rho = DensityMatrix::new(space, ra.kronecker(&rb)).unwrap();
        let red = partial_trace(&rho, &["a"]).unwrap();
        assert!(max_abs_diff(&red.matrix, &ra) < 1e-12);
        let red_b = partial_trace(&rho, &["b"]).unwrap();
        assert!(max_abs_diff(&red_b.matrix, &rb) < 1e-12);
        assert!(matches!(partial_trace(&rho, &["zz"]), Err(Error::UnknownMode(_))));
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let space = HilbertSpace::compose(vec![ModeSpec::qubit("a"), ModeSpec::qubit("b")]).unwrap();
        let mut psi = CVector::zeros(4);
        psi[0] = C64::from(std::f64::consts::FRAC_1_SQRT_2);
        psi[3] = C64::from(std::f64::consts::FRAC_1_SQRT_2);
        let rho = StateVector::new(space, psi).unwrap().projector();
        let red = partial_trace(&rho, &["b"]).unwrap();
        assert!(max_abs_diff(&red.matrix, &CMatrix::identity(2, 2).map(|z| z * 0.5)) < 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace_and_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let space = two_qubit_ancilla();
        for _ in 0..5 {
            let rho = DensityMatrix::new(space.clone(), random_density(12, &mut rng)).unwrap();
            for keep in [&["q1"][..], &["q2", "p"][..], &["p", "q1"][..]] {
                let red = partial_trace(&rho, keep).unwrap();
                assert!((red.trace() - rho.trace()).abs() < 1e-12);
                let (vals, _) = eig_hermitian(&red.matrix).unwrap();
                assert!(vals[0] > -1e-12);
            }
        }
    }

    #[test]
    fn rank_one_projector_with_degenerate_kernel() {
        let u = crate::effective::pcf_unitary(2, 0.4828607308736047).unwrap().matrix * C64::from_polar(1.0, 0.6564206086469416);
        let map = crate::dynamics::ProcessMap::unitary(2, &u).unwrap();
        let j = crate::metrics::choi(&map);
        let (vals, vecs) = eig_hermitian(&j).unwrap();
        assert!(vals.iter().all(|x| x.is_finite()));
        assert_relative_eq!(vals[63], 1.0, epsilon = 1e-12);
        assert!(vals[0] > -1e-12);
        let top = vecs.column(63);
        assert_relative_eq!((&top * top.adjoint() - &j).norm(), 0.0, epsilon = 1e-12);
    }
}
