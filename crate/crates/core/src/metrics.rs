//! Fidelity measures for channels and states.

use crate::dynamics::ProcessMap;
use crate::error::{Error, Result};
use crate::qcore::{hermitian_map, CMatrix, CVector, DensityMatrix, StateVector, C64};

/// Eigenvalues below this are treated as zero in matrix square roots.
const SQRT_FLOOR: f64 = 1e-10;

/// Normalized Choi matrix `(1/d) sum_ij |i><j| ⊗ E(|i><j|)`.
pub fn choi(map: &ProcessMap) -> CMatrix {
    let d = map.dim;
    let mut out = CMatrix::zeros(d * d, d * d);
    let scale = C64::from(1.0 / d as f64);
    for i in 0..d {
        for j in 0..d {
            out.view_mut((i * d, j * d), (d, d)).copy_from(&(map.output(i, j) * scale));
        }
    }
    out
}

/// Maximally entangled vector `(1/√d) sum_i |i> ⊗ U|i>`.
pub fn choi_vector(u: &CMatrix) -> CVector {
    let d = u.nrows();
    let s = 1.0 / (d as f64).sqrt();
    CVector::from_fn(d * d, |k, _| u[(k % d, k / d)] * s)
}

/// Process fidelity `<psi_U| J(E) |psi_U>` against a target unitary.
pub fn process_fidelity(map: &ProcessMap, target: &CMatrix) -> Result<f64> {
    if target.nrows() != map.dim || target.ncols() != map.dim {
        return Err(Error::DimensionMismatch { expected: map.dim, got: target.nrows() });
    }
    let v = choi_vector(target);
    Ok((v.adjoint() * choi(map) * &v)[(0, 0)].re)
}

/// Average gate fidelity from the process fidelity.
pub fn average_gate_fidelity(process_fidelity: f64, dim: usize) -> f64 {
    let d = dim as f64;
    (d * process_fidelity + 1.0) / (d + 1.0)
}

/// Uhlmann fidelity `(tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`.
pub fn state_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.space != sigma.space {
        return Err(Error::InvalidArgument("states live on different spaces".into()));
    }
    let sqrt = |m: &CMatrix| hermitian_map(m, |x| if x > SQRT_FLOOR { x.sqrt() } else { 0.0 });
    let s = sqrt(&rho.matrix)?;
    let inner = &s * &sigma.matrix * &s;
    let inner = (&inner + inner.adjoint()) * C64::from(0.5);
    let t = sqrt(&inner)?.trace().re;
    Ok(t * t)
}

/// Fidelity `<psi|rho|psi>` with a pure target.
pub fn pure_state_fidelity(rho: &DensityMatrix, psi: &StateVector) -> Result<f64> {
    if rho.space != psi.space {
        return Err(Error::InvalidArgument("states live on different spaces".into()));
    }
    Ok((psi.data.adjoint() * &rho.matrix * &psi.data)[(0, 0)].re)
}

/// Minimum eigenvalue of the Choi matrix; negative values flag a map that
/// is not completely positive.
pub fn choi_min_eigenvalue(map: &ProcessMap) -> Result<f64> {
    let j = choi(map);
    let j = (&j + j.adjoint()) * C64::from(0.5);
    let (vals, _) = crate::qcore::eig_hermitian(&j)?;
    Ok(vals.into_iter().fold(f64::INFINITY, f64::min))
}
