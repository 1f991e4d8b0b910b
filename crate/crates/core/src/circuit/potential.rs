//! Josephson potential of the ring-modulator star and its quartic Taylor series.
//!
//! Variables are ordered `[phi_1..phi_N, phi_P, theta_1..theta_N]`. Junction
//! `k` of ring `i` carries the phase
//! `s_k1 * phi_i + s_k2 * phi_P + s_k3 * theta_i + pi * flux_i / 2`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::params::{ghz_to_rad, CircuitParams};
use crate::error::{Error, Result};

/// Sign of `(phi_i, phi_P, theta_i)` in each of the four junction phases.
pub const JUNCTION_SIGNS: [[f64; 3]; 4] = [
    [1.0, 1.0, -1.0],
    [1.0, -1.0, 1.0],
    [-1.0, 1.0, 1.0],
    [-1.0, -1.0, -1.0],
];

pub fn phi_var(i: usize) -> usize {
    i
}

pub fn ancilla_var(n: usize) -> usize {
    n
}

pub fn theta_var(n: usize, i: usize) -> usize {
    n + 1 + i
}

pub fn n_vars(n: usize) -> usize {
    2 * n + 1
}

/// Sparse real polynomial keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u8>, f64>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn linear(coeffs: &[f64]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (v, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[v] = 1;
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exps: Vec<u8>, c: f64) {
        if c == 0.0 {
            return;
        }
        *self.terms.entry(exps).or_insert(0.0) += c;
    }

    pub fn add_scaled(&mut self, other: &Polynomial, s: f64) {
        for (e, &c) in &other.terms {
            self.add_term(e.clone(), s * c);
        }
    }

    /// Product truncated at total degree `max_degree`.
    pub fn mul(&self, other: &Polynomial, max_degree: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Vec<u8> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if e.iter().map(|&x| x as u32).sum::<u32>() <= max_degree {
                    out.add_term(e, ca * cb);
                }
            }
        }
        out
    }

    pub fn coefficient(&self, exps: &[u8]) -> f64 {
        self.terms.get(exps).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u8], f64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, &c)| c * e.iter().zip(x).map(|(&k, &xi)| xi.powi(k as i32)).product::<f64>())
            .sum()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum()).max().unwrap_or(0)
    }
}

fn ring_offset(flux: f64) -> f64 {
    PI * flux / 2.0
}

/// Phase of each junction of ring `i` at configuration `x`.
pub fn junction_phases(params: &CircuitParams, ring: usize, x: &[f64]) -> [f64; 4] {
    let n = params.n_qubits();
    let vars = [x[phi_var(ring)], x[ancilla_var(n)], x[theta_var(n, ring)]];
    let off = ring_offset(params.flux[ring]);
    let mut out = [0.0; 4];
    for (k, s) in JUNCTION_SIGNS.iter().enumerate() {
        out[k] = s[0] * vars[0] + s[1] * vars[1] + s[2] * vars[2] + off;
    }
    out
}

fn ring_vars(n: usize, ring: usize) -> [usize; 3] {
    [phi_var(ring), ancilla_var(n), theta_var(n, ring)]
}

/// `V = -sum E_J cos(gamma)` in rad/ns.
pub fn potential_value(params: &CircuitParams, x: &[f64]) -> f64 {
    (0..params.n_qubits())
        .map(|i| {
            let g = junction_phases(params, i, x);
            (0..4).map(|k| -ghz_to_rad(params.junction_energy[i][k]) * g[k].cos()).sum::<f64>()
        })
        .sum()
}

pub fn potential_gradient(params: &CircuitParams, x: &[f64]) -> DVector<f64> {
    let n = params.n_qubits();
    let mut grad = DVector::zeros(n_vars(n));
    for i in 0..n {
        let g = junction_phases(params, i, x);
        let vars = ring_vars(n, i);
        for (k, s) in JUNCTION_SIGNS.iter().enumerate() {
            let e = ghz_to_rad(params.junction_energy[i][k]);
            for a in 0..3 {
                grad[vars[a]] += e * g[k].sin() * s[a];
            }
        }
    }
    grad
}

pub fn potential_hessian(params: &CircuitParams, x: &[f64]) -> DMatrix<f64> {
    let n = params.n_qubits();
    let m = n_vars(n);
    let mut h = DMatrix::zeros(m, m);
    for i in 0..n {
        let g = junction_phases(params, i, x);
        let vars = ring_vars(n, i);
        for (k, s) in JUNCTION_SIGNS.iter().enumerate() {
            let e = ghz_to_rad(params.junction_energy[i][k]);
            for a in 0..3 {
                for b in 0..3 {
                    h[(vars[a], vars[b])] += e * g[k].cos() * s[a] * s[b];
                }
            }
        }
    }
    h
}

/// Quartic Taylor series of the potential in the displacement `x - point`.
pub fn potential_series(params: &CircuitParams, point: &[f64]) -> Result<Polynomial> {
    params.validate()?;
    let n = params.n_qubits();
    let m = n_vars(n);
    if point.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: point.len() });
    }
    let mut total = Polynomial::zero(m);
    for i in 0..n {
        let g0 = junction_phases(params, i, point);
        let vars = ring_vars(n, i);
        for (k, s) in JUNCTION_SIGNS.iter().enumerate() {
            let mut l = vec![0.0; m];
            for a in 0..3 {
                l[vars[a]] = s[a];
            }
            let u = Polynomial::linear(&l);
            let u2 = u.mul(&u, 4);
            let u3 = u2.mul(&u, 4);
            let u4 = u3.mul(&u, 4);
            // cos(g0 + u) = cos g0 (1 - u^2/2 + u^4/24) - sin g0 (u - u^3/6)
            let (c, sn) = (g0[k].cos(), g0[k].sin());
            let mut series = Polynomial::constant(m, c);
            series.add_scaled(&u, -sn);
            series.add_scaled(&u2, -c / 2.0);
            series.add_scaled(&u3, sn / 6.0);
            series.add_scaled(&u4, c / 24.0);
            total.add_scaled(&series, -ghz_to_rad(params.junction_energy[i][k]));
        }
    }
    Ok(total)
}

/// Classical potential minimum reached by damped Newton descent from the origin.
pub fn potential_minimum(params: &CircuitParams) -> Result<Vec<f64>> {
    params.validate()?;
    let m = n_vars(params.n_qubits());
    let mut x = vec![0.0; m];
    let scale = params.junction_energy.iter().flatten().fold(0.0f64, |a, &b| a.max(ghz_to_rad(b)));
    for _ in 0..200 {
        let grad = potential_gradient(params, &x);
        if grad.amax() < 1e-13 * scale {
            return Ok(x);
        }
        let hess = potential_hessian(params, &x);
        let step = match hess.clone().cholesky() {
            Some(ch) => ch.solve(&grad),
            // fall back to a gradient step if the Hessian is indefinite here
            None => &grad / scale,
        };
        let v0 = potential_value(params, &x);
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a - t * d).collect();
            if potential_value(params, &trial) <= v0 || t < 1e-8 {
                x = trial;
                break;
            }
            t *= 0.5;
        }
    }
    let grad = potential_gradient(params, &x);
    if grad.amax() < 1e-9 * scale {
        Ok(x)
    } else {
        Err(Error::Convergence(format!("potential minimum search stalled, |grad| = {:e}", grad.amax())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn exps(n: usize, pairs: &[(usize, u8)]) -> Vec<u8> {
        let mut e = vec![0; n_vars(n)];
        for &(v, k) in pairs {
            e[v] = k;
        }
        e
    }

    /// Closed-form symmetric ring potential, written independently of the
    /// per-junction sum.
    fn symmetric_closed_form(params: &CircuitParams, x: &[f64]) -> f64 {
        let n = params.n_qubits();
        (0..n)
            .map(|i| {
                let e = ghz_to_rad(params.junction_energy[i][0]);
                let q = PI * params.flux[i] / 2.0;
                let (a, p, t) = (x[phi_var(i)], x[ancilla_var(n)], x[theta_var(n, i)]);
                -4.0 * e * (a.cos() * p.cos() * t.cos() * q.cos() - a.sin() * p.sin() * t.sin() * q.sin())
            })
            .sum()
    }

    #[test]
    fn symmetric_reduction_on_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for params in [
            CircuitParams::two_qubit_reference().with_flux(&[0.06, -0.13]),
            CircuitParams::four_qubit_reference().with_flux(&[0.1, 0.0, -0.2, 0.05]),
        ] {
            let m = n_vars(params.n_qubits());
            for _ in 0..200 {
                let x: Vec<f64> = (0..m).map(|_| rng.random_range(-PI..PI)).collect();
                let a = potential_value(&params, &x);
                let b = symmetric_closed_form(&params, &x);
                assert!((a - b).abs() < 1e-12 * a.abs().max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn zero_flux_has_no_cubic_term() {
        let p = CircuitParams::two_qubit_reference();
        let s = potential_series(&p, &[0.0; 5]).unwrap();
        for (e, _) in s.iter() {
            assert_ne!(e.iter().map(|&k| k as u32).sum::<u32>(), 3);
        }
    }

    #[test]
    fn series_matches_taylor_coefficients() {
        let p = CircuitParams::two_qubit_reference().with_flux(&[0.06, 0.17]);
        let n = 2;
        let s = potential_series(&p, &[0.0; 5]).unwrap();
        let mut anc_quad = 0.0;
        let mut anc_quart = 0.0;
        for i in 0..n {
            let e = ghz_to_rad(p.junction_energy[i][0]);
            let q = PI * p.flux[i] / 2.0;
            let (c, sn) = (q.cos(), q.sin());
            anc_quad += 4.0 * c * e / 2.0;
            anc_quart += -4.0 * c * e / 24.0;
            for v in [phi_var(i), theta_var(n, i)] {
                assert_relative_eq!(s.coefficient(&exps(n, &[(v, 2)])), 4.0 * c * e / 2.0, epsilon = 1e-9);
                assert_relative_eq!(s.coefficient(&exps(n, &[(v, 4)])), -4.0 * c * e / 24.0, epsilon = 1e-9);
            }
            let (a, pp, t) = (phi_var(i), ancilla_var(n), theta_var(n, i));
            for (u, w) in [(a, pp), (a, t), (pp, t)] {
                assert_relative_eq!(s.coefficient(&exps(n, &[(u, 2), (w, 2)])), -c * e, epsilon = 1e-9);
            }
            assert_relative_eq!(s.coefficient(&exps(n, &[(a, 1), (t, 1), (pp, 1)])), 4.0 * sn * e, epsilon = 1e-9);
            // no linear or mixed-quadratic terms in the symmetric case
            assert!(s.coefficient(&exps(n, &[(a, 1)])).abs() < 1e-12);
            assert!(s.coefficient(&exps(n, &[(a, 1), (pp, 1)])).abs() < 1e-12);
        }
        assert_relative_eq!(s.coefficient(&exps(n, &[(ancilla_var(n), 2)])), anc_quad, epsilon = 1e-9);
        assert_relative_eq!(s.coefficient(&exps(n, &[(ancilla_var(n), 4)])), anc_quart, epsilon = 1e-9);
        assert_eq!(s.degree(), 4);
    }

    #[test]
    fn series_approximates_potential_near_point() {
        let mut p = CircuitParams::two_qubit_reference().with_flux(&[0.08, 0.02]);
        p.junction_energy[0] = [9.0, 10.5, 11.0, 9.7];
        let x0 = potential_minimum(&p).unwrap();
        let s = potential_series(&p, &x0).unwrap();
        let d = [0.01, -0.02, 0.015, 0.005, -0.01];
        let x: Vec<f64> = x0.iter().zip(d).map(|(a, b)| a + b).collect();
        let err = (s.eval(&d) - potential_value(&p, &x)).abs();
        // remainder is fifth order in the displacement
        assert!(err < 1e-7, "{err}");
    }

    #[test]
    fn minimum_of_disordered_device_has_zero_gradient() {
        let mut p = CircuitParams::two_qubit_reference().with_flux(&[0.0, 0.05]);
        p.junction_energy[1] = [11.5, 10.2, 10.9, 11.8];
        let x0 = potential_minimum(&p).unwrap();
        assert!(potential_gradient(&p, &x0).amax() < 1e-9);
        assert!(x0.iter().any(|v| v.abs() > 1e-6));
        let s = potential_series(&p, &x0).unwrap();
        for v in 0..5 {
            let mut e = vec![0; 5];
            e[v] = 1;
            assert!(s.coefficient(&e).abs() < 1e-8);
        }
    }

    #[test]
    fn symmetric_minimum_is_origin() {
        let p = CircuitParams::four_qubit_reference().with_flux(&[0.1, 0.0, 0.05, 0.0]);
        let x0 = potential_minimum(&p).unwrap();
        assert!(x0.iter().all(|v| v.abs() < 1e-12));
    }
}
