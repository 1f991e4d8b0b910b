//! Small derivative-free optimizers used for calibration.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_evaluations: usize,
    /// Stop when the simplex values span less than this.
    pub f_tol: f64,
    /// Stop when the simplex fits in a box of this half-width.
    pub x_tol: f64,
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { max_evaluations: 500, f_tol: 1e-14, x_tol: 1e-9, initial_step: 0.02 }
    }
}

/// Nelder-Mead simplex search inside the box `[lo, hi]^n`. Trial points are
/// clamped to the box.
pub fn nelder_mead(f: impl Fn(&[f64]) -> f64, x0: &[f64], bounds: (f64, f64), opts: &NelderMeadOptions) -> Minimum {
    let n = x0.len();
    let clamp = |x: Vec<f64>| x.into_iter().map(|v| v.clamp(bounds.0, bounds.1)).collect::<Vec<_>>();
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<Vec<f64>> = vec![clamp(x0.to_vec())];
    for k in 0..n {
        let mut p = x0.to_vec();
        p[k] += if p[k] + opts.initial_step <= bounds.1 { opts.initial_step } else { -opts.initial_step };
        simplex.push(clamp(p));
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| eval(p)).collect();
    let mut converged = false;
    while evals.get() < opts.max_evaluations {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let size = simplex
            .iter()
            .skip(1)
            .flat_map(|p| p.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread.abs() <= opts.f_tol || size <= opts.x_tol {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..n).map(|k| simplex[..n].iter().map(|p| p[k]).sum::<f64>() / n as f64).collect();
        let along = |t: f64| clamp(centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (c - w)).collect());

        let xr = along(1.0);
        let fr = eval(&xr);
        if fr < values[0] {
            let xe = along(2.0);
            let fe = eval(&xe);
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
        } else {
            let (xc, fc) = if fr < values[n] {
                let xc = along(0.5);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = along(-0.5);
                let fc = eval(&xc);
                (xc, fc)
            };
            if fc < values[n].min(fr) {
                simplex[n] = xc;
                values[n] = fc;
            } else {
                for i in 1..=n {
                    simplex[i] = clamp(simplex[i].iter().zip(&simplex[0]).map(|(p, b)| b + 0.5 * (p - b)).collect());
                    values[i] = eval(&simplex[i]);
                }
            }
        }
    }
    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    Minimum { x: simplex[best].clone(), value: values[best], evaluations: evals.get(), converged }
}

/// Root of `f` inside a sign-changing bracket, by Brent's method.
pub fn brent_root(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> Result<f64> {
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Convergence(format!("root not bracketed: f({a}) = {fa:e}, f({b}) = {fb:e}")));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0)), (q - 1.0) * (r - 1.0) * (s - 1.0))
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::Convergence(format!("root search did not converge in {max_iter} iterations")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 0.1).powi(2) + 3.0 * (x[1] + 0.05).powi(2) + 0.5 * x[0] * x[1];
        let m = nelder_mead(f, &[0.0, 0.0], (-0.25, 0.25), &NelderMeadOptions::default());
        // stationary point of the quadratic solved by hand
        let det = 2.0 * 6.0 - 0.25;
        let x0 = (6.0 * 0.2 - 0.5 * (-0.3)) / det;
        let x1 = (2.0 * -0.3 - 0.5 * 0.2) / det;
        assert!((m.x[0] - x0).abs() < 1e-6 && (m.x[1] - x1).abs() < 1e-6, "{:?}", m.x);
        assert!(m.converged);
    }

    #[test]
    fn nelder_mead_respects_bounds() {
        let m = nelder_mead(|x: &[f64]| -x[0], &[0.0], (-0.25, 0.25), &NelderMeadOptions::default());
        assert!((m.x[0] - 0.25).abs() < 1e-9);
    }

    #[test]
    fn rosenbrock_within_budget() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = NelderMeadOptions { max_evaluations: 2000, initial_step: 0.5, ..Default::default() };
        let m = nelder_mead(f, &[-1.0, 1.0], (-5.0, 5.0), &opts);
        assert!(m.value < 1e-8, "{m:?}");
        assert!(m.evaluations <= 2000 + 3);
    }

    #[test]
    fn brent_finds_cubic_root() {
        let r = brent_root(|x| Ok(x * x * x - 2.0 * x - 5.0), 2.0, 3.0, 1e-14, 100).unwrap();
        assert!((r - 2.094_551_481_542_326_5).abs() < 1e-12);
        assert!(brent_root(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, 50).is_err());
    }
}
