//! Unconstrained minimizers: BFGS with central-difference gradients and
//! Armijo backtracking, and Nelder–Mead as a derivative-free fallback.
//!
//! Objectives may return `+∞` (or NaN, treated as `+∞`) outside their
//! domain; both methods simply reject such trial points.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimOptions {
    pub max_iter: usize,
    /// Gradient tolerance, relative to `1 + |f|`.
    pub gtol: f64,
    /// Objective-change tolerance, relative to `1 + |f|`.
    pub ftol: f64,
    /// Longest step (Euclidean) taken in one iteration.
    pub max_step: f64,
}

impl Default for OptimOptions {
    fn default() -> Self {
        Self {
            max_iter: 500,
            gtol: 1e-6,
            ftol: 1e-12,
            max_step: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Central-difference gradient, step `1e-6·max(1, |x_j|)`.
pub fn numerical_gradient<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64]) -> Vec<f64> {
    let mut work = x.to_vec();
    (0..x.len())
        .map(|j| {
            let h = 1e-6 * x[j].abs().max(1.0);
            work[j] = x[j] + h;
            let up = sanitize(f(&work));
            work[j] = x[j] - h;
            let down = sanitize(f(&work));
            work[j] = x[j];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// BFGS on the inverse-Hessian approximation.
pub fn bfgs<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], opts: &OptimOptions) -> OptimOutcome {
    let n = x0.len();
    let mut x = DVector::from_column_slice(x0);
    let mut fx = sanitize(f(x.as_slice()));
    if n == 0 || !fx.is_finite() {
        return OptimOutcome {
            x: x0.to_vec(),
            value: fx,
            iterations: 0,
            converged: n == 0 && fx.is_finite(),
        };
    }
    let mut g = DVector::from_vec(numerical_gradient(f, x.as_slice()));
    let mut h_inv = DMatrix::<f64>::identity(n, n);
    let mut small_changes = 0;
    for iter in 0..opts.max_iter {
        let scale = 1.0 + fx.abs();
        if !g.iter().all(|v| v.is_finite()) {
            return OptimOutcome {
                x: x.as_slice().to_vec(),
                value: fx,
                iterations: iter,
                converged: false,
            };
        }
        if g.amax() <= opts.gtol * scale {
            return OptimOutcome {
                x: x.as_slice().to_vec(),
                value: fx,
                iterations: iter,
                converged: true,
            };
        }
        let mut p = -(&h_inv * &g);
        let mut slope = g.dot(&p);
        if !(slope < 0.0) {
            h_inv = DMatrix::identity(n, n);
            p = -g.clone();
            slope = g.dot(&p);
        }
        let norm = p.norm();
        if norm > opts.max_step {
            p *= opts.max_step / norm;
            slope *= opts.max_step / norm;
        }
        // Armijo backtracking
        let mut t = 1.0;
        let mut accepted = None;
        while t > 1e-14 {
            let trial = &x + &p * t;
            let ft = sanitize(f(trial.as_slice()));
            if ft <= fx + 1e-4 * t * slope {
                accepted = Some((trial, ft));
                break;
            }
            t *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else {
            // no descent along a numerically estimated direction: accept
            // as a stationary point only if the gradient is already small
            return OptimOutcome {
                x: x.as_slice().to_vec(),
                value: fx,
                iterations: iter,
                converged: g.amax() <= 1e-3 * scale,
            };
        };
        let g_new = DVector::from_vec(numerical_gradient(f, x_new.as_slice()));
        let s = &x_new - &x;
        let y = &g_new - &g;
        let sy = s.dot(&y);
        if sy > 1e-12 * s.norm() * y.norm() {
            let rho = 1.0 / sy;
            let hy = &h_inv * &y;
            let yhy = y.dot(&hy);
            h_inv += (&s * s.transpose()) * (rho * rho * yhy + rho)
                - (&hy * s.transpose() + &s * hy.transpose()) * rho;
        }
        if (fx - f_new).abs() <= opts.ftol * scale {
            small_changes += 1;
        } else {
            small_changes = 0;
        }
        x = x_new;
        fx = f_new;
        g = g_new;
        if small_changes >= 3 {
            return OptimOutcome {
                x: x.as_slice().to_vec(),
                value: fx,
                iterations: iter + 1,
                converged: true,
            };
        }
    }
    OptimOutcome {
        x: x.as_slice().to_vec(),
        value: fx,
        iterations: opts.max_iter,
        converged: false,
    }
}

/// Nelder–Mead with standard coefficients (1, 2, 0.5, 0.5) and an initial
/// simplex of edge `step` around `x0`.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: &F,
    x0: &[f64],
    step: f64,
    max_iter: usize,
    tol: f64,
) -> OptimOutcome {
    let n = x0.len();
    let eval = |x: &[f64]| sanitize(f(x));
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for j in 0..n {
        let mut v = x0.to_vec();
        v[j] += step;
        let fv = eval(&v);
        simplex.push((v, fv));
    }
    let combine = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect()
    };
    for iter in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let spread = (worst - best).abs();
        let diameter = simplex
            .iter()
            .skip(1)
            .map(|(v, _)| {
                v.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if best.is_finite() && spread <= tol * (1.0 + best.abs()) && diameter <= 1e-7 {
            return OptimOutcome {
                x: simplex[0].0.clone(),
                value: best,
                iterations: iter,
                converged: true,
            };
        }
        let mut centroid = vec![0.0; n];
        for (v, _) in &simplex[..n] {
            for (c, vi) in centroid.iter_mut().zip(v) {
                *c += vi / n as f64;
            }
        }
        let reflected = combine(&centroid, &simplex[n].0, -1.0);
        let fr = eval(&reflected);
        if fr < simplex[0].1 {
            let expanded = combine(&centroid, &simplex[n].0, -2.0);
            let fe = eval(&expanded);
            simplex[n] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let (target, ft) = if fr < simplex[n].1 {
                (reflected.clone(), fr)
            } else {
                (simplex[n].0.clone(), simplex[n].1)
            };
            let contracted = combine(&centroid, &target, 0.5);
            let fc = eval(&contracted);
            if fc < ft {
                simplex[n] = (contracted, fc);
            } else {
                let anchor = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let v = combine(&anchor, &vertex.0, 0.5);
                    let fv = eval(&v);
                    *vertex = (v, fv);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    OptimOutcome {
        x: simplex[0].0.clone(),
        value: simplex[0].1,
        iterations: max_iter,
        converged: false,
    }
}

/// BFGS, then Nelder–Mead from BFGS's endpoint when BFGS stalls, then a
/// final BFGS polish.
pub fn minimize<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], opts: &OptimOptions) -> OptimOutcome {
    let first = bfgs(f, x0, opts);
    if first.converged || x0.is_empty() {
        return first;
    }
    let start = if first.value.is_finite() {
        &first.x
    } else {
        x0
    };
    let nm = nelder_mead(f, start, 0.3, 400 * x0.len().max(1), 1e-12);
    let polish = bfgs(f, &nm.x, opts);
    let iterations = first.iterations + nm.iterations + polish.iterations;
    let mut best = [first, nm, polish]
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .unwrap();
    best.iterations = iterations;
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> f64 {
        (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
    }

    #[test]
    fn gradient_of_quadratic() {
        let f = |x: &[f64]| x[0] * x[0] + 3.0 * x[1];
        let g = numerical_gradient(&f, &[2.0, 5.0]);
        assert!((g[0] - 4.0).abs() < 1e-6);
        assert!((g[1] - 3.0).abs() < 1e-6);
    }

    #[test]
    fn bfgs_rosenbrock() {
        let r = bfgs(&rosenbrock, &[-1.2, 1.0], &OptimOptions::default());
        assert!(r.converged);
        assert!(
            (r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] - 1.0).abs() < 1e-4,
            "{:?}",
            r.x
        );
    }

    #[test]
    fn nelder_mead_quadratic() {
        let f = |x: &[f64]| (x[0] - 3.0).powi(2) + 2.0 * (x[1] + 1.0).powi(2);
        let r = nelder_mead(&f, &[0.0, 0.0], 0.5, 2000, 1e-14);
        assert!(r.converged);
        assert!((r.x[0] - 3.0).abs() < 1e-5 && (r.x[1] + 1.0).abs() < 1e-5);
    }

    #[test]
    fn infinite_regions_are_avoided() {
        // minimum at the edge of a barrier
        let f = |x: &[f64]| {
            if x[0] <= 0.0 {
                f64::INFINITY
            } else {
                x[0] - x[0].ln()
            }
        };
        let r = minimize(&f, &[5.0], &OptimOptions::default());
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn non_finite_start() {
        let f = |_: &[f64]| f64::NAN;
        let r = bfgs(&f, &[1.0], &OptimOptions::default());
        assert!(!r.converged);
    }
}
