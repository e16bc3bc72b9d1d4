//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Finite ranges are bisected on the subinterval with the largest error
//! estimate until the total estimate meets `max(abs_tol, rel_tol·|I|)`.
//! A semi-infinite range `[a, ∞)` is mapped onto `(0, 1)` through
//! `s = t/(1-t)`, with `x = a·e^s` when `a > 0` (so power-law tails decay
//! exponentially in `s`) and `x = a + s` otherwise. The Kronrod rule never
//! samples the interval endpoints, so integrable endpoint singularities are
//! tolerated.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{GtldError, Result};

/// Tolerances and subdivision budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(GtldError::invalid("abs_tol", abs_tol, "must be positive"));
        }
        if !(rel_tol > 0.0) {
            return Err(GtldError::invalid("rel_tol", rel_tol, "must be positive"));
        }
        if max_subdivisions == 0 {
            return Err(GtldError::invalid(
                "max_subdivisions",
                0.0,
                "must be at least 1",
            ));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }
}

/// Value and diagnostics of a converged integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
    pub evaluations: usize,
}

// Kronrod 15-point abscissae (positive half, descending) and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss 7-point weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    if !fc.is_finite() {
        return Err(GtldError::Domain(format!(
            "integrand is not finite at {center}"
        )));
    }
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (x1, x2) = (center - dx, center + dx);
        let (f1, f2) = (f(x1), f(x2));
        if !f1.is_finite() || !f2.is_finite() {
            let bad = if f1.is_finite() { x2 } else { x1 };
            return Err(GtldError::Domain(format!(
                "integrand is not finite at {bad}"
            )));
        }
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok((value, err))
}

fn adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    let (v0, e0) = kronrod15(&mut f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v0,
        error: e0,
    });
    let mut total = v0;
    let mut total_err = e0;
    let mut subdivisions = 1;
    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(GtldError::QuadratureNonConvergence {
                estimate: total,
                error_bound: total_err,
            });
        }
        let worst = heap.pop().expect("heap holds every live segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval can no longer be split in floating point
            return Err(GtldError::QuadratureNonConvergence {
                estimate: total,
                error_bound: total_err,
            });
        }
        let (v1, e1) = kronrod15(&mut f, worst.a, mid)?;
        let (v2, e2) = kronrod15(&mut f, mid, worst.b)?;
        total += v1 + v2 - worst.value;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        subdivisions += 1;
        // resum to keep rounding drift out of the running totals
        total_err = heap.iter().map(|s| s.error).sum();
        if subdivisions % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
        }
    }
    let value: f64 = heap.iter().map(|s| s.value).sum();
    Ok(Quadrature {
        value,
        error: total_err,
        subdivisions,
        evaluations: 15 * (2 * subdivisions - 1),
    })
}

/// Integrate `f` over `[lower, upper]`; `upper` may be `f64::INFINITY`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    lower: f64,
    upper: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    if lower.is_nan() || upper.is_nan() || lower.is_infinite() {
        return Err(GtldError::Domain(format!(
            "unsupported integration range [{lower}, {upper}]"
        )));
    }
    if upper < lower {
        let mut q = integrate(f, upper, lower, spec)?;
        q.value = -q.value;
        return Ok(q);
    }
    if upper == lower {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
            evaluations: 0,
        });
    }
    if upper.is_infinite() {
        let log_map = lower > 0.0;
        let mapped = move |t: f64| {
            let one_minus = 1.0 - t;
            let s = t / one_minus;
            let (x, jacobian) = if log_map {
                let x = lower * s.exp();
                (x, x)
            } else {
                (lower + s, 1.0)
            };
            if x.is_infinite() {
                return 0.0;
            }
            let fx = f(x);
            if fx == 0.0 {
                0.0
            } else {
                fx * jacobian / (one_minus * one_minus)
            }
        };
        adaptive(mapped, 0.0, 1.0, spec)
    } else {
        adaptive(f, lower, upper, spec)
    }
}
