//! Distributional properties: moments, probability weighted moments, MGF,
//! stress-strength reliability, order statistics, entropies, residual-life
//! moments and the cumulative information generating function.
//!
//! Everything is computed by adaptive quadrature over the support, split at
//! the model's 1%, 50% and 99% quantiles so that each piece has a single
//! natural scale. Before integrating over an unbounded range the integrand
//! `h` is probed in the far tail: `x·h(x)` must be decreasing at
//! `x = Q(1 − 10⁻⁶)·{1, 2, 4, 8}`, otherwise the quantity is reported as
//! divergent. The probe catches power tails (`gtl`, `gtp1`) where moments of
//! order `r ≥ β` do not exist.

use serde::{Deserialize, Serialize};

use crate::error::{GtldError, Result};
use crate::model::{GtldModel, InnerTransform};
use crate::numerics::{
    beta_fn, gamma_fn, integrate, lower_incomplete_gamma, sum_series, BinomialSequence,
    QuadratureSpec, SeriesSpec,
};

/// Computational route for moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentMethod {
    #[default]
    Quadrature,
    /// Binomial-expansion series; only for power-law transforms (`gte`, `gtw`).
    Series,
}

const SPLIT_PROBS: [f64; 3] = [0.01, 0.5, 0.99];

fn spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-13,
        rel_tol: 1e-10,
        max_subdivisions: 4000,
    }
}

/// `∫_lo^hi h(x) dx`, split at those of `Q(0.01), Q(0.5), Q(0.99)` that fall
/// strictly inside the range.
pub fn support_integral<T, H>(model: &GtldModel<T>, mut h: H, lo: f64, hi: f64) -> Result<f64>
where
    T: InnerTransform,
    H: FnMut(f64) -> f64,
{
    support_integral_with(model, &mut h, lo, hi, &spec())
}

fn support_integral_with<T, H>(
    model: &GtldModel<T>,
    h: &mut H,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<f64>
where
    T: InnerTransform,
    H: FnMut(f64) -> f64,
{
    let mut points = vec![lo];
    for p in SPLIT_PROBS {
        let q = model.quantile(p)?;
        if q > *points.last().unwrap() && q < hi {
            points.push(q);
        }
    }
    points.push(hi);
    let low = model.support_low();
    let (e, _) = model.edge_behaviour();
    let mut total = 0.0;
    for w in points.windows(2) {
        if w[0] == low && e < 0.0 && w[1].is_finite() {
            // x = low + s^p flattens a density that behaves like d^e
            let p = 1.0 / (1.0 + e).max(0.05);
            let g = |s: f64| {
                let x = low + s.powf(p);
                if x <= low {
                    return 0.0;
                }
                h(x) * p * s.powf(p - 1.0)
            };
            total += integrate(g, 0.0, (w[1] - low).powf(1.0 / p), spec)?.value;
        } else {
            total += integrate(&mut *h, w[0], w[1], spec)?.value;
        }
    }
    Ok(total)
}

/// Tail probe: `true` when `x·h(x)` decreases along `Q(1−10⁻⁶)·{1,2,4,8}`.
pub fn tail_decays<T, H>(model: &GtldModel<T>, mut h: H) -> Result<bool>
where
    T: InnerTransform,
    H: FnMut(f64) -> f64,
{
    let x0 = model.quantile(1.0 - 1e-6)?;
    let vals: Vec<f64> = [1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|k| {
            let x = x0 * k;
            (x * h(x)).abs()
        })
        .collect();
    Ok(vals
        .windows(2)
        .all(|w| w[1] == 0.0 || (w[1].is_finite() && w[1] < w[0])))
}

fn require_decay<T, H>(model: &GtldModel<T>, h: H, what: &str) -> Result<()>
where
    T: InnerTransform,
    H: FnMut(f64) -> f64,
{
    if tail_decays(model, h)? {
        Ok(())
    } else {
        Err(GtldError::Divergent(format!(
            "{what}: the integrand does not decay fast enough in the upper tail"
        )))
    }
}

fn pdf_or_zero<T: InnerTransform>(model: &GtldModel<T>, x: f64) -> f64 {
    model.pdf(x).unwrap_or(0.0)
}

/// `w·f(x)`, zero wherever the density underflows (far out, `w` may be ∞).
fn weighted_pdf<T: InnerTransform>(model: &GtldModel<T>, w: f64, x: f64) -> f64 {
    let f = pdf_or_zero(model, x);
    if f == 0.0 {
        0.0
    } else {
        w * f
    }
}

fn check_order(r: u32) -> Result<()> {
    if r == 0 {
        return Err(GtldError::invalid(
            "r",
            0.0,
            "moment order must be at least 1",
        ));
    }
    Ok(())
}

/// `E[X^r]`.
pub fn raw_moment<T: InnerTransform>(
    model: &GtldModel<T>,
    r: u32,
    method: MomentMethod,
) -> Result<f64> {
    check_order(r)?;
    match method {
        MomentMethod::Quadrature => {
            let rf = f64::from(r);
            let h = |x: f64| weighted_pdf(model, x.powf(rf), x);
            require_decay(model, h, &format!("moment of order {r}"))?;
            support_integral(model, h, model.support_low(), f64::INFINITY)
        }
        MomentMethod::Series => power_law_series(model, r, None),
    }
}

/// `E[X^r; X ≤ z]`.
pub fn incomplete_moment<T: InnerTransform>(
    model: &GtldModel<T>,
    r: u32,
    z: f64,
    method: MomentMethod,
) -> Result<f64> {
    check_order(r)?;
    let low = model.support_low();
    if z.is_nan() || z < low {
        return Err(GtldError::OutOfSupport { x: z, low });
    }
    if z == low {
        return Ok(0.0);
    }
    if z.is_infinite() {
        return raw_moment(model, r, method);
    }
    match method {
        MomentMethod::Quadrature => {
            let rf = f64::from(r);
            support_integral(model, |x| weighted_pdf(model, x.powf(rf), x), low, z)
        }
        MomentMethod::Series => power_law_series(model, r, Some(z)),
    }
}

/// Series form for `G = x^α`: expanding `u^{θ−1}` and `u^{2θ−1}` binomially
/// turns each term into a gamma integral,
///
/// `Σ_i (−1)^i [(1+λ) C(θ−1,i) − 2λ C(2θ−1,i)] · θ Γ(r/α+1) / (β^{r/α} (i+1)^{r/α+1})`,
///
/// with `Γ(r/α+1)` replaced by `γ(r/α+1, (i+1) β z^α)` for the incomplete
/// moment up to `z`. Terms decay like `i^{−θ−r/α−1}`, so convergence is slow
/// for small `θ`.
fn power_law_series<T: InnerTransform>(
    model: &GtldModel<T>,
    r: u32,
    z: Option<f64>,
) -> Result<f64> {
    let alpha = model.transform().power_law_exponent().ok_or_else(|| {
        GtldError::NotApplicable("series moments need a power-law transform (gte or gtw)".into())
    })?;
    let (beta, theta, lambda) = (model.beta(), model.theta(), model.lambda());
    let s = f64::from(r) / alpha + 1.0;
    let full = gamma_fn(s)?;
    let mut c1 = BinomialSequence::new(theta - 1.0);
    let mut c2 = BinomialSequence::new(2.0 * theta - 1.0);
    let scale = theta / beta.powf(s - 1.0);
    let mut failure = None;
    let sum = sum_series(
        |i| {
            let i1 = (i + 1) as f64;
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let w = (1.0 + lambda) * c1.next().unwrap() - 2.0 * lambda * c2.next().unwrap();
            if w == 0.0 {
                return 0.0;
            }
            let g = match z {
                None => full,
                Some(z) => match lower_incomplete_gamma(s, i1 * beta * z.powf(alpha)) {
                    Ok(v) => v,
                    Err(e) => {
                        failure = Some(e);
                        0.0
                    }
                },
            };
            sign * w * scale * g / i1.powf(s)
        },
        &SeriesSpec::default(),
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(sum.value),
    }
}

/// Probability weighted moment `E[X^r F(X)^s]`.
pub fn pwm<T: InnerTransform>(model: &GtldModel<T>, r: u32, s: u32) -> Result<f64> {
    let (rf, si) = (f64::from(r), s as i32);
    let h = |x: f64| {
        let f = pdf_or_zero(model, x);
        if f == 0.0 {
            return 0.0;
        }
        x.powf(rf) * model.cdf(x).unwrap_or(1.0).powi(si) * f
    };
    require_decay(model, h, "probability weighted moment")?;
    support_integral(model, h, model.support_low(), f64::INFINITY)
}

/// Moment generating function `E[e^{tX}]`.
pub fn mgf<T: InnerTransform>(model: &GtldModel<T>, t: f64) -> Result<f64> {
    if t.is_nan() {
        return Err(GtldError::Domain("t is NaN".into()));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    // work in logs: e^{tx} overflows long before e^{tx}·f(x) does
    let h = |x: f64| {
        if x <= model.support_low() {
            return (t * x).exp() * pdf_or_zero(model, x);
        }
        (t * x + model.ln_pdf(x)).exp()
    };
    require_decay(model, h, "moment generating function")?;
    let v = support_integral(model, h, model.support_low(), f64::INFINITY)?;
    if !v.is_finite() {
        return Err(GtldError::Divergent("moment generating function".into()));
    }
    Ok(v)
}

/// `P(X₁ > X₂)` for independent GTLD variables sharing every parameter but
/// the transmutation weights λ₁ (strength) and λ₂ (stress).
pub fn stress_strength(lambda1: f64, lambda2: f64) -> Result<f64> {
    for (name, l) in [("lambda1", lambda1), ("lambda2", lambda2)] {
        if !(l.abs() <= 1.0) {
            return Err(GtldError::invalid(name, l, "must lie in [-1, 1]"));
        }
    }
    Ok((lambda2 - lambda1 + 3.0) / 6.0)
}

/// Density of the `r`-th order statistic out of `n`.
pub fn order_stat_pdf<T: InnerTransform>(
    model: &GtldModel<T>,
    n: u32,
    r: u32,
    x: f64,
) -> Result<f64> {
    if r == 0 || r > n {
        return Err(GtldError::Domain(format!(
            "rank r = {r} must lie in 1..={n}"
        )));
    }
    let f = model.pdf(x)?;
    let cdf = model.cdf(x)?;
    let sf = model.survival(x)?;
    let (a, b) = (f64::from(r - 1), f64::from(n - r));
    let ln_b = beta_fn(f64::from(r), f64::from(n - r + 1))?.ln();
    if f == 0.0 || (a > 0.0 && cdf == 0.0) || (b > 0.0 && sf == 0.0) {
        return Ok(0.0);
    }
    let ln_weight =
        a * if a > 0.0 { cdf.ln() } else { 0.0 } + b * if b > 0.0 { sf.ln() } else { 0.0 } - ln_b;
    Ok(f * ln_weight.exp())
}

/// `∫ f(x)^ρ dx` over `[lower, ∞)`; `lower` defaults to the support edge.
///
/// When the density is unbounded at the edge the integral is taken in
/// probability space, `∫_{F(lower)}^1 f(Q(u))^{ρ−1} du`, which removes the
/// endpoint singularity. With the edge behaviour `f ≈ C d^e`, `e < 0`, the
/// integral over the full support is divergent once `ρ e ≤ −1`; a strictly
/// positive cutoff `lower` makes it finite.
pub fn density_power_integral<T: InnerTransform>(
    model: &GtldModel<T>,
    rho: f64,
    lower: Option<f64>,
) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(GtldError::invalid(
            "rho",
            rho,
            "entropy order must be positive",
        ));
    }
    let low = model.support_low();
    let c = lower.unwrap_or(low);
    if c.is_nan() || c < low {
        return Err(GtldError::OutOfSupport { x: c, low });
    }
    let (e, _) = model.edge_behaviour();
    if c == low && e < 0.0 && rho * e <= -1.0 + 1e-12 {
        return Err(GtldError::Divergent(format!(
            "density behaves like d^{e:.4} at the support edge, so its power {rho} is not integrable; \
             supply a positive lower cutoff"
        )));
    }
    let h = |x: f64| {
        if x <= low {
            return pdf_or_zero(model, x).powf(rho);
        }
        (rho * model.ln_pdf(x)).exp()
    };
    require_decay(model, h, "entropy integral")?;
    if e < 0.0 && rho > 1.0 {
        let u0 = if c == low { 0.0 } else { model.cdf(c)? };
        let g = |u: f64| match model.quantile(u) {
            Ok(x) if x > low => ((rho - 1.0) * model.ln_pdf(x)).exp(),
            _ => 0.0,
        };
        let mut points = vec![u0];
        points.extend(SPLIT_PROBS.iter().copied().filter(|p| *p > u0));
        points.push(1.0);
        let mut total = 0.0;
        for w in points.windows(2) {
            total += integrate(g, w[0], w[1], &spec())?.value;
        }
        Ok(total)
    } else {
        support_integral(model, h, c, f64::INFINITY)
    }
}

fn check_entropy_order(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || v == 1.0 || !v.is_finite() {
        return Err(GtldError::invalid(
            name,
            v,
            "must be positive and different from 1",
        ));
    }
    Ok(())
}

/// Rényi entropy `(1/(1−ρ)) log ∫ f^ρ`.
pub fn renyi_entropy<T: InnerTransform>(
    model: &GtldModel<T>,
    rho: f64,
    lower: Option<f64>,
) -> Result<f64> {
    check_entropy_order("rho", rho)?;
    let i = density_power_integral(model, rho, lower)?;
    Ok(i.ln() / (1.0 - rho))
}

/// q-entropy `(1/(q−1)) log(1 − ∫ f^q)`; needs `∫ f^q < 1`.
pub fn q_entropy<T: InnerTransform>(
    model: &GtldModel<T>,
    q: f64,
    lower: Option<f64>,
) -> Result<f64> {
    check_entropy_order("q", q)?;
    let i = density_power_integral(model, q, lower)?;
    if i >= 1.0 {
        return Err(GtldError::Domain(format!(
            "q-entropy needs ∫f^q < 1, got {i}"
        )));
    }
    Ok((-i).ln_1p() / (q - 1.0))
}

fn check_in_support<T: InnerTransform>(model: &GtldModel<T>, t: f64) -> Result<()> {
    let low = model.support_low();
    if t.is_nan() || t < low || t.is_infinite() {
        return Err(GtldError::OutOfSupport { x: t, low });
    }
    Ok(())
}

/// `E[(X − t)^n | X > t]`; `n = 1` is the mean residual life.
pub fn residual_moment<T: InnerTransform>(model: &GtldModel<T>, n: u32, t: f64) -> Result<f64> {
    check_in_support(model, t)?;
    if n == 0 {
        return Ok(1.0);
    }
    let s = model.survival(t)?;
    if s <= 0.0 {
        return Err(GtldError::Domain(format!("survival is zero at t = {t}")));
    }
    let nf = f64::from(n);
    let h = |x: f64| weighted_pdf(model, (x - t).powf(nf), x);
    require_decay(model, h, "residual life moment")?;
    let spec = spec().with_tolerances((1e-13 * s).max(1e-300), 1e-10);
    // split at conditional quantiles where they are still resolvable
    let mut points = vec![t];
    let f_t = 1.0 - s;
    for p in SPLIT_PROBS {
        let u = f_t + s * p;
        if u < 1.0 {
            if let Ok(q) = model.quantile(u) {
                if q > *points.last().unwrap() {
                    points.push(q);
                }
            }
        }
    }
    points.push(f64::INFINITY);
    let mut h = h;
    let mut total = 0.0;
    for w in points.windows(2) {
        total += integrate(&mut h, w[0], w[1], &spec)?.value;
    }
    Ok(total / s)
}

/// `E[(t − X)^n | X ≤ t]`; `n = 1` is the mean waiting time.
pub fn reversed_residual_moment<T: InnerTransform>(
    model: &GtldModel<T>,
    n: u32,
    t: f64,
) -> Result<f64> {
    check_in_support(model, t)?;
    let cdf = model.cdf(t)?;
    if cdf <= 0.0 {
        return Err(GtldError::Domain(format!("cdf is zero at t = {t}")));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let nf = f64::from(n);
    let spec = spec().with_tolerances((1e-13 * cdf).max(1e-300), 1e-10);
    let v = support_integral_with(
        model,
        &mut |x: f64| weighted_pdf(model, (t - x).powf(nf), x),
        model.support_low(),
        t,
        &spec,
    )?;
    Ok(v / cdf)
}

/// Cumulative information generating function `∫ F^m S^n dx` over the
/// support. `cigf(0, n)` is the cumulative residual information generating
/// measure. With `n = 0` the integrand tends to one in the upper tail, so
/// the integral is infinite on every built-in family.
pub fn cigf<T: InnerTransform>(model: &GtldModel<T>, m: f64, n: f64) -> Result<f64> {
    if !(m >= 0.0) || !m.is_finite() {
        return Err(GtldError::Domain(format!("cigf needs m >= 0, got {m}")));
    }
    if !(n >= 0.0) || !n.is_finite() {
        return Err(GtldError::Domain(format!("cigf needs n >= 0, got {n}")));
    }
    if n == 0.0 {
        return Err(GtldError::Divergent(
            "cumulative information generating measure: F^m → 1 on an unbounded support".into(),
        ));
    }
    let h = |x: f64| {
        let f = model.cdf(x).unwrap_or(0.0);
        let s = model.survival(x).unwrap_or(1.0);
        f.powf(m) * s.powf(n)
    };
    require_decay(model, h, "cumulative information generating function")?;
    support_integral(model, h, model.support_low(), f64::INFINITY)
}

/// Cumulative residual information generating measure `∫ S^n dx`.
pub fn crigm<T: InnerTransform>(model: &GtldModel<T>, n: f64) -> Result<f64> {
    cigf(model, 0.0, n)
}
