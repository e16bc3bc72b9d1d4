//! The generalized transmuted lifetime family over a pluggable inner
//! transform `G`.
//!
//! With `u = 1 - exp(-β G(x))` and `v = u^θ` the distribution function is
//! `F = (1+λ) v - λ v²`, which factors as `F = v (1 + λ - λ v)` and
//! `1 - F = (1 - v)(1 - λ v)`. Every evaluator below works from `ln u` so
//! that both tails keep full relative precision.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GtldError, Result};
use crate::subfamilies::Transform;

/// A strictly increasing map `G` with `G(low⁺) = 0` and `G(∞) = ∞`.
///
/// Implement this to plug a new baseline into [`GtldModel`]; the eight
/// built-in sub-families live in [`Transform`].
pub trait InnerTransform {
    fn eval(&self, x: f64) -> f64;

    fn deriv(&self, x: f64) -> f64;

    /// `ln G'(x)`; override where `G'` overflows before its logarithm does.
    fn ln_deriv(&self, x: f64) -> f64 {
        self.deriv(x).ln()
    }

    fn inverse(&self, y: f64) -> f64;

    fn support_low(&self) -> f64 {
        0.0
    }

    fn shape_params(&self) -> Vec<(&'static str, f64)>;

    /// `(c, k)` such that `G(low + d) ≈ c·d^k` as `d → 0⁺`. Used for the
    /// density limit at the support edge and for integrability checks.
    fn leading_order(&self) -> (f64, f64);

    /// `Some(a)` when `G(x) = x^a` exactly (the Weibull-type closed forms).
    fn power_law_exponent(&self) -> Option<f64> {
        None
    }
}

/// Parameter tuple `(ψ, β, θ, λ)`: sub-family shape parameters followed by
/// scale, power and transmutation parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamVector {
    pub shape: Vec<f64>,
    pub beta: f64,
    pub theta: f64,
    pub lambda: f64,
}

impl ParamVector {
    pub fn new(shape: Vec<f64>, beta: f64, theta: f64, lambda: f64) -> Result<Self> {
        let p = Self {
            shape,
            beta,
            theta,
            lambda,
        };
        p.validate()?;
        Ok(p)
    }

    /// Build from the flat layout `[ψ..., β, θ, λ]`.
    pub fn from_slice(values: &[f64], shape_len: usize) -> Result<Self> {
        if values.len() != shape_len + 3 {
            return Err(GtldError::Domain(format!(
                "expected {} parameters, got {}",
                shape_len + 3,
                values.len()
            )));
        }
        Self::new(
            values[..shape_len].to_vec(),
            values[shape_len],
            values[shape_len + 1],
            values[shape_len + 2],
        )
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut out = self.shape.clone();
        out.extend([self.beta, self.theta, self.lambda]);
        out
    }

    pub fn len(&self) -> usize {
        self.shape.len() + 3
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn validate(&self) -> Result<()> {
        for (i, s) in self.shape.iter().enumerate() {
            if !(*s > 0.0) || !s.is_finite() {
                return Err(GtldError::invalid(
                    &format!("shape[{i}]"),
                    *s,
                    "shape parameters must be positive and finite",
                ));
            }
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(GtldError::invalid("beta", self.beta, "must be positive"));
        }
        if !(self.theta > 0.0) || !self.theta.is_finite() {
            return Err(GtldError::invalid("theta", self.theta, "must be positive"));
        }
        if !(self.lambda.abs() <= 1.0) {
            return Err(GtldError::invalid(
                "lambda",
                self.lambda,
                "must lie in [-1, 1]",
            ));
        }
        Ok(())
    }
}

/// A validated dataset of positive reals.
///
/// `values` keeps the original order; `sorted` is the ascending copy the
/// order-statistic based objectives work from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    values: Vec<f64>,
    sorted: Vec<f64>,
    pub source: String,
}

impl Sample {
    pub fn new(values: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(GtldError::Domain("sample is empty".into()));
        }
        for (index, x) in values.iter().enumerate() {
            if !x.is_finite() {
                return Err(GtldError::NonFinite { index });
            }
            if *x <= 0.0 {
                return Err(GtldError::Domain(format!(
                    "sample value {x} at index {index} is not positive"
                )));
            }
        }
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        Ok(Self {
            values,
            sorted,
            source: source.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }
}

/// Median plus the octile/quartile shape measures derived from the quantile
/// function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantileMeasures {
    pub median: f64,
    /// Moors kurtosis `[Q(7/8) - Q(5/8) + Q(3/8) - Q(1/8)] / [Q(6/8) - Q(2/8)]`.
    pub moors_kurtosis: f64,
    /// Bowley skewness `[Q(3/4) + Q(1/4) - 2 Q(1/2)] / [Q(3/4) - Q(1/4)]`.
    pub bowley_skewness: f64,
}

impl QuantileMeasures {
    pub fn from_quantiles<Q: Fn(f64) -> Result<f64>>(q: Q) -> Result<Self> {
        let o = |k: f64| q(k / 8.0);
        let median = o(4.0)?;
        let moors = (o(7.0)? - o(5.0)? + o(3.0)? - o(1.0)?) / (o(6.0)? - o(2.0)?);
        let (q1, q3) = (o(2.0)?, o(6.0)?);
        Ok(Self {
            median,
            moors_kurtosis: moors,
            bowley_skewness: (q3 + q1 - 2.0 * median) / (q3 - q1),
        })
    }
}

/// `GTLD(ψ, β, θ, λ)` over an inner transform. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct GtldModel<T = Transform> {
    transform: T,
    beta: f64,
    theta: f64,
    lambda: f64,
}

/// `ln(1 - e^{-z})` for `z ≥ 0`.
fn ln_one_minus_exp(z: f64) -> f64 {
    if z > std::f64::consts::LN_2 {
        (-(-z).exp()).ln_1p()
    } else {
        (-(-z).exp_m1()).ln()
    }
}

impl<T: InnerTransform> GtldModel<T> {
    pub fn new(transform: T, beta: f64, theta: f64, lambda: f64) -> Result<Self> {
        ParamVector {
            shape: Vec::new(),
            beta,
            theta,
            lambda,
        }
        .validate()?;
        Ok(Self {
            transform,
            beta,
            theta,
            lambda,
        })
    }

    pub fn transform(&self) -> &T {
        &self.transform
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn support_low(&self) -> f64 {
        self.transform.support_low()
    }

    fn check_x(&self, x: f64) -> Result<()> {
        if x.is_nan() {
            return Err(GtldError::Domain("x is NaN".into()));
        }
        let low = self.support_low();
        if x < low {
            return Err(GtldError::OutOfSupport { x, low });
        }
        Ok(())
    }

    /// `ln u` with `u = 1 - exp(-β G(x))`; `-∞` at the support edge.
    fn ln_u(&self, x: f64) -> f64 {
        ln_one_minus_exp(self.beta * self.transform.eval(x))
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        if x == self.support_low() {
            return Ok(0.0);
        }
        let tv = self.theta * self.ln_u(x);
        let v = tv.exp();
        let f = v * (1.0 + self.lambda - self.lambda * v);
        if f <= 0.5 {
            return Ok(f.clamp(0.0, 1.0));
        }
        // the upper half as a complement keeps the cdf monotone to the last ulp
        Ok((1.0 - self.survival_from(tv)).clamp(0.0, 1.0))
    }

    pub fn survival(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        if x == self.support_low() {
            return Ok(1.0);
        }
        Ok(self.survival_from(self.theta * self.ln_u(x)))
    }

    /// `S` from `θ ln u`, without cancellation as `v → 1`.
    fn survival_from(&self, tv: f64) -> f64 {
        let one_minus_v = -tv.exp_m1();
        let v = tv.exp();
        (one_minus_v * (1.0 - self.lambda * v)).clamp(0.0, 1.0)
    }

    /// `ln f(x)` for `x` strictly inside the support.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x.is_infinite() {
            return f64::NEG_INFINITY;
        }
        let g = self.transform.eval(x);
        if g.is_infinite() {
            // exp(−βG) underflows far sooner than G' overflows
            return f64::NEG_INFINITY;
        }
        let ln_u = ln_one_minus_exp(self.beta * g);
        let v = (self.theta * ln_u).exp();
        let factor = 1.0 + self.lambda - 2.0 * self.lambda * v;
        self.theta.ln() + self.beta.ln() + self.transform.ln_deriv(x) - self.beta * g
            + (self.theta - 1.0) * ln_u
            + factor.max(0.0).ln()
    }

    /// Density; at the support edge this is the one-sided limit, which is
    /// `0`, a finite constant, or `+∞` depending on `θ` and `G`.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        if x == self.support_low() {
            return Ok(self.pdf_at_support_low());
        }
        if x.is_infinite() {
            return Ok(0.0);
        }
        let lp = self.ln_pdf(x);
        Ok(if lp.is_nan() { 0.0 } else { lp.exp() })
    }

    /// Exponent `e` and coefficient `C` of `f(low + d) ≈ C·d^e`.
    pub fn edge_behaviour(&self) -> (f64, f64) {
        let (c, k) = self.transform.leading_order();
        let scaled = (self.beta * c).powf(self.theta);
        if self.lambda > -1.0 {
            (
                k * self.theta - 1.0,
                self.theta * k * scaled * (1.0 + self.lambda),
            )
        } else {
            (
                2.0 * k * self.theta - 1.0,
                2.0 * self.theta * k * scaled * scaled,
            )
        }
    }

    fn pdf_at_support_low(&self) -> f64 {
        let (exponent, coef) = self.edge_behaviour();
        if exponent.abs() < 1e-12 {
            coef
        } else if exponent > 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn hazard(&self, x: f64) -> Result<f64> {
        let s = self.survival(x)?;
        if s <= 0.0 {
            return Err(GtldError::Overflow(format!(
                "survival underflows to zero at x = {x}"
            )));
        }
        Ok(self.pdf(x)? / s)
    }

    /// Inverse distribution function.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(GtldError::Domain(format!(
                "quantile needs 0 < p < 1, got {p}"
            )));
        }
        let l = self.lambda;
        // root of λ v² - (1+λ) v + p = 0 in rationalized form; no λ = 0 branch
        let a = 2.0 * p / (1.0 + l + ((1.0 + l).powi(2) - 4.0 * p * l).max(0.0).sqrt());
        let ln_u = a.ln() / self.theta;
        let u = ln_u.exp();
        let ln_one_minus_u = if u < 0.5 {
            (-u).ln_1p()
        } else {
            (-ln_u.exp_m1()).max(1e-16).ln()
        };
        let y = -ln_one_minus_u / self.beta;
        Ok(self.transform.inverse(y))
    }

    /// One inverse-transform draw.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let u: f64 = rng.random();
            if u > 0.0 {
                if let Ok(x) = self.quantile(u) {
                    return x;
                }
            }
        }
    }

    /// `n` i.i.d. draws by inverse transform, driven by a ChaCha8 stream
    /// seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Sample> {
        if n == 0 {
            return Err(GtldError::invalid(
                "n",
                0.0,
                "sample size must be at least 1",
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..n).map(|_| self.draw(&mut rng)).collect();
        Sample::new(values, format!("simulated (n = {n}, seed = {seed})"))
    }

    pub fn quantile_measures(&self) -> Result<QuantileMeasures> {
        QuantileMeasures::from_quantiles(|p| self.quantile(p))
    }
}
