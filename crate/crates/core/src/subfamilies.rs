//! The eight built-in inner transforms.
//!
//! | id      | G(x)              | shape ψ  | support   |
//! |---------|-------------------|----------|-----------|
//! | `gte`   | x                 | –        | (0, ∞)    |
//! | `gtr`   | x²/2              | –        | (0, ∞)    |
//! | `gtw`   | x^α               | α        | (0, ∞)    |
//! | `gtmw`  | x^α e^{γx}        | α, γ     | (0, ∞)    |
//! | `gtwe`  | e^{x^α} − 1       | α        | (0, ∞)    |
//! | `gtb12` | log(1 + x^α)      | α        | (0, ∞)    |
//! | `gtl`   | log(1 + x/α)      | α        | (0, ∞)    |
//! | `gtp1`  | log(x/α)          | α        | (α, ∞)    |
//!
//! For `gtl` and `gtp1` the shape parameter α is an inner *scale*, not a
//! power.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GtldError, Result};
use crate::model::{GtldModel, InnerTransform, ParamVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gte,
    Gtr,
    Gtw,
    Gtmw,
    Gtwe,
    Gtb12,
    Gtl,
    Gtp1,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Gte,
        Family::Gtr,
        Family::Gtw,
        Family::Gtmw,
        Family::Gtwe,
        Family::Gtb12,
        Family::Gtl,
        Family::Gtp1,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Family::Gte => "gte",
            Family::Gtr => "gtr",
            Family::Gtw => "gtw",
            Family::Gtmw => "gtmw",
            Family::Gtwe => "gtwe",
            Family::Gtb12 => "gtb12",
            Family::Gtl => "gtl",
            Family::Gtp1 => "gtp1",
        }
    }

    pub fn shape_names(self) -> &'static [&'static str] {
        match self {
            Family::Gte | Family::Gtr => &[],
            Family::Gtmw => &["alpha", "gamma"],
            _ => &["alpha"],
        }
    }

    /// Names of the full parameter vector in `[ψ..., β, θ, λ]` order.
    pub fn param_names(self) -> Vec<&'static str> {
        let mut names = self.shape_names().to_vec();
        names.extend(["beta", "theta", "lambda"]);
        names
    }

    /// Number of free parameters (used for AIC).
    pub fn n_params(self) -> usize {
        self.shape_names().len() + 3
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = GtldError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.id() == lower)
            .ok_or_else(|| GtldError::UnknownFamily(s.to_string()))
    }
}

/// Inner transform of one of the built-in sub-families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform {
    family: Family,
    alpha: f64,
    gamma: f64,
}

impl Transform {
    pub fn new(family: Family, shape: &[f64]) -> Result<Self> {
        let names = family.shape_names();
        if shape.len() != names.len() {
            return Err(GtldError::Domain(format!(
                "{family} takes {} shape parameter(s) ({}), got {}",
                names.len(),
                names.join(", "),
                shape.len()
            )));
        }
        for (name, v) in names.iter().zip(shape) {
            if !(*v > 0.0) || !v.is_finite() {
                return Err(GtldError::invalid(name, *v, "must be positive and finite"));
            }
        }
        Ok(Self {
            family,
            alpha: shape.first().copied().unwrap_or(1.0),
            gamma: shape.get(1).copied().unwrap_or(0.0),
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn shape(&self) -> Vec<f64> {
        match self.family.shape_names().len() {
            0 => vec![],
            1 => vec![self.alpha],
            _ => vec![self.alpha, self.gamma],
        }
    }

    /// Solve `x^α e^{γx} = y` in log space. `y^{1/α}` is an upper bound
    /// (`e^{γx} ≥ 1`), which in turn bounds `e^{γx}` from above and yields a
    /// lower bound; Newton steps are kept inside the shrinking bracket.
    fn gtmw_inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if y.is_infinite() {
            return f64::INFINITY;
        }
        let (a, g) = (self.alpha, self.gamma);
        let ln_y = y.ln();
        let h = |x: f64| a * x.ln() + g * x - ln_y;
        let mut hi = (ln_y / a).exp();
        let mut lo = ((ln_y - g * hi) / a).exp();
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let hx = h(x);
            if hx == 0.0 {
                return x;
            }
            if hx > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let newton = x - hx / (a / x + g);
            let next = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - x).abs() <= 4.0 * f64::EPSILON * x {
                return next;
            }
            x = next;
        }
        x
    }
}

impl InnerTransform for Transform {
    fn eval(&self, x: f64) -> f64 {
        let a = self.alpha;
        match self.family {
            Family::Gte => x,
            Family::Gtr => 0.5 * x * x,
            Family::Gtw => x.powf(a),
            Family::Gtmw => x.powf(a) * (self.gamma * x).exp(),
            Family::Gtwe => x.powf(a).exp_m1(),
            Family::Gtb12 => x.powf(a).ln_1p(),
            Family::Gtl => (x / a).ln_1p(),
            Family::Gtp1 => (x / a).ln().max(0.0),
        }
    }

    fn deriv(&self, x: f64) -> f64 {
        let a = self.alpha;
        match self.family {
            Family::Gte => 1.0,
            Family::Gtr => x,
            Family::Gtw => a * x.powf(a - 1.0),
            Family::Gtmw => {
                let g = self.gamma;
                x.powf(a - 1.0) * (g * x).exp() * (a + g * x)
            }
            Family::Gtwe => a * x.powf(a - 1.0) * x.powf(a).exp(),
            Family::Gtb12 => a * x.powf(a - 1.0) / (1.0 + x.powf(a)),
            Family::Gtl => 1.0 / (a + x),
            Family::Gtp1 => 1.0 / x,
        }
    }

    fn ln_deriv(&self, x: f64) -> f64 {
        let a = self.alpha;
        match self.family {
            Family::Gte => 0.0,
            Family::Gtr => x.ln(),
            Family::Gtw => a.ln() + (a - 1.0) * x.ln(),
            Family::Gtmw => {
                let g = self.gamma;
                (a - 1.0) * x.ln() + g * x + (a + g * x).ln()
            }
            Family::Gtwe => a.ln() + (a - 1.0) * x.ln() + x.powf(a),
            Family::Gtb12 => a.ln() + (a - 1.0) * x.ln() - x.powf(a).ln_1p(),
            Family::Gtl => -(a + x).ln(),
            Family::Gtp1 => -x.ln(),
        }
    }

    fn inverse(&self, y: f64) -> f64 {
        let a = self.alpha;
        match self.family {
            Family::Gte => y,
            Family::Gtr => (2.0 * y).sqrt(),
            Family::Gtw => y.powf(1.0 / a),
            Family::Gtmw => self.gtmw_inverse(y),
            Family::Gtwe => y.ln_1p().powf(1.0 / a),
            Family::Gtb12 => y.exp_m1().powf(1.0 / a),
            Family::Gtl => a * y.exp_m1(),
            Family::Gtp1 => a * y.exp(),
        }
    }

    fn support_low(&self) -> f64 {
        match self.family {
            Family::Gtp1 => self.alpha,
            _ => 0.0,
        }
    }

    fn shape_params(&self) -> Vec<(&'static str, f64)> {
        self.family
            .shape_names()
            .iter()
            .copied()
            .zip(self.shape())
            .collect()
    }

    fn leading_order(&self) -> (f64, f64) {
        match self.family {
            Family::Gte => (1.0, 1.0),
            Family::Gtr => (0.5, 2.0),
            Family::Gtl | Family::Gtp1 => (1.0 / self.alpha, 1.0),
            _ => (1.0, self.alpha),
        }
    }

    fn power_law_exponent(&self) -> Option<f64> {
        match self.family {
            Family::Gte => Some(1.0),
            Family::Gtw => Some(self.alpha),
            _ => None,
        }
    }
}

/// Build the transform for `family` from its shape parameters.
pub fn make_transform(family: Family, shape: &[f64]) -> Result<Transform> {
    Transform::new(family, shape)
}

impl GtldModel<Transform> {
    /// Build a sub-family model from a full parameter vector.
    pub fn from_params(family: Family, params: &ParamVector) -> Result<Self> {
        params.validate()?;
        GtldModel::new(
            Transform::new(family, &params.shape)?,
            params.beta,
            params.theta,
            params.lambda,
        )
    }

    /// Build from the flat layout `[ψ..., β, θ, λ]`.
    pub fn from_slice(family: Family, values: &[f64]) -> Result<Self> {
        Self::from_params(
            family,
            &ParamVector::from_slice(values, family.shape_names().len())?,
        )
    }

    pub fn family(&self) -> Family {
        self.transform().family()
    }

    pub fn params(&self) -> ParamVector {
        ParamVector {
            shape: self.transform().shape(),
            beta: self.beta(),
            theta: self.theta(),
            lambda: self.lambda(),
        }
    }
}

/// The sub-family CDF written out directly as `(1+λ)H^θ − λH^{2θ}` with the
/// baseline `H` in its textbook form. Independent of the generic evaluator;
/// used as a differential check.
pub fn closed_form_cdf(family: Family, params: &ParamVector, x: f64) -> Result<f64> {
    params.validate()?;
    let t = Transform::new(family, &params.shape)?;
    if x.is_nan() {
        return Err(GtldError::Domain("x is NaN".into()));
    }
    let low = t.support_low();
    if x < low {
        return Err(GtldError::OutOfSupport { x, low });
    }
    let (a, b) = (t.alpha, params.beta);
    let h = match family {
        Family::Gte => 1.0 - (-b * x).exp(),
        Family::Gtr => 1.0 - (-b * x * x / 2.0).exp(),
        Family::Gtw => 1.0 - (-b * x.powf(a)).exp(),
        Family::Gtmw => 1.0 - (-b * x.powf(a) * (t.gamma * x).exp()).exp(),
        Family::Gtwe => 1.0 - (-b * (x.powf(a).exp() - 1.0)).exp(),
        Family::Gtb12 => 1.0 - (1.0 + x.powf(a)).powf(-b),
        Family::Gtl => 1.0 - (1.0 + x / a).powf(-b),
        Family::Gtp1 => 1.0 - (x / a).powf(-b),
    };
    let (th, l) = (params.theta, params.lambda);
    Ok((1.0 + l) * h.powf(th) - l * h.powf(2.0 * th))
}
