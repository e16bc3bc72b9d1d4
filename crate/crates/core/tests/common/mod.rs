#![allow(dead_code)]

use gtld::{Family, GtldModel, ParamVector};
use rand::Rng;

/// A random parameter vector in a moderate region of `family`'s space.
pub fn random_params<R: Rng>(family: Family, rng: &mut R) -> ParamVector {
    let shape = match family {
        Family::Gte | Family::Gtr => vec![],
        Family::Gtmw => vec![rng.random_range(0.5..2.5), rng.random_range(0.05..1.0)],
        Family::Gtwe => vec![rng.random_range(0.5..2.0)],
        Family::Gtl | Family::Gtp1 => vec![rng.random_range(0.5..3.0)],
        _ => vec![rng.random_range(0.5..3.0)],
    };
    ParamVector::new(
        shape,
        rng.random_range(0.3..3.0),
        rng.random_range(0.5..4.0),
        rng.random_range(-0.95..0.95),
    )
    .unwrap()
}

pub fn random_model<R: Rng>(family: Family, rng: &mut R) -> GtldModel {
    GtldModel::from_params(family, &random_params(family, rng)).unwrap()
}

/// Inner transform written out independently of the library.
pub fn baseline_g(family: Family, shape: &[f64], x: f64) -> f64 {
    match family {
        Family::Gte => x,
        Family::Gtr => x * x / 2.0,
        Family::Gtw => x.powf(shape[0]),
        Family::Gtmw => x.powf(shape[0]) * (shape[1] * x).exp(),
        Family::Gtwe => (x.powf(shape[0])).exp() - 1.0,
        Family::Gtb12 => (1.0 + x.powf(shape[0])).ln(),
        Family::Gtl => (1.0 + x / shape[0]).ln(),
        Family::Gtp1 => (x / shape[0]).ln(),
    }
}

/// Closed-form GTLD cdf from the defining formula.
pub fn reference_cdf(family: Family, p: &ParamVector, x: f64) -> f64 {
    let u = -(-p.beta * baseline_g(family, &p.shape, x)).exp_m1();
    let v = u.powf(p.theta);
    (1.0 + p.lambda) * v - p.lambda * v * v
}
