//! Special functions, adaptive quadrature and series summation shared by the
//! rest of the crate. Everything here is a pure function of its inputs.

mod format;
mod quadrature;
mod series;
mod special;

pub use format::{format_sig, round_sig};
pub use quadrature::{integrate, Quadrature, QuadratureSpec};
pub use series::{sum_series, SeriesSpec, SeriesSum};
pub use special::{
    beta_fn, gamma_fn, gen_binom, ln_gamma, lower_incomplete_gamma, upper_incomplete_gamma,
    BinomialSequence,
};

/// SplitMix64 finalizer; used for deterministic seed derivation.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Pairwise (cascade) summation; result does not depend on how the slice was
/// produced, only on its order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
