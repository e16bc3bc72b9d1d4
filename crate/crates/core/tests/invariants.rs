mod common;

use gtld::properties::{
    density_power_integral, incomplete_moment, q_entropy, raw_moment, renyi_entropy,
    stress_strength, MomentMethod,
};
use gtld::{Family, GtldModel, ParamVector};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = Family> {
    (0..Family::ALL.len()).prop_map(|i| Family::ALL[i])
}

fn params(family: Family) -> impl Strategy<Value = ParamVector> {
    let shape: BoxedStrategy<Vec<f64>> = match family.shape_names().len() {
        0 => Just(vec![]).boxed(),
        1 => (0.3..3.0f64).prop_map(|a| vec![a]).boxed(),
        _ => (0.3..3.0f64, 0.05..1.0f64)
            .prop_map(|(a, g)| vec![a, g])
            .boxed(),
    };
    (shape, 0.2..3.0f64, 0.2..5.0f64, -1.0..=1.0f64)
        .prop_map(|(s, b, t, l)| ParamVector::new(s, b, t, l).unwrap())
}

fn model() -> impl Strategy<Value = GtldModel> {
    family().prop_flat_map(|f| params(f).prop_map(move |p| GtldModel::from_params(f, &p).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cdf_is_a_distribution_function(m in model(), a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (xl, xh) = (m.quantile(lo).unwrap(), m.quantile(hi).unwrap());
        let (fl, fh) = (m.cdf(xl).unwrap(), m.cdf(xh).unwrap());
        prop_assert!((0.0..=1.0).contains(&fl) && (0.0..=1.0).contains(&fh));
        prop_assert!(fl <= fh);
        let s = m.survival(xh).unwrap();
        prop_assert!((fh + s - 1.0).abs() < 1e-14);
    }

    #[test]
    fn quantile_inverts_cdf(m in model(), p in 0.001..0.999f64) {
        let x = m.quantile(p).unwrap();
        prop_assert!(x >= m.support_low());
        prop_assert!((m.cdf(x).unwrap() - p).abs() < 1e-9);
    }

    #[test]
    fn density_is_nonnegative_and_matches_log_density(m in model(), p in 0.001..0.999f64) {
        let x = m.quantile(p).unwrap();
        let f = m.pdf(x).unwrap();
        prop_assert!(f >= 0.0);
        if f > 0.0 && f.is_finite() {
            prop_assert!((f.ln() - m.ln_pdf(x)).abs() < 1e-12 * (1.0 + f.ln().abs()));
        }
    }

    #[test]
    fn reduction_to_baseline(f in family(), seed in any::<u64>(), x in 0.0..8.0f64) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut p = common::random_params(f, &mut rng);
        p.theta = 1.0;
        p.lambda = 0.0;
        let m = GtldModel::from_params(f, &p).unwrap();
        let x = m.support_low() + x;
        prop_assert!((m.cdf(x).unwrap() - common::reference_cdf(f, &p, x)).abs() < 1e-14);
    }

    #[test]
    fn stress_strength_is_affine_and_shift_invariant(l1 in -0.5..0.5f64, l2 in -0.5..0.5f64, c in -0.5..0.5f64) {
        let r = stress_strength(l1, l2).unwrap();
        let shifted = stress_strength(l1 + c, l2 + c).unwrap();
        prop_assert!((r - shifted).abs() < 1e-14);
        prop_assert!((r - 0.5 - (l2 - l1) / 6.0).abs() < 1e-14);
        prop_assert!((stress_strength(l1, l1).unwrap() - 0.5).abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn incomplete_moment_tends_to_full_moment(
        a in 0.8..2.5f64, b in 0.5..2.0f64, t in 0.7..3.0f64, l in -0.9..0.9f64
    ) {
        let m = GtldModel::from_slice(Family::Gtw, &[a, b, t, l]).unwrap();
        let full = raw_moment(&m, 1, MomentMethod::Quadrature).unwrap();
        let far = incomplete_moment(&m, 1, m.quantile(1.0 - 1e-14).unwrap(), MomentMethod::Quadrature).unwrap();
        prop_assert!(((far - full) / full).abs() < 1e-8);
        let mid = incomplete_moment(&m, 1, m.quantile(0.5).unwrap(), MomentMethod::Quadrature).unwrap();
        prop_assert!(mid > 0.0 && mid < full);
    }

    #[test]
    fn entropies_share_the_density_integral(
        a in 0.8..2.5f64, b in 0.5..2.0f64, t in 1.0..3.0f64, l in -0.9..0.9f64, q in 1.5..4.0f64
    ) {
        let m = GtldModel::from_slice(Family::Gtwe, &[a, b, t, l]).unwrap();
        let i = density_power_integral(&m, q, None).unwrap();
        let renyi = renyi_entropy(&m, q, None).unwrap();
        prop_assert!((((1.0 - q) * renyi).exp() - i).abs() < 1e-10 * i.max(1.0));
        if i < 1.0 {
            let h = q_entropy(&m, q, None).unwrap();
            prop_assert!((1.0 - ((q - 1.0) * h).exp() - i).abs() < 1e-10);
        }
    }
}
