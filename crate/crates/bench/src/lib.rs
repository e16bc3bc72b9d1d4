//! Benchmarks for `gtld`; see `benches/`. Run with `cargo bench -p gtld-bench`.

use gtld::{Family, GtldModel};

/// One representative parameter set per sub-family.
pub fn representative_models() -> Vec<GtldModel> {
    Family::ALL
        .iter()
        .map(|&f| {
            let shape: Vec<f64> = match f.shape_names().len() {
                0 => vec![],
                1 if f == Family::Gtp1 => vec![0.5],
                1 => vec![1.5],
                _ => vec![1.5, 0.3],
            };
            let mut p = shape;
            p.extend([1.0, 2.0, 0.4]);
            GtldModel::from_slice(f, &p).expect("valid parameters")
        })
        .collect()
}
