//! Built-in reference datasets and descriptive statistics.

use serde::Serialize;

use crate::error::{GtldError, Result};
use crate::model::Sample;

/// Gauge lengths (20 mm), 74 observations.
///
/// The run `2.809, 2.818, 2.821, 2.848, 2.880` appears twice in the
/// source listing. It is kept verbatim because the reference fits of this
/// dataset were computed from the listing as given.
pub const GAUGE: [f64; 74] = [
    1.312, 1.314, 1.479, 1.552, 1.700, 1.803, 1.861, 1.865, 1.944, 1.958, 1.966, 1.997, 2.006,
    2.021, 2.027, 2.055, 2.063, 2.098, 2.140, 2.179, 2.224, 2.240, 2.253, 2.270, 2.272, 2.274,
    2.301, 2.301, 2.359, 2.382, 2.382, 2.426, 2.434, 2.435, 2.478, 2.490, 2.511, 2.514, 2.535,
    2.554, 2.566, 2.570, 2.586, 2.629, 2.633, 2.642, 2.648, 2.684, 2.697, 2.726, 2.770, 2.773,
    2.800, 2.809, 2.818, 2.821, 2.848, 2.880, 2.809, 2.818, 2.821, 2.848, 2.880, 2.954, 3.012,
    3.067, 3.084, 3.090, 3.096, 3.128, 3.233, 3.433, 3.585, 3.585,
];

/// Failure times (weeks) of 50 components.
pub const FAILURE: [f64; 50] = [
    0.013, 0.065, 0.111, 0.111, 0.163, 0.309, 0.426, 0.535, 0.684, 0.747, 0.997, 1.284, 1.304,
    1.647, 1.829, 2.336, 2.838, 3.269, 3.977, 3.981, 4.520, 4.789, 4.849, 5.202, 5.291, 5.349,
    5.911, 6.018, 6.427, 6.456, 6.572, 7.023, 7.087, 7.291, 7.787, 8.596, 9.388, 10.261, 10.713,
    11.658, 13.006, 13.388, 13.842, 17.152, 17.283, 19.418, 23.471, 24.777, 32.795, 48.105,
];

pub const BUILTIN_NAMES: [&str; 2] = ["gauge", "failure"];

/// Look up a built-in dataset by name.
pub fn builtin(name: &str) -> Result<Sample> {
    match name.trim().to_ascii_lowercase().as_str() {
        "gauge" => Sample::new(
            GAUGE.to_vec(),
            "gauge lengths of 20 mm (Kundu and Raqab, 2009)",
        ),
        "failure" => Sample::new(
            FAILURE.to_vec(),
            "failure times in weeks of 50 components (Tanis and Saracoglu, 2022)",
        ),
        other => Err(GtldError::Domain(format!(
            "unknown dataset `{other}`; built-ins are {}",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}

/// Parse one value per line; `#` starts a comment. A single-column CSV with
/// a non-numeric header line is accepted too.
pub fn parse_values(text: &str, source: &str) -> Result<Sample> {
    let mut values = Vec::new();
    let mut seen_data = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let line = line.trim_end_matches(',').trim();
        if line.is_empty() {
            continue;
        }
        match line.trim_matches('"').parse::<f64>() {
            Ok(v) => {
                values.push(v);
                seen_data = true;
            }
            Err(_) if !seen_data && values.is_empty() => {
                // header row
                seen_data = true;
            }
            Err(_) => {
                return Err(GtldError::Config {
                    line: i + 1,
                    message: format!("`{line}` is not a number"),
                })
            }
        }
    }
    Sample::new(values, source)
}

/// Summary statistics. Quartiles use linear interpolation between order
/// statistics (`x[(n−1)p]`). Skewness and kurtosis are reported both as
/// plain moment ratios (`g1`, excess `g2`) and with the usual small-sample
/// adjustments (`G1`, `G2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Descriptive {
    pub n: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub mean: f64,
    pub q3: f64,
    pub max: f64,
    pub variance: f64,
    pub skewness_g1: f64,
    pub kurtosis_g2: f64,
    pub skewness_adjusted: f64,
    pub kurtosis_adjusted: f64,
}

fn interpolated_quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn describe(sample: &Sample) -> Descriptive {
    let s = sample.sorted();
    let n = s.len();
    let nf = n as f64;
    let mean = sample.mean();
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for x in s {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    let g1 = m3 / m2.powf(1.5);
    let g2 = m4 / (m2 * m2) - 3.0;
    let (adj_skew, adj_kurt) = if n > 3 {
        (
            g1 * (nf * (nf - 1.0)).sqrt() / (nf - 2.0),
            ((nf + 1.0) * g2 + 6.0) * (nf - 1.0) / ((nf - 2.0) * (nf - 3.0)),
        )
    } else {
        (f64::NAN, f64::NAN)
    };
    Descriptive {
        n,
        min: s[0],
        q1: interpolated_quantile(s, 0.25),
        median: interpolated_quantile(s, 0.5),
        mean,
        q3: interpolated_quantile(s, 0.75),
        max: s[n - 1],
        variance: if n > 1 { m2 * nf / (nf - 1.0) } else { 0.0 },
        skewness_g1: g1,
        kurtosis_g2: g2,
        skewness_adjusted: adj_skew,
        kurtosis_adjusted: adj_kurt,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dataset_sizes() {
        assert_eq!(builtin("gauge").unwrap().len(), 74);
        assert_eq!(builtin("FAILURE").unwrap().len(), 50);
        assert!(builtin("nosuch").is_err());
    }

    #[test]
    fn gauge_summary() {
        let d = describe(&builtin("gauge").unwrap());
        assert_eq!(d.min, 1.312);
        assert_eq!(d.max, 3.585);
        assert!((d.mean - 2.477).abs() < 5e-4);
        assert!((d.median - 2.513).abs() < 5e-4, "{}", d.median);
        assert!((d.q1 - 2.150).abs() < 5e-4, "{}", d.q1);
        assert!((d.q3 - 2.816).abs() < 5e-4, "{}", d.q3);
        assert!((d.skewness_adjusted + 0.157396).abs() < 5e-6);
        assert!((d.kurtosis_adjusted - 0.03344725).abs() < 5e-6);
    }

    #[test]
    fn failure_summary() {
        let d = describe(&builtin("failure").unwrap());
        assert!((d.mean - 7.821).abs() < 5e-4);
        assert!((d.median - 5.320).abs() < 5e-4);
        assert!((d.q1 - 1.390).abs() < 5e-4, "{}", d.q1);
        assert!((d.q3 - 10.043).abs() < 5e-4, "{}", d.q3);
        assert!((d.skewness_adjusted - 2.377991).abs() < 5e-6);
        assert!((d.kurtosis_adjusted - 7.228855).abs() < 5e-6);
    }

    #[test]
    fn parse_plain_and_csv() {
        let s = parse_values("# comment\n1.5\n\n2.5 # trailing\n", "t").unwrap();
        assert_eq!(s.values(), &[1.5, 2.5]);
        let s = parse_values("time\n3\n4\n", "t").unwrap();
        assert_eq!(s.values(), &[3.0, 4.0]);
        assert!(matches!(
            parse_values("1\nabc\n", "t"),
            Err(GtldError::Config { line: 2, .. })
        ));
        assert!(parse_values("1\n-2\n", "t").is_err());
    }
}
