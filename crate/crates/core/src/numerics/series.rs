use crate::error::{GtldError, Result};

/// Truncation policy for [`sum_series`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSpec {
    pub tail_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesSpec {
    fn default() -> Self {
        Self {
            tail_tol: 1e-14,
            max_terms: 10_000_000,
        }
    }
}

impl SeriesSpec {
    pub fn new(tail_tol: f64, max_terms: usize) -> Result<Self> {
        if !(tail_tol > 0.0) {
            return Err(GtldError::invalid("tail_tol", tail_tol, "must be positive"));
        }
        if max_terms == 0 {
            return Err(GtldError::invalid("max_terms", 0.0, "must be at least 1"));
        }
        Ok(Self {
            tail_tol,
            max_terms,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub terms: usize,
}

/// Sum `term(0) + term(1) + ...`, stopping once three consecutive terms are
/// below `tail_tol` in magnitude.
///
/// Terms are requested strictly in order `k = 0, 1, 2, ...`, so `term` may
/// carry recurrence state between calls.
pub fn sum_series<F: FnMut(usize) -> f64>(mut term: F, spec: &SeriesSpec) -> Result<SeriesSum> {
    let mut sum = 0.0;
    let mut compensation = 0.0;
    let mut small_run = 0;
    let mut last = 0.0;
    for k in 0..spec.max_terms {
        let t = term(k);
        if !t.is_finite() {
            return Err(GtldError::Domain(format!("series term {k} is not finite")));
        }
        // Kahan summation; long slowly-decaying tails lose digits otherwise
        let y = t - compensation;
        let s = sum + y;
        compensation = (s - sum) - y;
        sum = s;
        last = t;
        if t.abs() < spec.tail_tol {
            small_run += 1;
            if small_run == 3 {
                return Ok(SeriesSum {
                    value: sum,
                    terms: k + 1,
                });
            }
        } else {
            small_run = 0;
        }
    }
    Err(GtldError::SeriesNonConvergence {
        partial: sum,
        last_term: last,
        terms: spec.max_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric() {
        let s = sum_series(|k| 0.5f64.powi(k as i32), &SeriesSpec::default()).unwrap();
        assert!((s.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn zero_series_stops_after_three_terms() {
        let s = sum_series(|_| 0.0, &SeriesSpec::default()).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.terms, 3);
    }

    #[test]
    fn isolated_small_term_does_not_truncate() {
        // a zero early term followed by nonzero ones must not stop the sum
        let terms = [1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0];
        let s = sum_series(
            |k| terms.get(k).copied().unwrap_or(0.0),
            &SeriesSpec::default(),
        )
        .unwrap();
        assert_eq!(s.value, 2.0);
    }

    #[test]
    fn harmonic_does_not_converge() {
        let spec = SeriesSpec::new(1e-12, 1000).unwrap();
        assert!(matches!(
            sum_series(|k| 1.0 / (k + 1) as f64, &spec),
            Err(GtldError::SeriesNonConvergence { terms: 1000, .. })
        ));
    }
}
