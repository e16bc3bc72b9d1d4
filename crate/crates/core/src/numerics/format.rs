//! Significant-digit rendering shared by every text/CSV/JSON emitter.

/// `v` rounded to `digits` significant digits. Zero and non-finite values
/// pass through.
pub fn round_sig(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", digits.max(1) - 1, v).parse().unwrap_or(v)
}

/// Fixed notation with `digits` significant digits for moderate magnitudes,
/// scientific notation otherwise.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    // exponent after rounding, so 9.9999996 counts as 10
    let exp: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    if !(-4..15).contains(&exp) {
        return sci;
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_and_scientific() {
        assert_eq!(format_sig(-0.2283071234, 6), "-0.228307");
        assert_eq!(format_sig(110.20214, 6), "110.202");
        assert_eq!(format_sig(2.5, 6), "2.50000");
        assert_eq!(format_sig(5.7e-5, 3), "5.70e-5");
        assert_eq!(format_sig(1.5e20, 2), "1.5e20");
        assert_eq!(format_sig(f64::INFINITY, 6), "inf");
    }

    #[test]
    fn carry_into_next_decade() {
        assert_eq!(format_sig(9.9999996, 6), "10.0000");
        assert_eq!(format_sig(0.000099999999, 3), "0.000100");
    }

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.123456789, 3), 0.123);
        assert_eq!(round_sig(-98765.4, 2), -99000.0);
        assert_eq!(round_sig(0.0, 4), 0.0);
        assert!(round_sig(f64::NAN, 4).is_nan());
    }
}
