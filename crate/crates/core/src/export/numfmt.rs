//! Fixed-significant-digit float formatting (no exponent form, no locale).

/// Formats with `sig` significant digits, trimming trailing zeros. Zero
/// (either sign) prints as `0`.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        // callers cull non-finite values; keep a stable spelling anyway
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = sig as i64 - 1 - magnitude;
    if decimals <= 0 {
        let scale = 10f64.powi((-decimals) as i32);
        let rounded = (x / scale).round() * scale;
        format!("{rounded:.0}")
    } else {
        let s = format!("{x:.*}", decimals as usize);
        let trimmed = s.trim_end_matches('0').trim_end_matches('.');
        if trimmed == "-0" {
            "0".to_string()
        } else {
            trimmed.to_string()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(fmt_sig(0.5, 6), "0.5");
        assert_eq!(fmt_sig(-0.5, 6), "-0.5");
        assert_eq!(fmt_sig(123456.7, 6), "123457");
        assert_eq!(fmt_sig(1234567.8, 6), "1234570");
        assert_eq!(fmt_sig(0.000123456789, 6), "0.000123457");
        assert_eq!(fmt_sig(0.0, 6), "0");
        assert_eq!(fmt_sig(-0.0, 6), "0");
        assert_eq!(fmt_sig(100.0, 6), "100");
    }

    #[test]
    fn parse_back_is_close() {
        for &x in &[3.14159265358979, -2.7e-5, 123456.789, 0.02, -30.0, 6.1e-17] {
            let s = fmt_sig(x, 12);
            let back: f64 = s.parse().unwrap();
            let tol = 1e-11 * x.abs().max(1e-30);
            assert!((back - x).abs() <= tol, "{x} -> {s} -> {back}");
        }
    }
}
