//! Six-significant-digit rounding shared by the exporters and display code.

/// Round to 6 significant decimal digits. Negative zero normalizes to zero.
pub(crate) fn sig6(v: f64) -> f64 {
    if !v.is_finite() {
        return v;
    }
    if v == 0.0 {
        return 0.0;
    }
    format!("{v:.5e}").parse().unwrap()
}

/// Shortest decimal form of `v` rounded to 6 significant digits.
pub fn format_sig6(v: f64) -> String {
    format!("{}", sig6(v))
}
