//! Locale-free number formatting shared by the CSV writers.

/// 17 significant digits in scientific notation, `.` as decimal separator.
/// Parses back to the identical `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}
