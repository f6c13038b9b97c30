//! Number formatting for CSV artifacts.
//!
//! `{:?}` on `f64` prints the shortest string that parses back to the same
//! value, switching to exponent notation for very large or small magnitudes.

pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}
