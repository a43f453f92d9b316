//! Diff-stable numeric output: every emitted real is rounded to a fixed
//! number of significant digits before it is written.

use serde::Serialize;
use serde_json::Value;

/// Significant digits used for all CSV and JSON output.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds `x` to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = digits.max(1);
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// Formats `x` with [`SIGNIFICANT_DIGITS`] significant digits, shortest form.
pub fn format_sig(x: f64) -> String {
    let r = round_sig(x, SIGNIFICANT_DIGITS);
    if r == 0.0 {
        // normalizes -0
        return "0".to_string();
    }
    format!("{r}")
}

/// Rounds every floating-point number inside a JSON tree in place.
pub fn round_json(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                let r = round_sig(x, SIGNIFICANT_DIGITS);
                let r = if r == 0.0 { 0.0 } else { r };
                if let Some(num) = serde_json::Number::from_f64(r) {
                    *n = num;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Serializes to pretty JSON with all reals rounded.
pub fn to_json_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_json(&mut v);
    serde_json::to_string_pretty(&v)
}
