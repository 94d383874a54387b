//! Deterministic text formatting shared by the report serialisers and the
//! CLI: fixed 17-significant-digit floats, JSON string escaping.

/// Formats a float with 17 significant digits, locale-free, e.g.
/// `-1.1180339887498949e0`. Valid as a JSON number token.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "\"NaN\"".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "\"inf\"" } else { "\"-inf\"" }.to_string();
    }
    format!("{x:.16e}")
}

/// Escapes a string for inclusion in a JSON document (without quotes).
pub fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// Renders a float array as a JSON list.
pub fn json_f64_array(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|x| fmt_f64(*x)).collect();
    format!("[{}]", items.join(","))
}

/// Renders a string array as a JSON list of strings.
pub fn json_str_array(xs: &[String]) -> String {
    let items: Vec<String> = xs.iter().map(|x| format!("\"{}\"", json_escape(x))).collect();
    format!("[{}]", items.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::approx_constant)]
    fn float_formatting_is_fixed_width_scientific() {
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_f64(-1.4142135623730951), "-1.4142135623730951e0");
        assert_eq!(fmt_f64(0.0), "0.0000000000000000e0");
    }

    #[test]
    fn escaping() {
        assert_eq!(json_escape("a\"b\\c\nd"), "a\\\"b\\\\c\\nd");
    }
}
