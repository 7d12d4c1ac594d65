//! Number formatting with a fixed count of significant digits, in the style of C's `%g`.

/// Formats `x` with `digits` significant digits: trailing zeros are dropped,
/// scientific notation is used for exponents below −4 or at least `digits`,
/// and negative zero prints as `0`.
pub fn sig(x: f64, digits: usize) -> String {
    assert!(digits > 0);
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

/// Six significant digits, used for SVG output.
pub fn g6(x: f64) -> String {
    sig(x, 6)
}

/// Seven significant digits, used for printed reports.
pub fn g7(x: f64) -> String {
    sig(x, 7)
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
