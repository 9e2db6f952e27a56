use std::str::FromStr;

use serde_json::{Map, Number, Value};

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros dropped,
/// exponent form outside `1e-4 <= |x| < 1e17`.
pub fn g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

/// Number for human-readable output: shortest round-trip form, switching to
/// exponent notation for very small or very large magnitudes.
pub fn text_num(x: f64) -> String {
    if x != 0.0 && x.is_finite() && (x.abs() < 1e-4 || x.abs() >= 1e16) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// A JSON number printed with [`g17`]; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&g17(x)).expect("g17 output is a JSON number"))
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn strings<I, S>(items: I) -> Value
where
    I: IntoIterator<Item = S>,
    S: ToString,
{
    Value::Array(items.into_iter().map(|s| Value::String(s.to_string())).collect())
}

/// Starts a top-level report with the schema version and command name.
pub fn report(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), Value::from(1));
    m.insert("command".into(), Value::from(command));
    m
}

pub fn render(map: Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g17() {
        assert_eq!(g17(2.0), "2");
        assert_eq!(g17(0.5), "0.5");
        assert_eq!(g17(2.0 / 3.0), "0.66666666666666663");
        assert_eq!(g17(0.1), "0.10000000000000001");
        assert_eq!(g17(1e-7), "9.9999999999999995e-08");
        assert_eq!(g17(1e20), "1e+20");
        assert_eq!(g17(-1.5), "-1.5");
        assert_eq!(g17(123456.0), "123456");
        assert_eq!(g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(g17(1e16), "10000000000000000");
        assert_eq!(g17(1e17), "1e+17");
    }

    #[test]
    fn text_numbers() {
        assert_eq!(text_num(0.5), "0.5");
        assert_eq!(text_num(7.2e-12), "7.2e-12");
        assert_eq!(text_num(0.0), "0");
    }

    #[test]
    fn numbers_keep_their_text() {
        assert_eq!(serde_json::to_string(&num(0.1)).unwrap(), "0.10000000000000001");
        assert_eq!(num(f64::NAN), Value::Null);
    }
}
