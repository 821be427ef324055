//! Text formatting for emitted values.
//!
//! Exact rationals print as `p/q`, approximate reals with 15 significant
//! digits (shortest form, `%.15g` style) and symbolic infinity as `inf(sym)`.
//! Fifteen digits survive a decimal -> binary -> decimal round trip, so a
//! printed value re-parses and re-prints identically.

use num_rational::BigRational;
use num_traits::One;

pub const SYMBOLIC_INFINITY: &str = "inf(sym)";

pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.14e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let m = trim_zeros(mantissa.to_string());
        format!("{}e{}", m, exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses anything [`format_real`] or [`format_rational`] can emit.
pub fn parse_value(s: &str) -> Option<f64> {
    let s = s.trim();
    if s == SYMBOLIC_INFINITY {
        return Some(f64::INFINITY);
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: f64 = p.trim().parse().ok()?;
        let q: f64 = q.trim().parse().ok()?;
        return Some(p / q);
    }
    s.parse().ok()
}
