use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::format::{format_rational, format_real};

/// A real parameter that may also carry an exact rational value.
#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub value: f64,
    pub exact: Option<BigRational>,
}

impl Param {
    pub fn float(value: f64) -> Self {
        Self { value, exact: None }
    }

    pub fn rational(q: BigRational) -> Self {
        let value = rational_to_f64(&q);
        Self { value, exact: Some(q) }
    }

    /// `p/q` as an exact parameter.
    pub fn ratio(p: i64, q: i64) -> Self {
        Self::rational(BigRational::new(p.into(), q.into()))
    }

    /// Parses `"p/q"`, an integer, or a decimal literal into an exact value.
    pub fn parse_exact(text: &str) -> Option<Self> {
        let text = text.trim();
        if let Some((p, q)) = text.split_once('/') {
            let p: num_bigint::BigInt = p.trim().parse().ok()?;
            let q: num_bigint::BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            return Some(Self::rational(BigRational::new(p, q)));
        }
        parse_decimal(text).map(Self::rational)
    }
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let negative = mantissa.starts_with('-');
    let digits = mantissa.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: num_bigint::BigInt = format!("{}{}", int_part, frac_part).parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = num_bigint::BigInt::from(10);
    let mut q = BigRational::from_integer(all);
    if scale >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -q } else { q })
}

/// Converts a rational to the nearest-ish `f64`, also for huge numerators
/// and denominators.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 && n.abs() < 9.0e15 && d < 9.0e15 {
            return n / d;
        }
    }
    // floor(q · 2^k) with about 64 significant bits, then scale back
    let k = 64 - (q.numer().bits() as i64 - q.denom().bits() as i64);
    let m = if k >= 0 {
        (q.numer() << (k as usize)) / q.denom()
    } else {
        q.numer() / (q.denom() << ((-k) as usize))
    };
    let mut x = m.to_f64().unwrap_or(f64::NAN);
    let mut e = -k;
    while e > 0 {
        let step = e.min(1000);
        x *= 2f64.powi(step as i32);
        e -= step;
    }
    while e < 0 {
        let step = e.max(-1000);
        x *= 2f64.powi(step as i32);
        e -= step;
    }
    x
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(q) => f.write_str(&format_rational(q)),
            None => f.write_str(&format_real(self.value)),
        }
    }
}

/// Analytic family of a partition.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `a_n = 1/(n(n+1))`, `t_n = 1/n`.
    Harmonic,
    /// `a_n = 2^{-n}`.
    Dyadic,
    /// `a_n ∝ c·r^n`, normalized to `(1-r) r^{n-1}`.
    Geometric { c: Param, r: Param },
    /// `a_n = n^{-s}/ζ(s)`.
    PowerAtoms { s: f64 },
    /// `t_n = n^{-θ}`.
    PowerTail { theta: f64 },
    /// `a_n = n^{-2} (log(n + shift))^{-k} / C`.
    LogPowerAtoms { k: f64, shift: i64 },
    /// Explicit leading atoms followed by a rescaled copy of another family.
    Explicit { prefix: Vec<Param>, tail_family: Box<Family> },
}

impl Family {
    pub fn geometric_exact(c: i64, r_num: i64, r_den: i64) -> Self {
        Family::Geometric { c: Param::ratio(c, 1), r: Param::ratio(r_num, r_den) }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Harmonic => "harmonic",
            Family::Dyadic => "dyadic",
            Family::Geometric { .. } => "geometric",
            Family::PowerAtoms { .. } => "power_atoms",
            Family::PowerTail { .. } => "power_tail",
            Family::LogPowerAtoms { .. } => "log_power_atoms",
            Family::Explicit { .. } => "explicit",
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidPartition(m));
        match self {
            Family::Harmonic | Family::Dyadic => Ok(()),
            Family::Geometric { c, r } => {
                if !(r.value > 0.0 && r.value < 1.0) {
                    return bad(format!("geometric ratio r = {} must lie in (0,1)", r));
                }
                if let Some(q) = &r.exact {
                    if !(q.is_positive() && q < &BigRational::one()) {
                        return bad(format!("geometric ratio r = {} must lie in (0,1)", r));
                    }
                }
                if !(c.value > 0.0 && c.value.is_finite()) {
                    return bad(format!("geometric constant c = {} must be positive", c));
                }
                Ok(())
            }
            Family::PowerAtoms { s } => {
                if !(*s > 1.0 && s.is_finite()) {
                    return bad(format!("power_atoms exponent s = {} must exceed 1", s));
                }
                Ok(())
            }
            Family::PowerTail { theta } => {
                if !(*theta > 0.0 && theta.is_finite()) {
                    return bad(format!("power_tail exponent theta = {} must be positive", theta));
                }
                Ok(())
            }
            Family::LogPowerAtoms { k, shift } => {
                if !k.is_finite() || *k < 0.0 || *k > 200.0 {
                    return bad(format!("log_power_atoms exponent k = {} must lie in [0, 200]", k));
                }
                if *shift < 1 {
                    return bad(format!("log_power_atoms shift = {} must be at least 1", shift));
                }
                Ok(())
            }
            Family::Explicit { prefix, tail_family } => {
                if matches!(**tail_family, Family::Explicit { .. }) {
                    return bad("explicit tail_family cannot itself be explicit".into());
                }
                tail_family.validate()?;
                if prefix.is_empty() {
                    return bad("explicit prefix is empty".into());
                }
                let mut total = 0.0;
                for (i, p) in prefix.iter().enumerate() {
                    let positive = match &p.exact {
                        Some(q) => q.is_positive(),
                        None => p.value > 0.0,
                    };
                    if !positive || !p.value.is_finite() {
                        return bad(format!("explicit prefix[{}] = {} must be positive", i, p));
                    }
                    total += p.value;
                }
                let below_one = match exact_sum(prefix) {
                    Some(q) => q < BigRational::one(),
                    None => total < 1.0,
                };
                if !below_one {
                    return bad("explicit prefix must sum to less than 1".into());
                }
                Ok(())
            }
        }
    }

    /// True when every atom is rational and known exactly.
    pub fn is_exact(&self) -> bool {
        match self {
            Family::Harmonic | Family::Dyadic => true,
            Family::Geometric { c, r } => c.exact.is_some() && r.exact.is_some(),
            Family::Explicit { prefix, tail_family } => {
                prefix.iter().all(|p| p.exact.is_some()) && tail_family.is_exact()
            }
            _ => false,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let param = |p: &Param| match &p.exact {
            Some(q) => json!(format_rational(q)),
            None => json!(p.value),
        };
        match self {
            Family::Harmonic | Family::Dyadic => json!({ "family": self.name() }),
            Family::Geometric { c, r } => json!({ "family": "geometric", "c": param(c), "r": param(r) }),
            Family::PowerAtoms { s } => json!({ "family": "power_atoms", "s": s }),
            Family::PowerTail { theta } => json!({ "family": "power_tail", "theta": theta }),
            Family::LogPowerAtoms { k, shift } => {
                json!({ "family": "log_power_atoms", "k": k, "shift": shift })
            }
            Family::Explicit { prefix, tail_family } => json!({
                "family": "explicit",
                "prefix": prefix.iter().map(param).collect::<Vec<_>>(),
                "tail_family": tail_family.to_json(),
            }),
        }
    }
}

pub(crate) fn exact_sum(prefix: &[Param]) -> Option<BigRational> {
    let mut acc = BigRational::zero();
    for p in prefix {
        acc += p.exact.as_ref()?;
    }
    Some(acc)
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Harmonic => write!(f, "Harmonic"),
            Family::Dyadic => write!(f, "Dyadic"),
            Family::Geometric { c, r } => write!(f, "Geometric{{c={}, r={}}}", c, r),
            Family::PowerAtoms { s } => write!(f, "PowerAtoms{{s={}}}", format_real(*s)),
            Family::PowerTail { theta } => write!(f, "PowerTail{{theta={}}}", format_real(*theta)),
            Family::LogPowerAtoms { k, shift } => {
                write!(f, "LogPowerAtoms{{k={}, shift={}}}", format_real(*k), shift)
            }
            Family::Explicit { prefix, tail_family } => {
                let p: Vec<String> = prefix.iter().map(|p| p.to_string()).collect();
                write!(f, "Explicit{{prefix=[{}], tail={}}}", p.join(", "), tail_family)
            }
        }
    }
}
