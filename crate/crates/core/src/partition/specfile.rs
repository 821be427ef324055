//! JSON partition spec files.
//!
//! ```text
//! {"family": "harmonic"}
//! {"family": "power_atoms", "s": 3.0}
//! {"family": "log_power_atoms", "k": 12, "shift": 5}
//! {"family": "geometric", "c": "2", "r": "1/3"}
//! {"family": "explicit", "prefix": ["1/2", "1/4"], "tail_family": {"family": "dyadic"}}
//! ```
//!
//! Parameters given as strings (`"p/q"`, integers or decimals) are exact;
//! JSON numbers select the floating-point backend.

use serde_json::Value;

use super::family::{Family, Param};
use super::PartitionSpec;
use crate::error::{Error, Result};

pub fn parse_family(text: &str) -> Result<Family> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::spec("<json>", e.to_string()))?;
    family_from_value(&value, "")
}

pub fn parse_spec(text: &str) -> Result<PartitionSpec> {
    PartitionSpec::new(parse_family(text)?)
}

fn field_name(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{}.{}", path, key)
    }
}

fn family_from_value(value: &Value, path: &str) -> Result<Family> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::spec(if path.is_empty() { "<root>" } else { path }, "expected a JSON object"))?;
    let fam_field = field_name(path, "family");
    let name = obj
        .get("family")
        .ok_or_else(|| Error::spec(&fam_field, "missing"))?
        .as_str()
        .ok_or_else(|| Error::spec(&fam_field, "expected a string"))?;
    let param = |key: &str| -> Result<Param> {
        let f = field_name(path, key);
        let v = obj.get(key).ok_or_else(|| Error::spec(&f, "missing"))?;
        param_from_value(v, &f)
    };
    let real = |key: &str| -> Result<f64> { Ok(param(key)?.value) };
    let family = match name {
        "harmonic" => Family::Harmonic,
        "dyadic" => Family::Dyadic,
        "geometric" => Family::Geometric { c: param("c")?, r: param("r")? },
        "power_atoms" => Family::PowerAtoms { s: real("s")? },
        "power_tail" => {
            let key = if obj.contains_key("θ") { "θ" } else { "theta" };
            Family::PowerTail { theta: real(key)? }
        }
        "log_power_atoms" => {
            let f = field_name(path, "shift");
            let shift = match obj.get("shift") {
                None => return Err(Error::spec(&f, "missing")),
                Some(v) => v
                    .as_i64()
                    .or_else(|| v.as_str().and_then(|s| s.trim().parse().ok()))
                    .ok_or_else(|| Error::spec(&f, "expected an integer"))?,
            };
            Family::LogPowerAtoms { k: real("k")?, shift }
        }
        "explicit" => {
            let f = field_name(path, "prefix");
            let list = obj
                .get("prefix")
                .ok_or_else(|| Error::spec(&f, "missing"))?
                .as_array()
                .ok_or_else(|| Error::spec(&f, "expected a list"))?;
            let prefix = list
                .iter()
                .enumerate()
                .map(|(i, v)| param_from_value(v, &format!("{}[{}]", f, i)))
                .collect::<Result<Vec<_>>>()?;
            let tf = field_name(path, "tail_family");
            let tail = obj.get("tail_family").ok_or_else(|| Error::spec(&tf, "missing"))?;
            Family::Explicit { prefix, tail_family: Box::new(family_from_value(tail, &tf)?) }
        }
        other => return Err(Error::spec(&fam_field, format!("unknown family `{}`", other))),
    };
    Ok(family)
}

fn param_from_value(v: &Value, field: &str) -> Result<Param> {
    match v {
        Value::Number(n) => {
            let x = n.as_f64().ok_or_else(|| Error::spec(field, "not representable"))?;
            Ok(Param::float(x))
        }
        Value::String(s) => {
            Param::parse_exact(s).ok_or_else(|| Error::spec(field, format!("malformed rational string `{}`", s)))
        }
        _ => Err(Error::spec(field, "expected a number or a rational string")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_examples() {
        assert_eq!(parse_family(r#"{"family": "harmonic"}"#).unwrap(), Family::Harmonic);
        assert_eq!(
            parse_family(r#"{"family": "power_atoms", "s": 3.0}"#).unwrap(),
            Family::PowerAtoms { s: 3.0 }
        );
        assert_eq!(
            parse_family(r#"{"family": "log_power_atoms", "k": 12, "shift": 5}"#).unwrap(),
            Family::LogPowerAtoms { k: 12.0, shift: 5 }
        );
        assert_eq!(
            parse_family(r#"{"family": "geometric", "c": "2", "r": "1/3"}"#).unwrap(),
            Family::geometric_exact(2, 1, 3)
        );
        let f = parse_family(
            r#"{"family": "explicit", "prefix": ["1/2","1/4"], "tail_family": {"family": "harmonic"}}"#,
        )
        .unwrap();
        assert!(f.is_exact());
    }

    #[test]
    fn errors_name_the_field() {
        let e = parse_family(r#"{"family": "geometric", "c": "2", "r": "1/x"}"#).unwrap_err();
        assert!(matches!(e, Error::SpecParse { ref field, .. } if field == "r"), "{e}");
        let e = parse_family(r#"{"family": "bogus"}"#).unwrap_err();
        assert!(matches!(e, Error::SpecParse { ref field, .. } if field == "family"));
        let e = parse_family(r#"{"family": "explicit", "prefix": ["1/2", true], "tail_family": {"family": "dyadic"}}"#)
            .unwrap_err();
        assert!(matches!(e, Error::SpecParse { ref field, .. } if field == "prefix[1]"), "{e}");
        let e = parse_family(r#"{"family": "explicit", "prefix": ["1/2"], "tail_family": {"family": "power_tail"}}"#)
            .unwrap_err();
        assert!(matches!(e, Error::SpecParse { ref field, .. } if field == "tail_family.theta"), "{e}");
        assert!(parse_family("not json").is_err());
    }

    #[test]
    fn json_round_trip() {
        for text in [
            r#"{"family": "geometric", "c": "2", "r": "1/3"}"#,
            r#"{"family": "power_tail", "theta": 0.5}"#,
            r#"{"family": "explicit", "prefix": ["1/2", 0.125], "tail_family": {"family": "dyadic"}}"#,
        ] {
            let f = parse_family(text).unwrap();
            assert_eq!(parse_family(&f.to_json().to_string()).unwrap(), f);
        }
    }
}
