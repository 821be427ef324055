use std::fmt;

use serde::{Serialize, Serializer};

/// A real value that may be symbolically infinite.
///
/// Divergent series and one-sided limits that blow up are reported as
/// `Infinite` rather than as an IEEE infinity, so that downstream consumers
/// can tell "diverges" apart from floating-point overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            Extended::Finite(x) => Some(x),
            Extended::Infinite => None,
        }
    }

    /// Value as an `f64`, mapping the symbolic infinity to `f64::INFINITY`.
    pub fn to_f64(&self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl From<f64> for Extended {
    fn from(x: f64) -> Self {
        Extended::Finite(x)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => f.write_str(&super::format::format_real(*x)),
            Extended::Infinite => f.write_str(super::format::SYMBOLIC_INFINITY),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(x) => s.serialize_f64(*x),
            Extended::Infinite => s.serialize_str(super::format::SYMBOLIC_INFINITY),
        }
    }
}
