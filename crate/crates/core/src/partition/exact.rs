//! Exact rational atoms and the scalar abstraction shared by both backends.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::family::{Family, Param};
use super::{rational_to_f64, PartitionSpec};
use crate::error::{Error, Result};

const MAX_EXACT_POWER: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub(crate) enum ExactData {
    Harmonic,
    Geometric { r: BigRational, one_minus_r: BigRational },
    Explicit {
        prefix: Vec<BigRational>,
        prefix_tails: Vec<BigRational>,
        scale: BigRational,
        inner: Box<ExactData>,
    },
}

impl ExactData {
    pub fn build(family: &Family) -> Option<Self> {
        match family {
            Family::Harmonic => Some(ExactData::Harmonic),
            Family::Dyadic => Some(Self::geometric(BigRational::new(1.into(), 2.into()))),
            Family::Geometric { c, r } => {
                c.exact.as_ref()?;
                Some(Self::geometric(r.exact.clone()?))
            }
            Family::Explicit { prefix, tail_family } => {
                let inner = Self::build(tail_family)?;
                let prefix: Vec<BigRational> =
                    prefix.iter().map(|p: &Param| p.exact.clone()).collect::<Option<_>>()?;
                let total = prefix.iter().fold(BigRational::zero(), |acc, p| acc + p);
                let scale = BigRational::one() - total;
                let mut prefix_tails = vec![BigRational::zero(); prefix.len()];
                let mut acc = scale.clone();
                for i in (0..prefix.len()).rev() {
                    acc += &prefix[i];
                    prefix_tails[i] = acc.clone();
                }
                Some(ExactData::Explicit { prefix, prefix_tails, scale, inner: Box::new(inner) })
            }
            _ => None,
        }
    }

    fn geometric(r: BigRational) -> Self {
        let one_minus_r = BigRational::one() - &r;
        ExactData::Geometric { r, one_minus_r }
    }

    pub fn atom(&self, n: u64) -> Result<BigRational> {
        match self {
            ExactData::Harmonic => {
                let n = num_bigint::BigInt::from(n);
                Ok(BigRational::new(1.into(), &n * (&n + 1)))
            }
            ExactData::Geometric { r, one_minus_r } => Ok(one_minus_r * power(r, n - 1, "atom")?),
            ExactData::Explicit { prefix, scale, inner, .. } => {
                let m = prefix.len() as u64;
                if n <= m {
                    Ok(prefix[n as usize - 1].clone())
                } else {
                    Ok(scale * inner.atom(n - m)?)
                }
            }
        }
    }

    pub fn tail(&self, n: u64) -> Result<BigRational> {
        match self {
            ExactData::Harmonic => Ok(BigRational::new(1.into(), n.into())),
            ExactData::Geometric { r, .. } => power(r, n - 1, "tail"),
            ExactData::Explicit { prefix_tails, scale, inner, .. } => {
                let m = prefix_tails.len() as u64;
                if n <= m {
                    Ok(prefix_tails[n as usize - 1].clone())
                } else {
                    Ok(scale * inner.tail(n - m)?)
                }
            }
        }
    }

    pub fn locate_closed_form(&self, x: &BigRational) -> Option<u64> {
        match self {
            // 1/(n+1) < x ≤ 1/n  ⇔  n ≤ 1/x < n+1
            ExactData::Harmonic => {
                let inv = x.recip();
                let n = inv.numer().div_floor(inv.denom());
                u64::try_from(n).ok()
            }
            _ => None,
        }
    }

    pub fn total_tail_sum(&self) -> Option<BigRational> {
        match self {
            ExactData::Harmonic => None,
            ExactData::Geometric { one_minus_r, .. } => Some(one_minus_r.recip()),
            ExactData::Explicit { prefix_tails, scale, inner, .. } => {
                let head = prefix_tails.iter().fold(BigRational::zero(), |acc, t| acc + t);
                Some(head + scale * inner.total_tail_sum()?)
            }
        }
    }
}

fn power(r: &BigRational, e: u64, what: &'static str) -> Result<BigRational> {
    if e > MAX_EXACT_POWER {
        return Err(Error::Range { what, n: e + 1 });
    }
    Ok(num_traits::pow(r.clone(), e as usize))
}

/// Number type of a computation backend: `f64` (floating point) or
/// `BigRational` (exact).
pub trait Scalar:
    Clone
    + PartialOrd
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn atom(spec: &PartitionSpec, n: u64) -> Result<Self>;
    fn tail(spec: &PartitionSpec, n: u64) -> Result<Self>;
    fn locate(spec: &PartitionSpec, x: &Self) -> Result<u64>;
    fn to_f64(&self) -> f64;
    fn from_ratio(p: i64, q: i64) -> Self;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn atom(spec: &PartitionSpec, n: u64) -> Result<Self> {
        spec.atom(n)
    }

    fn tail(spec: &PartitionSpec, n: u64) -> Result<Self> {
        spec.tail(n)
    }

    fn locate(spec: &PartitionSpec, x: &Self) -> Result<u64> {
        spec.locate(*x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_ratio(p: i64, q: i64) -> Self {
        p as f64 / q as f64
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn atom(spec: &PartitionSpec, n: u64) -> Result<Self> {
        spec.atom_exact(n)
    }

    fn tail(spec: &PartitionSpec, n: u64) -> Result<Self> {
        spec.tail_exact(n)
    }

    fn locate(spec: &PartitionSpec, x: &Self) -> Result<u64> {
        spec.locate_exact(x)
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn from_ratio(p: i64, q: i64) -> Self {
        BigRational::new(p.into(), q.into())
    }
}
