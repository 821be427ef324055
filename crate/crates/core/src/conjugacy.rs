//! The conjugacy `θ_α` from `F_α` to the tent map, the measure of maximal
//! entropy and the Hölder exponents `κ_±`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::dynamics::{self, DigitWord, ExactDigits, Termination};
use crate::error::{Error, Result};
use crate::numeric::Extended;
use crate::partition::{rational_to_f64, PartitionSpec, TailKind};

/// A value of `θ_α` with its truncation bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaValue {
    pub value: f64,
    #[serde(skip)]
    pub exact: BigRational,
    /// Upper bound on `|θ_α(x) - value|`; 0 for α-rationals.
    pub error_bound: f64,
    pub digits_used: usize,
}

fn dyadic(exponent: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << exponent)
}

fn pow2_neg(exponent: u64) -> f64 {
    2f64.powi(-(exponent.min(2000) as i32))
}

/// Accumulates `-2 Σ (-1)^k 2^{-(ℓ_1+…+ℓ_k)}` digit by digit.
struct ThetaSeries {
    sum: BigRational,
    total: u64,
    used: usize,
    positive: bool,
}

impl ThetaSeries {
    fn new() -> Self {
        Self { sum: BigRational::zero(), total: 0, used: 0, positive: true }
    }

    fn push(&mut self, digit: u64) {
        self.total += digit;
        let term = dyadic(self.total) * BigRational::from_integer(2.into());
        if self.positive {
            self.sum += term;
        } else {
            self.sum -= term;
        }
        self.positive = !self.positive;
        self.used += 1;
    }

    fn bound(&self) -> f64 {
        2.0 * pow2_neg(self.total)
    }

    fn finish(self, complete: bool) -> ThetaValue {
        let error_bound = if complete { 0.0 } else { self.bound() };
        ThetaValue { value: rational_to_f64(&self.sum), exact: self.sum, error_bound, digits_used: self.used }
    }
}

/// `θ_α` from a digit word, using digits until the truncation bound is at
/// most `eps`. An exhausted word yields the achieved bound.
pub fn theta(word: &DigitWord, eps: f64) -> ThetaValue {
    let mut series = ThetaSeries::new();
    for &d in &word.digits {
        if series.used > 0 && series.bound() <= eps {
            return series.finish(false);
        }
        series.push(d);
    }
    let complete = word.end == Termination::Terminated;
    series.finish(complete)
}

/// `θ_α(x)` for a rational point, expanding lazily.
pub fn theta_exact(spec: &PartitionSpec, x: &BigRational, eps: f64) -> Result<ThetaValue> {
    if x.is_zero() {
        return Ok(ThetaSeries::new().finish(true));
    }
    let mut digits = ExactDigits::new(spec, x.clone())?;
    let mut series = ThetaSeries::new();
    loop {
        if series.used > 0 && series.bound() <= eps {
            return Ok(series.finish(false));
        }
        match digits.next() {
            Some(d) => series.push(d),
            None => {
                if let Some(e) = digits.error() {
                    return Err(e.clone());
                }
                return Ok(series.finish(true));
            }
        }
    }
}

/// `θ_α(x)` for a floating-point point via the certified float expansion.
pub fn theta_f64(spec: &PartitionSpec, x: f64, eps: f64) -> Result<ThetaValue> {
    if x == 0.0 {
        return Ok(ThetaSeries::new().finish(true));
    }
    let budget = (-(eps.max(1e-300)).log2()).ceil() as usize + 2;
    let word = dynamics::expand(spec, x, budget)?;
    Ok(theta(&word, eps))
}

fn tent(y: &BigRational) -> BigRational {
    let half = BigRational::new(1.into(), 2.into());
    let two = BigRational::from_integer(2.into());
    if y <= &half {
        &two * y
    } else {
        &two - &two * y
    }
}

/// `|θ_α(F_α(x)) - T(θ_α(x))|` for a rational point, with both sides
/// evaluated from independently computed exact expansions to accuracy
/// `eps/8`.
pub fn conjugacy_error(spec: &PartitionSpec, x: &BigRational, eps: f64) -> Result<f64> {
    let fx = dynamics::farey_map(spec, x)?;
    let lhs = theta_exact(spec, &fx, eps / 8.0)?;
    let rhs = theta_exact(spec, x, eps / 8.0)?;
    Ok(rational_to_f64(&(lhs.exact - tent(&rhs.exact)).abs()))
}

/// Checks the conjugacy relation `θ_α ∘ F_α = T ∘ θ_α` at `x` to within `eps`.
pub fn conjugacy_check(spec: &PartitionSpec, x: &BigRational, eps: f64) -> Result<bool> {
    Ok(conjugacy_error(spec, x, eps)? <= eps)
}

/// Floating-point variant of [`conjugacy_error`]; returns the observed error
/// and the truncation bound actually achieved by the float expansions.
pub fn conjugacy_error_f64(spec: &PartitionSpec, x: f64, eps: f64) -> Result<(f64, f64)> {
    let fx = dynamics::farey_map(spec, &x)?;
    let lhs = theta_f64(spec, fx, eps / 8.0)?;
    let rhs = theta_f64(spec, x, eps / 8.0)?;
    let t = tent(&rhs.exact);
    let err = rational_to_f64(&(lhs.exact - t).abs());
    Ok((err, lhs.error_bound + 2.0 * rhs.error_bound))
}

/// `μ_α` of the α-Lüroth cylinder of a finite word: `2^{-Σ ℓ_i}`.
pub fn max_entropy_mass(digits: &[u64]) -> Result<BigRational> {
    if digits.contains(&0) {
        return Err(Error::domain("digits must be at least 1"));
    }
    Ok(dyadic(digits.iter().sum()))
}

/// Hölder exponent `κ_+` and sub-Hölder exponent `κ_-` of `θ_α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderExponents {
    pub kappa_plus: Extended,
    pub kappa_minus: Extended,
    /// Index attaining the finite infimum, if the infimum is attained.
    pub argmin: Option<u64>,
    pub argmax: Option<u64>,
    /// `lim κ(n)` when known from the tail behaviour.
    pub limit: Option<Extended>,
}

/// `κ(n) = -n log 2 / log a_n`.
pub fn kappa(spec: &PartitionSpec, n: u64) -> f64 {
    -(n as f64) * std::f64::consts::LN_2 / spec.log_atom(n)
}

/// `κ_± = inf/sup κ(n)` over `n ≤ n_search` combined with the analytic limit.
pub fn holder_exponents(spec: &PartitionSpec, n_search: u64) -> HolderExponents {
    let n_search = n_search.max(1);
    let mut lo = (f64::INFINITY, 1u64);
    let mut hi = (f64::NEG_INFINITY, 1u64);
    for n in 1..=n_search {
        let k = kappa(spec, n);
        if k < lo.0 {
            lo = (k, n);
        }
        if k > hi.0 {
            hi = (k, n);
        }
    }
    let limit = match spec.classify().tail_kind {
        TailKind::Expansive { .. } => Some(Extended::Infinite),
        TailKind::Expanding { rho } => Some(Extended::Finite(std::f64::consts::LN_2 / rho.ln())),
        TailKind::Other => None,
    };
    let (mut kappa_plus, mut argmin) = (Extended::Finite(lo.0), Some(lo.1));
    let (mut kappa_minus, mut argmax) = (Extended::Finite(hi.0), Some(hi.1));
    match limit {
        Some(Extended::Infinite) => {
            kappa_minus = Extended::Infinite;
            argmax = None;
        }
        Some(Extended::Finite(l)) => {
            if l < lo.0 {
                kappa_plus = Extended::Finite(l);
                argmin = None;
            }
            if l > hi.0 {
                kappa_minus = Extended::Finite(l);
                argmax = None;
            }
        }
        None => {}
    }
    HolderExponents { kappa_plus, kappa_minus, argmin, argmax, limit }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{assemble_exact, farey_cylinder, Cylinder};
    use crate::partition::{Family, Param};
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn exact_families() -> Vec<PartitionSpec> {
        vec![
            PartitionSpec::harmonic(),
            PartitionSpec::dyadic(),
            PartitionSpec::new(Family::geometric_exact(2, 1, 3)).unwrap(),
            PartitionSpec::new(Family::Explicit {
                prefix: vec![Param::ratio(1, 3), Param::ratio(1, 5)],
                tail_family: Box::new(Family::Harmonic),
            })
            .unwrap(),
        ]
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta(&DigitWord::finite(vec![1]), 0.0).exact, BigRational::one());
        for k in 1..40u64 {
            let v = theta(&DigitWord::finite(vec![k]), 0.0);
            assert_eq!(v.exact, BigRational::new(2.into(), BigInt::one() << k));
            assert_eq!(v.error_bound, 0.0);
        }
        let ones = DigitWord::prefix(vec![1; 80]);
        let v = theta(&ones, 1e-15);
        assert!((v.value - 2.0 / 3.0).abs() <= v.error_bound);
        assert!(v.error_bound <= 1e-15);
        let short = theta(&DigitWord::prefix(vec![1; 5]), 1e-15);
        assert!(short.error_bound > 1e-15);
        assert!((short.value - 2.0 / 3.0).abs() <= short.error_bound);
    }

    #[test]
    fn conjugacy_examples() {
        let h = PartitionSpec::harmonic();
        assert!(conjugacy_check(&h, &q(3, 4), 1e-10).unwrap());
        assert_eq!(theta_exact(&h, &BigRational::zero(), 1e-10).unwrap().value, 0.0);
        let d = PartitionSpec::dyadic();
        for k in 1..200i64 {
            let x = q(k, 199);
            let v = theta_exact(&d, &x, 1e-14).unwrap();
            assert!((v.value - rational_to_f64(&x)).abs() <= 1e-14);
        }
    }

    #[test]
    fn conjugacy_float_families() {
        for family in [Family::PowerAtoms { s: 3.0 }, Family::PowerTail { theta: 0.5 }, Family::Harmonic] {
            let spec = PartitionSpec::new(family).unwrap();
            for i in 1..50 {
                let x = i as f64 / 50.3;
                let (err, bound) = conjugacy_error_f64(&spec, x, 1e-8).unwrap();
                assert!(err <= bound + 1e-8, "{} x={x} err={err} bound={bound}", spec.family());
            }
        }
    }

    #[test]
    fn max_entropy_examples() {
        assert_eq!(max_entropy_mass(&[1]).unwrap(), q(1, 2));
        assert_eq!(max_entropy_mass(&[2, 1]).unwrap(), q(1, 8));
        for k in 1..=12u64 {
            // words of total k, enumerated as compositions
            let mut total = BigRational::zero();
            for mask in 0..1u64 << (k - 1) {
                let mut word = Vec::new();
                let mut run = 1;
                for i in 0..k - 1 {
                    if mask >> i & 1 == 1 {
                        word.push(run);
                        run = 1;
                    } else {
                        run += 1;
                    }
                }
                word.push(run);
                total += max_entropy_mass(&word).unwrap();
            }
            assert_eq!(total, q(1, 2));
        }
    }

    #[test]
    fn holder_examples() {
        let h = holder_exponents(&PartitionSpec::harmonic(), 1000);
        assert!((h.kappa_plus.to_f64() - 2.0 * LN_2 / 6f64.ln()).abs() < 1e-14);
        assert_eq!(h.argmin, Some(2));
        assert_eq!(h.kappa_minus, Extended::Infinite);
        let d = holder_exponents(&PartitionSpec::dyadic(), 1000);
        assert!((d.kappa_plus.to_f64() - 1.0).abs() < 1e-14);
        assert!((d.kappa_minus.to_f64() - 1.0).abs() < 1e-14);
        let g = PartitionSpec::new(Family::geometric_exact(2, 1, 3)).unwrap();
        let e = holder_exponents(&g, 1000);
        let oracle: Vec<f64> =
            (1..=1000u64).map(|n| n as f64 * LN_2 / (1.5f64.ln() + (n - 1) as f64 * 3f64.ln())).collect();
        let sup = oracle.iter().cloned().fold(f64::MIN, f64::max);
        assert!((e.kappa_minus.to_f64() - sup).abs() < 1e-12);
        assert!((e.kappa_plus.to_f64() - LN_2 / 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn theta_is_the_distribution_function() {
        let k = 12usize;
        for spec in exact_families() {
            let mut rights: Vec<BigRational> = (0..1u32 << k)
                .map(|code| {
                    let bits: Vec<u8> = (0..k).map(|i| ((code >> (k - 1 - i)) & 1) as u8).collect();
                    let c: Cylinder<BigRational> = farey_cylinder(&spec, &bits).unwrap();
                    c.right
                })
                .collect();
            rights.sort();
            for mask in 0..1u64 << (k - 1) {
                let mut word = Vec::new();
                let mut run = 1;
                for i in 0..k - 1 {
                    if mask >> i & 1 == 1 {
                        word.push(run);
                        run = 1;
                    } else {
                        run += 1;
                    }
                }
                word.push(run);
                if mask % 7 != 0 {
                    word.truncate(word.len().div_ceil(2));
                }
                let x = assemble_exact(&spec, &word).unwrap();
                let left_cells = rights.partition_point(|r| r <= &x);
                let mass = BigRational::new(left_cells.into(), BigInt::one() << k);
                assert_eq!(theta(&DigitWord::finite(word.clone()), 0.0).exact, mass, "{:?}", word);
            }
        }
    }

    #[test]
    fn cylinder_holder_inequalities() {
        for spec in [
            PartitionSpec::new(Family::geometric_exact(2, 1, 3)).unwrap(),
            PartitionSpec::harmonic(),
            PartitionSpec::new(Family::PowerAtoms { s: 3.0 }).unwrap(),
        ] {
            let e = holder_exponents(&spec, 2000);
            for word in [vec![1u64], vec![2, 3], vec![5, 1, 7], vec![1, 1, 1, 1], vec![9, 2]] {
                let log_size: f64 = word.iter().map(|&d| spec.log_atom(d)).sum();
                let log_mass = -(word.iter().sum::<u64>() as f64) * LN_2;
                assert!(log_mass <= e.kappa_plus.to_f64() * log_size + 1e-12);
                if let Extended::Finite(km) = e.kappa_minus {
                    assert!(log_mass >= km * log_size - 1e-12);
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn theta_is_monotone(a in prop::collection::vec(1u64..6, 1..8),
                             b in prop::collection::vec(1u64..6, 1..8),
                             which in 0usize..4) {
            let spec = &exact_families()[which];
            let xa = assemble_exact(spec, &a).unwrap();
            let xb = assemble_exact(spec, &b).unwrap();
            let ta = theta(&DigitWord::finite(a), 0.0).exact;
            let tb = theta(&DigitWord::finite(b), 0.0).exact;
            prop_assert_eq!(xa.cmp(&xb), ta.cmp(&tb));
        }

        #[test]
        fn conjugacy_random(p in 1i64..100_000, extra in 0i64..100_000, which in 0usize..4) {
            let spec = &exact_families()[which];
            prop_assert!(conjugacy_check(spec, &q(p, p + extra), 1e-10).unwrap());
        }
    }
}
