//! Countable partitions of `(0,1]` into right-closed atoms
//! `A_n = (t_{n+1}, t_n]` ordered right to left.

mod exact;
mod family;
mod law;
mod series;
pub mod specfile;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{Extended, NeumaierSum};

pub use exact::Scalar;
pub use family::{rational_to_f64, Family, Param};
pub use law::AtomAsymptotics;
pub use series::{Summed, Weight};

use law::Law;
use series::DIRECT_TERMS;

/// Number of atoms and tails precomputed for families without closed-form
/// tails.
const TAIL_CACHE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TypeClass {
    Finite,
    Infinite,
}

/// Slowly varying factor `ψ` in `t_n = ψ(n) n^{-θ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Psi {
    /// `ψ(n) → limit`.
    Constant { limit: f64 },
    /// `ψ(n) ~ scale · (log n)^{-k}`.
    LogPower { k: f64, scale: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TailKind {
    Expansive { theta: f64, psi: Psi },
    Expanding { rho: f64 },
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub type_class: TypeClass,
    pub tail_kind: TailKind,
    pub eventually_decreasing: bool,
    /// `lim t_n / t_{n+1}`.
    pub rho: f64,
}

impl Classification {
    pub fn is_finite_type(&self) -> bool {
        self.type_class == TypeClass::Finite
    }

    pub fn expansive_theta(&self) -> Option<f64> {
        match self.tail_kind {
            TailKind::Expansive { theta, .. } => Some(theta),
            _ => None,
        }
    }

    pub fn is_expanding(&self) -> bool {
        matches!(self.tail_kind, TailKind::Expanding { .. })
    }
}

/// Partial sum `Σ_{k ≤ n} t_k` with the remainder `Σ_{k > n} t_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSum {
    pub value: f64,
    /// Symbolically infinite for partitions of infinite type.
    pub remainder: Extended,
    pub remainder_error: f64,
}

#[derive(Debug, Clone)]
struct TailCache {
    atoms: Vec<f64>,
    /// `t_1 ..= t_{len+1}`.
    tails: Vec<f64>,
}

#[derive(Debug, Clone)]
enum Body {
    Law {
        law: Law,
        cache: Option<TailCache>,
    },
    Explicit {
        prefix: Vec<f64>,
        /// `t_1 ..= t_m`.
        prefix_tails: Vec<f64>,
        scale: f64,
        inner: Box<PartitionSpec>,
    },
}

/// An immutable partition with its normalization and cached constants.
#[derive(Debug, Clone)]
pub struct PartitionSpec {
    family: Family,
    normalization: f64,
    body: Body,
    exact: Option<exact::ExactData>,
    head: Vec<f64>,
    classification: Classification,
}

impl PartitionSpec {
    pub fn new(family: Family) -> Result<Self> {
        family.validate()?;
        let (body, normalization) = match &family {
            Family::Explicit { prefix, tail_family } => {
                let inner = PartitionSpec::new((**tail_family).clone())?;
                let values: Vec<f64> = prefix.iter().map(|p| p.value).collect();
                let scale = match family::exact_sum(prefix) {
                    Some(q) => rational_to_f64(&(BigRational::one() - q)),
                    None => 1.0 - crate::numeric::sum::sum(values.iter().copied()),
                };
                let mut prefix_tails = vec![0.0; values.len()];
                let mut acc = NeumaierSum::with_value(scale);
                for i in (0..values.len()).rev() {
                    acc.add(values[i]);
                    prefix_tails[i] = acc.value();
                }
                let normalization = inner.normalization / scale;
                (Body::Explicit { prefix: values, prefix_tails, scale, inner: Box::new(inner) }, normalization)
            }
            _ => build_law(&family)?,
        };
        let exact = exact::ExactData::build(&family);
        let mut spec = PartitionSpec {
            family,
            normalization,
            body,
            exact,
            head: Vec::new(),
            classification: Classification {
                type_class: TypeClass::Finite,
                tail_kind: TailKind::Other,
                eventually_decreasing: true,
                rho: 1.0,
            },
        };
        spec.head = (1..=DIRECT_TERMS).map(|n| spec.log_atom(n)).collect();
        spec.classification = spec.derive_classification();
        Ok(spec)
    }

    pub fn harmonic() -> Self {
        Self::new(Family::Harmonic).expect("harmonic partition is valid")
    }

    pub fn dyadic() -> Self {
        Self::new(Family::Dyadic).expect("dyadic partition is valid")
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Constant `C` dividing the family's raw atom law so that `Σ a_n = 1`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn classify(&self) -> &Classification {
        &self.classification
    }

    pub fn asymptotics(&self) -> AtomAsymptotics {
        match &self.body {
            Body::Law { law, .. } => law.asymptotics(),
            Body::Explicit { inner, .. } => inner.asymptotics(),
        }
    }

    /// Number of explicitly given leading atoms.
    pub fn prefix_len(&self) -> u64 {
        match &self.body {
            Body::Explicit { prefix, .. } => prefix.len() as u64,
            Body::Law { .. } => 0,
        }
    }

    /// Index from which `a_n` is non-increasing.
    pub fn decreasing_from(&self) -> u64 {
        self.prefix_len() + 1
    }

    /// `a_n` in binary floating point.
    pub fn atom(&self, n: u64) -> Result<f64> {
        check_index(n)?;
        let a = self.atom_raw(n);
        if a.is_finite() && a >= f64::MIN_POSITIVE {
            Ok(a)
        } else {
            Err(Error::Range { what: "atom", n })
        }
    }

    /// `t_n = Σ_{k ≥ n} a_k` in binary floating point.
    pub fn tail(&self, n: u64) -> Result<f64> {
        check_index(n)?;
        let t = self.tail_raw(n);
        if t.is_finite() && t >= f64::MIN_POSITIVE {
            Ok(t)
        } else {
            Err(Error::Range { what: "tail", n })
        }
    }

    /// `log a_n`, finite for every `n` (no underflow).
    pub fn log_atom(&self, n: u64) -> f64 {
        if n >= 1 && (n as usize) <= self.head.len() {
            return self.head[n as usize - 1];
        }
        match &self.body {
            Body::Law { law, cache } => match (law, cache) {
                (Law::PowerAtoms { .. } | Law::LogPower { .. }, Some(c)) if (n as usize) <= c.atoms.len() => {
                    c.atoms[n as usize - 1].ln()
                }
                _ => law.la(n as f64),
            },
            Body::Explicit { prefix, scale, inner, .. } => {
                let m = prefix.len() as u64;
                if n <= m {
                    prefix[n as usize - 1].ln()
                } else {
                    scale.ln() + inner.log_atom(n - m)
                }
            }
        }
    }

    fn atom_raw(&self, n: u64) -> f64 {
        match &self.body {
            Body::Law { law, cache } => match law {
                Law::Harmonic => {
                    let x = n as f64;
                    1.0 / (x * (x + 1.0))
                }
                Law::Geometric { ln_r, .. } => {
                    let r = self.geometric_ratio(*ln_r);
                    (1.0 - r) * r.powf((n - 1) as f64)
                }
                Law::PowerTail { theta } => {
                    let x = n as f64;
                    x.powf(-theta) * -(-theta * (1.0 / x).ln_1p()).exp_m1()
                }
                Law::PowerAtoms { .. } | Law::LogPower { .. } => {
                    let c = cache.as_ref().expect("cached family");
                    if (n as usize) <= c.atoms.len() {
                        c.atoms[n as usize - 1]
                    } else {
                        raw_atom(law, n as f64) / self.normalization
                    }
                }
            },
            Body::Explicit { prefix, scale, inner, .. } => {
                let m = prefix.len() as u64;
                if n <= m {
                    prefix[n as usize - 1]
                } else {
                    scale * inner.atom_raw(n - m)
                }
            }
        }
    }

    fn tail_raw(&self, n: u64) -> f64 {
        match &self.body {
            Body::Law { law, cache } => match law {
                Law::Harmonic => 1.0 / n as f64,
                Law::Geometric { ln_r, .. } => self.geometric_ratio(*ln_r).powf((n - 1) as f64),
                Law::PowerTail { theta } => (n as f64).powf(-theta),
                Law::PowerAtoms { .. } | Law::LogPower { .. } => {
                    let c = cache.as_ref().expect("cached family");
                    if (n as usize) <= c.tails.len() {
                        c.tails[n as usize - 1]
                    } else {
                        series::law_sum(law, &self.head, 1.0, 0.0, Weight::One, n)
                            .value
                            .to_f64()
                    }
                }
            },
            Body::Explicit { prefix_tails, scale, inner, .. } => {
                let m = prefix_tails.len() as u64;
                if n <= m {
                    prefix_tails[n as usize - 1]
                } else {
                    scale * inner.tail_raw(n - m)
                }
            }
        }
    }

    fn geometric_ratio(&self, ln_r: f64) -> f64 {
        match &self.family {
            Family::Dyadic => 0.5,
            Family::Geometric { r, .. } => r.value,
            _ => ln_r.exp(),
        }
    }

    /// Atoms `a_1 ..= a_n`.
    pub fn atom_table(&self, n: u64) -> Vec<f64> {
        (1..=n).map(|k| self.atom_raw(k)).collect()
    }

    /// Tails `t_1 ..= t_{n+1}`, accumulated backwards where no closed form
    /// exists.
    pub fn tail_table(&self, n: u64) -> Vec<f64> {
        match &self.body {
            Body::Law { law: Law::PowerAtoms { .. } | Law::LogPower { .. }, cache: Some(c) }
                if (n as usize) >= c.tails.len() =>
            {
                let start = self.tail_raw(n + 1);
                let mut out = vec![0.0; n as usize + 1];
                out[n as usize] = start;
                let mut acc = NeumaierSum::with_value(start);
                for k in (1..=n).rev() {
                    acc.add(self.atom_raw(k));
                    out[k as usize - 1] = acc.value();
                }
                out
            }
            _ => (1..=n + 1).map(|k| self.tail_raw(k)).collect(),
        }
    }

    /// The unique `n` with `t_{n+1} < x ≤ t_n`.
    pub fn locate(&self, x: f64) -> Result<u64> {
        if !(x > 0.0 && x <= 1.0) {
            return Err(Error::domain(format!("locate needs 0 < x <= 1, got {}", x)));
        }
        let guess = self.locate_guess(x).clamp(1.0, 9.0e18) as u64;
        gallop(guess, |n| Ok(self.tail_raw(n) >= x))
    }

    fn locate_guess(&self, x: f64) -> f64 {
        match &self.body {
            Body::Law { law, .. } => match law {
                Law::Harmonic => (1.0 / x).floor(),
                Law::Geometric { ln_r, .. } => (x.ln() / ln_r).floor() + 1.0,
                Law::PowerTail { theta } => x.powf(-1.0 / theta).floor(),
                Law::PowerAtoms { s, .. } => {
                    // t_n ≈ n^{1-s} / ((s-1) C)
                    (x * (s - 1.0) * self.normalization).powf(1.0 / (1.0 - s)).floor()
                }
                Law::LogPower { .. } => 1.0,
            },
            Body::Explicit { prefix_tails, scale, inner, .. } => {
                let m = prefix_tails.len();
                if x > *scale {
                    1.0
                } else {
                    m as f64 + inner.locate_guess(x / scale)
                }
            }
        }
    }

    /// Whether `Σ a_n^u e^{-vn} h(n)` converges, decided from the tail law.
    pub fn sum_converges(&self, u: f64, v: f64, w: Weight) -> bool {
        series::converges(self.asymptotics(), u, v, w)
    }

    /// `Σ_{n ≥ 1} a_n^u e^{-vn} h(n)`.
    pub fn weighted_sum(&self, u: f64, v: f64, w: Weight) -> Summed {
        self.weighted_sum_from(u, v, w, 1)
    }

    /// `Σ_{n ≥ start} a_n^u e^{-vn} h(n)`.
    pub fn weighted_sum_from(&self, u: f64, v: f64, w: Weight, start: u64) -> Summed {
        self.weighted_sum_scaled(u, v, w, start, 0.0)
    }

    /// `e^{-shift} Σ_{n ≥ start} a_n^u e^{-vn} h(n)`, for sums whose terms
    /// would otherwise underflow or overflow.
    pub fn weighted_sum_scaled(&self, u: f64, v: f64, w: Weight, start: u64, shift: f64) -> Summed {
        match &self.body {
            Body::Law { law, .. } => series::law_sum_scaled(law, &self.head, u, v, w, start, shift),
            Body::Explicit { prefix, scale, inner, .. } => {
                let m = prefix.len() as u64;
                let mut acc = NeumaierSum::new();
                for n in start.max(1)..=m {
                    let x = n as f64;
                    let la = prefix[n as usize - 1].ln();
                    let h = match w {
                        Weight::One => 1.0,
                        Weight::LogAtom => la,
                        Weight::Affine(c) => x + c,
                        Weight::LogAffine(c) => (x + c).ln(),
                    };
                    acc.add((u * la - v * x - shift).exp() * h);
                }
                let inner_start = start.saturating_sub(m).max(1);
                let factor = (u * scale.ln() - v * m as f64).exp();
                let shifted = w.shifted(m as f64);
                let tail = inner.weighted_sum_scaled(u, v, shifted, inner_start, shift);
                let Extended::Finite(mut t) = tail.value else {
                    return Summed::divergent();
                };
                let mut err = tail.error;
                if w == Weight::LogAtom {
                    let ones = inner.weighted_sum_scaled(u, v, Weight::One, inner_start, shift);
                    let one_value = ones.value.to_f64();
                    t += scale.ln() * one_value;
                    err += scale.ln().abs() * ones.error;
                }
                acc.add(factor * t);
                Summed::finite(acc.value(), factor * err)
            }
        }
    }

    /// `Σ_{k ≤ n} t_k` (compensated) with the remainder `Σ_{k > n} t_k`.
    pub fn partial_tail_sum(&self, n: u64) -> Result<TailSum> {
        check_index(n)?;
        let value = crate::numeric::sum::sum(self.tail_table(n).into_iter().take(n as usize));
        let rem = self.weighted_sum_from(1.0, 0.0, Weight::Affine(-(n as f64)), n + 1);
        Ok(TailSum { value, remainder: rem.value, remainder_error: rem.error })
    }

    /// `Σ_k t_k = Σ_n n a_n`, symbolically infinite for infinite type.
    pub fn total_tail_sum(&self) -> Summed {
        if let Some(q) = self.exact.as_ref().and_then(|e| e.total_tail_sum()) {
            return Summed::finite(rational_to_f64(&q), 0.0);
        }
        self.weighted_sum(1.0, 0.0, Weight::Affine(0.0))
    }

    fn derive_classification(&self) -> Classification {
        match &self.body {
            Body::Explicit { scale, inner, .. } => {
                let mut c = *inner.classify();
                if let TailKind::Expansive { psi, theta } = c.tail_kind {
                    let psi = match psi {
                        Psi::Constant { limit } => Psi::Constant { limit: limit * scale },
                        Psi::LogPower { k, scale: s } => Psi::LogPower { k, scale: s * scale },
                    };
                    c.tail_kind = TailKind::Expansive { theta, psi };
                }
                c
            }
            Body::Law { law, .. } => {
                let expansive = |theta: f64, psi: Psi, finite: bool| Classification {
                    type_class: if finite { TypeClass::Finite } else { TypeClass::Infinite },
                    tail_kind: TailKind::Expansive { theta, psi },
                    eventually_decreasing: true,
                    rho: 1.0,
                };
                let unit = Psi::Constant { limit: 1.0 };
                match *law {
                    Law::Harmonic => expansive(1.0, unit, false),
                    Law::PowerTail { theta } => expansive(theta, unit, theta > 1.0),
                    Law::PowerAtoms { s, .. } => {
                        let limit = 1.0 / ((s - 1.0) * self.normalization);
                        expansive(s - 1.0, Psi::Constant { limit }, s > 2.0)
                    }
                    Law::LogPower { k, .. } => {
                        let psi = Psi::LogPower { k, scale: 1.0 / self.normalization };
                        expansive(1.0, psi, k > 1.0)
                    }
                    Law::Geometric { ln_r, .. } => Classification {
                        type_class: TypeClass::Finite,
                        tail_kind: TailKind::Expanding { rho: 1.0 / self.geometric_ratio(ln_r) },
                        eventually_decreasing: true,
                        rho: 1.0 / self.geometric_ratio(ln_r),
                    },
                }
            }
        }
    }

    /// Exact `a_n`; fails with [`Error::NotExact`] for irrational families.
    pub fn atom_exact(&self, n: u64) -> Result<BigRational> {
        check_index(n)?;
        self.exact.as_ref().ok_or(Error::NotExact)?.atom(n)
    }

    /// Exact `t_n`.
    pub fn tail_exact(&self, n: u64) -> Result<BigRational> {
        check_index(n)?;
        self.exact.as_ref().ok_or(Error::NotExact)?.tail(n)
    }

    /// Exact atom location for rational `x` in `(0,1]`.
    pub fn locate_exact(&self, x: &BigRational) -> Result<u64> {
        let data = self.exact.as_ref().ok_or(Error::NotExact)?;
        if !(x > &BigRational::zero() && x <= &BigRational::one()) {
            return Err(Error::domain(format!("locate needs 0 < x <= 1, got {}", x)));
        }
        if let Some(n) = data.locate_closed_form(x) {
            return Ok(n);
        }
        let approx = rational_to_f64(x);
        let guess = if approx > 0.0 {
            self.locate(approx.min(1.0)).unwrap_or(1)
        } else {
            1
        };
        gallop(guess, |n| Ok(&data.tail(n)? >= x))
    }
}

fn check_index(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::domain("atom index must be at least 1"))
    } else {
        Ok(())
    }
}

/// Largest `n ≥ 1` with `pred(n)`, for a predicate that holds at 1 and is
/// (numerically) monotone; starts the search at `guess`.
fn gallop<P: Fn(u64) -> Result<bool>>(guess: u64, pred: P) -> Result<u64> {
    let guess = guess.max(1);
    let (mut lo, mut hi);
    if pred(guess)? {
        lo = guess;
        let mut step = 1u64;
        loop {
            let probe = lo.checked_add(step).ok_or(Error::Range { what: "digit", n: u64::MAX })?;
            if pred(probe)? {
                lo = probe;
                step = step.saturating_mul(2);
            } else {
                hi = probe;
                break;
            }
        }
    } else {
        hi = guess;
        let mut step = 1u64;
        loop {
            let probe = hi.saturating_sub(step).max(1);
            if probe == 1 || pred(probe)? {
                lo = probe;
                break;
            }
            hi = probe;
            step = step.saturating_mul(2);
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn raw_atom(law: &Law, x: f64) -> f64 {
    match *law {
        Law::PowerAtoms { s, .. } => x.powf(-s),
        Law::LogPower { k, shift, .. } => (x * x).recip() * (x + shift).ln().powf(-k),
        _ => unreachable!("only cached families have raw atoms"),
    }
}

fn build_law(family: &Family) -> Result<(Body, f64)> {
    Ok(match family {
        Family::Harmonic => (Body::Law { law: Law::Harmonic, cache: None }, 1.0),
        Family::Dyadic => {
            let law = Law::Geometric { ln_r: 0.5f64.ln(), ln_1mr: 0.5f64.ln() };
            (Body::Law { law, cache: None }, 1.0)
        }
        Family::Geometric { c, r } => {
            let rv = r.value;
            let law = Law::Geometric { ln_r: rv.ln(), ln_1mr: (-rv).ln_1p() };
            (Body::Law { law, cache: None }, c.value * rv / (1.0 - rv))
        }
        Family::PowerTail { theta } => (Body::Law { law: Law::PowerTail { theta: *theta }, cache: None }, 1.0),
        Family::PowerAtoms { s } => cached_law(Law::PowerAtoms { s: *s, ln_c: 0.0 })?,
        Family::LogPowerAtoms { k, shift } => {
            cached_law(Law::LogPower { k: *k, shift: *shift as f64, ln_c: 0.0 })?
        }
        Family::Explicit { .. } => unreachable!("handled by the caller"),
    })
}

/// Normalizes a raw law and fills the atom/tail cache by backward
/// compensated summation from an Euler–Maclaurin tail.
fn cached_law(raw: Law) -> Result<(Body, f64)> {
    let head: Vec<f64> = (1..=DIRECT_TERMS).map(|n| raw.la(n as f64)).collect();
    let total = series::law_sum(&raw, &head, 1.0, 0.0, Weight::One, 1);
    let c = total.value.finite().ok_or_else(|| Error::InvalidPartition("atoms are not summable".into()))?;
    let ln_c = c.ln();
    let law = match raw {
        Law::PowerAtoms { s, .. } => Law::PowerAtoms { s, ln_c },
        Law::LogPower { k, shift, .. } => Law::LogPower { k, shift, ln_c },
        other => other,
    };
    let m = TAIL_CACHE as usize;
    let atoms: Vec<f64> = (1..=m).map(|n| raw_atom(&law, n as f64) / c).collect();
    let normalized_head: Vec<f64> = (1..=DIRECT_TERMS).map(|n| law.la(n as f64)).collect();
    let last = series::law_sum(&law, &normalized_head, 1.0, 0.0, Weight::One, TAIL_CACHE + 1);
    let mut tails = vec![0.0; m + 1];
    tails[m] = last.value.to_f64();
    let mut acc = NeumaierSum::with_value(tails[m]);
    for i in (0..m).rev() {
        acc.add(atoms[i]);
        tails[i] = acc.value();
    }
    Ok((Body::Law { law, cache: Some(TailCache { atoms, tails }) }, c))
}
