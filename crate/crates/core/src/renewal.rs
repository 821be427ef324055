//! Sum-level sets `𝓛_n = {x : ℓ_1 + … + ℓ_k = n for some k}` and their
//! Lebesgue measures `w_n = λ(𝓛_n)` via the renewal recursion
//! `w_n = Σ_{m=1}^n a_m w_{n-m}`, together with the limit laws for `w_n`.

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::special::gamma as gamma_fn;
use crate::numeric::{Extended, NeumaierSum};
use crate::partition::{rational_to_f64, PartitionSpec, Scalar, TailKind};

/// Largest index computed in exact arithmetic by [`renewal_sequence`].
pub const EXACT_CAP: usize = 64;

/// Largest `n` accepted by [`composition_oracle`].
pub const ORACLE_CAP: u64 = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Backend {
    Exact,
    Float,
}

/// `w_0, …, w_N` with running sums of `w_n` and `t_n`.
#[derive(Debug, Clone)]
pub struct RenewalSequence {
    pub values: Vec<f64>,
    /// Exact prefix `w_0 …` when the partition is rational.
    pub exact: Vec<BigRational>,
    pub backend: Backend,
    /// First index computed in floating point after an exact prefix.
    pub switch_point: Option<usize>,
    /// `Σ_{k=1}^n w_k`, index `n`.
    pub partial_w: Vec<f64>,
    /// `Σ_{k=1}^n t_k`, index `n`.
    pub partial_t: Vec<f64>,
    /// `t_n`, index `n` (index 0 unused).
    pub tails: Vec<f64>,
}

impl RenewalSequence {
    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.len() {
            return Err(Error::domain(format!("index {} outside 1..={}", n, self.len())));
        }
        Ok(())
    }

    /// `(Σ_{k≤n} w_k)(Σ_{k≤n} t_k) / (K_α n)`.
    pub fn weak_law_ratio(&self, spec: &PartitionSpec, n: usize) -> Result<f64> {
        self.check(n)?;
        Ok(self.partial_w[n] * self.partial_t[n] / (weak_constant(spec)? * n as f64))
    }

    /// `w_n (Σ_{k≤n} t_k) / k_α`.
    pub fn strong_law_ratio(&self, spec: &PartitionSpec, n: usize) -> Result<f64> {
        self.check(n)?;
        Ok(self.values[n] * self.partial_t[n] / strong_constant(spec)?)
    }

    /// `n t_n w_n`.
    pub fn gl_product(&self, n: usize) -> Result<f64> {
        self.check(n)?;
        Ok(n as f64 * self.tails[n] * self.values[n])
    }
}

fn dot_blocked(a: &[f64], b: &[f64]) -> f64 {
    const LANES: usize = 8;
    let mut acc = [0.0f64; LANES];
    let mut ca = a.chunks_exact(LANES);
    let mut cb = b.chunks_exact(LANES);
    for (x, y) in ca.by_ref().zip(cb.by_ref()) {
        for i in 0..LANES {
            acc[i] += x[i] * y[i];
        }
    }
    let mut rest = 0.0;
    for (x, y) in ca.remainder().iter().zip(cb.remainder()) {
        rest += x * y;
    }
    ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7])) + rest
}

/// Continues `values` (holding `w_0 … w_{m-1}`) up to `w_n` in floating
/// point.
fn extend_float(atoms: &[f64], values: &mut Vec<f64>, n: usize) {
    // reversed atoms: rev[n - 1 - j] = a_{j+1}, so a_{i-j} = rev[n - i + j]
    let rev: Vec<f64> = atoms[..n].iter().rev().copied().collect();
    values.reserve(n + 1 - values.len());
    for i in values.len()..=n {
        let w = dot_blocked(&values[..i], &rev[n - i..n]);
        values.push(w.clamp(0.0, 1.0));
    }
}

/// Exact `w_0 … w_n`.
pub fn renewal_exact(spec: &PartitionSpec, n: usize) -> Result<Vec<BigRational>> {
    if !spec.is_exact() {
        return Err(Error::NotExact);
    }
    let atoms: Vec<BigRational> = (1..=n as u64).map(|k| spec.atom_exact(k)).collect::<Result<_>>()?;
    let mut w = vec![BigRational::one()];
    for i in 1..=n {
        let mut acc = BigRational::zero();
        for m in 1..=i {
            acc += &atoms[m - 1] * &w[i - m];
        }
        w.push(acc);
    }
    Ok(w)
}

/// `w_0 … w_n` computed entirely in floating point.
pub fn renewal_float(spec: &PartitionSpec, n: usize) -> Vec<f64> {
    let atoms = spec.atom_table(n as u64);
    let mut values = vec![1.0];
    extend_float(&atoms, &mut values, n);
    values
}

/// `w_0 … w_n`: exact up to [`EXACT_CAP`] for rational partitions, then a
/// float continuation.
pub fn renewal_sequence(spec: &PartitionSpec, n: usize) -> Result<RenewalSequence> {
    if n == 0 {
        return Err(Error::domain("renewal sequence needs N ≥ 1"));
    }
    let atoms = spec.atom_table(n as u64);
    let (exact, backend) = if spec.is_exact() {
        (renewal_exact(spec, n.min(EXACT_CAP))?, Backend::Exact)
    } else {
        (Vec::new(), Backend::Float)
    };
    let mut values: Vec<f64> = if exact.is_empty() { vec![1.0] } else { exact.iter().map(rational_to_f64).collect() };
    let switch_point = (backend == Backend::Exact && n > EXACT_CAP).then_some(EXACT_CAP + 1);
    if let Some(k) = switch_point {
        log::info!("renewal: exact arithmetic up to n = {}, floating point from n = {}", EXACT_CAP, k);
    }
    extend_float(&atoms, &mut values, n);

    let tails_from_one = spec.tail_table(n as u64);
    let mut tails = Vec::with_capacity(n + 1);
    tails.push(f64::NAN);
    tails.extend_from_slice(&tails_from_one[..n]);
    let prefix = |xs: &[f64]| {
        let mut acc = NeumaierSum::new();
        let mut out = vec![0.0];
        for &x in &xs[1..] {
            acc.add(x);
            out.push(acc.value());
        }
        out
    };
    let partial_w = prefix(&values);
    let partial_t = prefix(&tails);
    Ok(RenewalSequence { values, exact, backend, switch_point, partial_w, partial_t, tails })
}

/// `λ(𝓛_n)` by enumerating all compositions of `n`, independent of the
/// recursion.
pub fn composition_oracle<S: Scalar>(spec: &PartitionSpec, n: u64) -> Result<S> {
    if n == 0 {
        return Ok(S::one());
    }
    if n > ORACLE_CAP {
        return Err(Error::Range { what: "composition oracle", n });
    }
    let atoms: Vec<S> = (1..=n).map(|k| S::atom(spec, k)).collect::<Result<_>>()?;
    fn walk<S: Scalar>(atoms: &[S], remaining: usize, product: S, total: &mut S) {
        if remaining == 0 {
            *total = total.clone() + product;
            return;
        }
        for first in 1..=remaining {
            walk(atoms, remaining - first, product.clone() * atoms[first - 1].clone(), total);
        }
    }
    let mut total = S::zero();
    walk(&atoms, n as usize, S::one(), &mut total);
    Ok(total)
}

/// `lim w_n = (Σ t_k)^{-1}`, which is 0 for infinite type.
pub fn limit_prediction(spec: &PartitionSpec) -> f64 {
    match spec.total_tail_sum().value {
        Extended::Infinite => 0.0,
        Extended::Finite(s) => 1.0 / s,
    }
}

pub fn gamma(x: f64) -> f64 {
    gamma_fn(x)
}

fn expansive_theta(spec: &PartitionSpec) -> Option<f64> {
    match spec.classify().tail_kind {
        TailKind::Expansive { theta, .. } => Some(theta),
        _ => None,
    }
}

/// `K_α = (Γ(2-θ)Γ(1+θ))^{-1}` for expansive `θ ∈ [0,1]`, 1 for finite type.
pub fn weak_constant(spec: &PartitionSpec) -> Result<f64> {
    if spec.classify().is_finite_type() {
        return Ok(1.0);
    }
    match expansive_theta(spec) {
        Some(theta) if (0.0..=1.0).contains(&theta) => Ok(1.0 / (gamma_fn(2.0 - theta) * gamma_fn(1.0 + theta))),
        _ => Err(Error::domain("weak law needs finite type or a regularly varying tail with θ ∈ [0,1]")),
    }
}

/// `k_α = (Γ(2-θ)Γ(θ))^{-1}` for expansive `θ ∈ (1/2,1]`, 1 for finite type.
pub fn strong_constant(spec: &PartitionSpec) -> Result<f64> {
    if spec.classify().is_finite_type() {
        return Ok(1.0);
    }
    match expansive_theta(spec) {
        Some(theta) if theta > 0.5 && theta <= 1.0 => Ok(1.0 / (gamma_fn(2.0 - theta) * gamma_fn(theta))),
        Some(theta) => Err(Error::StrongLawNotGuaranteed(format!(
            "tail exponent θ = {} ≤ 1/2 for a partition of infinite type",
            theta
        ))),
        None => Err(Error::StrongLawNotGuaranteed("tail is not regularly varying".into())),
    }
}

pub fn weak_law_ratio(spec: &PartitionSpec, n: usize) -> Result<f64> {
    renewal_sequence(spec, n)?.weak_law_ratio(spec, n)
}

pub fn strong_law_ratio(spec: &PartitionSpec, n: usize) -> Result<f64> {
    strong_constant(spec)?;
    renewal_sequence(spec, n)?.strong_law_ratio(spec, n)
}

/// `liminf n t_n w_n = sin(πθ)/π`.
pub fn gl_target(theta: f64) -> f64 {
    (PI * theta).sin() / PI
}

/// Running minima of `n t_n w_n`, index `n - 1` for `n = 1..=N`.
pub fn gl_liminf_track(spec: &PartitionSpec, n: usize) -> Result<Vec<f64>> {
    match expansive_theta(spec) {
        Some(theta) if theta > 0.0 && theta < 1.0 => {}
        _ => return Err(Error::domain("Garsia–Lamperti tracking needs a tail exponent θ ∈ (0,1)")),
    }
    let seq = renewal_sequence(spec, n)?;
    Ok(running_min(&seq))
}

pub(crate) fn running_min(seq: &RenewalSequence) -> Vec<f64> {
    let mut out = Vec::with_capacity(seq.len());
    let mut current = f64::INFINITY;
    for k in 1..=seq.len() {
        current = current.min(k as f64 * seq.tails[k] * seq.values[k]);
        out.push(current);
    }
    out
}
