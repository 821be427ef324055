//! Monte Carlo checks of the λ-almost-everywhere limits along `L_α`-orbits,
//! the invariant density of `F_α` and sum-level frequencies.
//!
//! Lebesgue measure is `L_α`-invariant and the digits of a uniform point
//! are i.i.d. with `P(ℓ = k) = a_k`, so long orbits are simulated
//! symbolically by drawing digits with `locate(u)` for uniform `u`.

pub mod rng;

use std::collections::BTreeMap;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{self, luroth_map};
use crate::error::{Error, Result};
use crate::numeric::{Extended, NeumaierSum};
use crate::partition::{PartitionSpec, Scalar, Weight};

/// Digits up to this value are counted in a dense histogram.
pub const DENSE_DIGITS: u64 = 4096;

/// Steps per deterministic work block.
pub const BLOCK: u64 = 1 << 16;

/// Longest float orbit of `L_α` offered for demonstration.
pub const MAX_FLOAT_ORBIT: usize = 50;

#[derive(Debug, Clone, Default)]
struct Moments {
    digit: NeumaierSum,
    digit_sq: NeumaierSum,
    log_digit: NeumaierSum,
    log_digit_sq: NeumaierSum,
    neg_log_atom: NeumaierSum,
    neg_log_atom_sq: NeumaierSum,
    cross: NeumaierSum,
}

impl Moments {
    fn add(&mut self, digit: f64, neg_log_atom: f64) {
        let ld = digit.ln();
        self.digit.add(digit);
        self.digit_sq.add(digit * digit);
        self.log_digit.add(ld);
        self.log_digit_sq.add(ld * ld);
        self.neg_log_atom.add(neg_log_atom);
        self.neg_log_atom_sq.add(neg_log_atom * neg_log_atom);
        self.cross.add(digit * neg_log_atom);
    }

    fn merge(&mut self, o: &Moments) {
        self.digit.merge(&o.digit);
        self.digit_sq.merge(&o.digit_sq);
        self.log_digit.merge(&o.log_digit);
        self.log_digit_sq.merge(&o.log_digit_sq);
        self.neg_log_atom.merge(&o.neg_log_atom);
        self.neg_log_atom_sq.merge(&o.neg_log_atom_sq);
        self.cross.merge(&o.cross);
    }
}

/// Running means after `n` steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunningMeans {
    pub n: u64,
    pub mean_digit: f64,
    pub mean_log_digit: f64,
    pub mean_neg_log_atom: f64,
    /// `mean_neg_log_atom / mean_digit`.
    pub quotient: f64,
}

impl RunningMeans {
    fn from_moments(n: u64, m: &Moments) -> Self {
        let k = n as f64;
        let mean_digit = m.digit.value() / k;
        let mean_neg_log_atom = m.neg_log_atom.value() / k;
        Self {
            n,
            mean_digit,
            mean_log_digit: m.log_digit.value() / k,
            mean_neg_log_atom,
            quotient: mean_neg_log_atom / mean_digit,
        }
    }
}

/// Statistics of `n_steps` i.i.d. α-Lüroth digits of a uniform point.
#[derive(Debug, Clone)]
pub struct TrajectoryStats {
    pub n_steps: u64,
    pub seed: u64,
    /// Count of digit `k` at index `k - 1`, for `k ≤ DENSE_DIGITS`.
    pub dense: Vec<u64>,
    /// Counts of larger digits.
    pub overflow: BTreeMap<u64, u64>,
    /// Draws whose digit exceeds `u64::MAX`; recorded as `u64::MAX`.
    pub saturated: u64,
    /// Running means at `n = 10, 100, …` and at `n_steps`.
    pub decades: Vec<RunningMeans>,
    moments: Moments,
}

impl TrajectoryStats {
    pub fn count(&self, digit: u64) -> u64 {
        if digit == 0 {
            0
        } else if digit <= DENSE_DIGITS {
            self.dense[digit as usize - 1]
        } else {
            self.overflow.get(&digit).copied().unwrap_or(0)
        }
    }

    pub fn frequency(&self, digit: u64) -> f64 {
        self.count(digit) as f64 / self.n_steps as f64
    }

    pub fn digit_histogram(&self) -> BTreeMap<u64, u64> {
        let mut h: BTreeMap<u64, u64> =
            self.dense.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i as u64 + 1, c)).collect();
        h.extend(self.overflow.iter().map(|(&k, &c)| (k, c)));
        h
    }

    fn n(&self) -> f64 {
        self.n_steps as f64
    }

    pub fn mean_digit(&self) -> f64 {
        self.moments.digit.value() / self.n()
    }

    pub fn mean_log_digit(&self) -> f64 {
        self.moments.log_digit.value() / self.n()
    }

    pub fn mean_neg_log_atom(&self) -> f64 {
        self.moments.neg_log_atom.value() / self.n()
    }

    fn variance(&self, sum: &NeumaierSum, sum_sq: &NeumaierSum) -> f64 {
        let mean = sum.value() / self.n();
        (sum_sq.value() / self.n() - mean * mean).max(0.0) * self.n() / (self.n() - 1.0).max(1.0)
    }

    pub fn std_error_digit(&self) -> f64 {
        (self.variance(&self.moments.digit, &self.moments.digit_sq) / self.n()).sqrt()
    }

    pub fn std_error_log_digit(&self) -> f64 {
        (self.variance(&self.moments.log_digit, &self.moments.log_digit_sq) / self.n()).sqrt()
    }

    pub fn std_error_neg_log_atom(&self) -> f64 {
        (self.variance(&self.moments.neg_log_atom, &self.moments.neg_log_atom_sq) / self.n()).sqrt()
    }

    fn covariance_digit_neg_log_atom(&self) -> f64 {
        let n = self.n();
        let md = self.mean_digit();
        let ma = self.mean_neg_log_atom();
        (self.moments.cross.value() / n - md * ma) * n / (n - 1.0).max(1.0)
    }
}

#[derive(Debug, Clone, Default)]
struct Block {
    dense: Vec<u64>,
    overflow: BTreeMap<u64, u64>,
    saturated: u64,
    moments: Moments,
    /// Snapshots `(global n, moments so far within the block)`.
    snapshots: Vec<(u64, Moments)>,
}

fn is_checkpoint(n: u64, total: u64) -> bool {
    if n == total {
        return true;
    }
    let mut p = 10u64;
    while p < n {
        p = p.saturating_mul(10);
    }
    p == n
}

fn run_block(spec: &PartitionSpec, seed: u64, start: u64, end: u64, total: u64) -> Result<Block> {
    let mut b = Block { dense: vec![0; DENSE_DIGITS as usize], ..Block::default() };
    for i in start..end {
        let u = rng::unit_open_closed(rng::output(seed, i));
        let digit = match spec.locate(u) {
            Ok(d) => d,
            Err(Error::Range { .. }) => {
                b.saturated += 1;
                u64::MAX
            }
            Err(e) => return Err(e),
        };
        if digit <= DENSE_DIGITS {
            b.dense[digit as usize - 1] += 1;
        } else {
            *b.overflow.entry(digit).or_insert(0) += 1;
        }
        b.moments.add(digit as f64, -spec.log_atom(digit));
        if is_checkpoint(i + 1, total) {
            b.snapshots.push((i + 1, b.moments.clone()));
        }
    }
    Ok(b)
}

/// Draws `n` i.i.d. digits from the stream keyed by `seed`. The result is
/// bit-identical for fixed inputs, independent of the worker count.
pub fn sample_digits(spec: &PartitionSpec, n: u64, seed: u64) -> Result<TrajectoryStats> {
    if n == 0 {
        return Err(Error::domain("sample_digits needs n ≥ 1"));
    }
    let blocks: Vec<(u64, u64)> = (0..n.div_ceil(BLOCK)).map(|b| (b * BLOCK, ((b + 1) * BLOCK).min(n))).collect();
    let results: Vec<Block> =
        blocks.par_iter().map(|&(s, e)| run_block(spec, seed, s, e, n)).collect::<Result<_>>()?;

    let mut stats = TrajectoryStats {
        n_steps: n,
        seed,
        dense: vec![0; DENSE_DIGITS as usize],
        overflow: BTreeMap::new(),
        saturated: 0,
        decades: Vec::new(),
        moments: Moments::default(),
    };
    for b in &results {
        for (at, partial) in &b.snapshots {
            let mut m = stats.moments.clone();
            m.merge(partial);
            stats.decades.push(RunningMeans::from_moments(*at, &m));
        }
        for (c, x) in stats.dense.iter_mut().zip(&b.dense) {
            *c += x;
        }
        for (&k, &c) in &b.overflow {
            *stats.overflow.entry(k).or_insert(0) += c;
        }
        stats.saturated += b.saturated;
        stats.moments.merge(&b.moments);
    }
    Ok(stats)
}

/// A Monte Carlo estimate with its standard error and the value it should
/// approach.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub target: Extended,
}

impl Estimate {
    /// `|value - target|` in standard errors; infinite when the target is.
    pub fn z_score(&self) -> f64 {
        match self.target {
            Extended::Finite(t) => (self.value - t).abs() / self.std_error,
            Extended::Infinite => f64::INFINITY,
        }
    }
}

/// `Σ a_k log k`.
pub fn log_digit_target(spec: &PartitionSpec) -> Extended {
    spec.weighted_sum(1.0, 0.0, Weight::LogAffine(0.0)).value
}

/// `Σ_k t_k = Σ k a_k`.
pub fn mean_digit_target(spec: &PartitionSpec) -> Extended {
    spec.total_tail_sum().value
}

/// `-Σ a_k log a_k`.
pub fn luroth_lyapunov_target(spec: &PartitionSpec) -> Extended {
    match spec.weighted_sum(1.0, 0.0, Weight::LogAtom).value {
        Extended::Finite(x) => Extended::Finite(-x),
        Extended::Infinite => Extended::Infinite,
    }
}

/// Frequency of digit `k` against `a_k`.
pub fn digit_frequency_estimate(spec: &PartitionSpec, stats: &TrajectoryStats, k: u64) -> Result<Estimate> {
    let a = spec.atom(k)?;
    Ok(Estimate { value: stats.frequency(k), std_error: (a * (1.0 - a) / stats.n()).sqrt(), target: Extended::Finite(a) })
}

pub fn log_digit_estimate(spec: &PartitionSpec, stats: &TrajectoryStats) -> Estimate {
    Estimate { value: stats.mean_log_digit(), std_error: stats.std_error_log_digit(), target: log_digit_target(spec) }
}

/// Mean digit against `Σ t_k`; for infinite type the target is `+∞`.
pub fn mean_digit_estimate(spec: &PartitionSpec, stats: &TrajectoryStats) -> Estimate {
    Estimate { value: stats.mean_digit(), std_error: stats.std_error_digit(), target: mean_digit_target(spec) }
}

/// Lyapunov exponent of `L_α`: the mean of `-log a_{ℓ_j}`, with target
/// `-Σ a_k log a_k`.
pub fn luroth_lyapunov_estimate(spec: &PartitionSpec, stats: &TrajectoryStats) -> Estimate {
    Estimate {
        value: stats.mean_neg_log_atom(),
        std_error: stats.std_error_neg_log_atom(),
        target: luroth_lyapunov_target(spec),
    }
}

/// Lyapunov exponent of `F_α` as the quotient `mean(-log a_ℓ)/mean(ℓ)`,
/// with a delta-method standard error. The target is
/// `(-Σ a_k log a_k)/Σ t_k`, which is 0 for infinite type.
pub fn farey_lyapunov_estimate(spec: &PartitionSpec, stats: &TrajectoryStats) -> Estimate {
    let a = stats.mean_neg_log_atom();
    let b = stats.mean_digit();
    let q = a / b;
    let var_a = stats.std_error_neg_log_atom().powi(2);
    let var_b = stats.std_error_digit().powi(2);
    let cov = stats.covariance_digit_neg_log_atom() / stats.n();
    let var_q = (var_a - 2.0 * q * cov + q * q * var_b).max(0.0) / (b * b);
    let target = match (luroth_lyapunov_target(spec), mean_digit_target(spec)) {
        (Extended::Finite(x), Extended::Finite(y)) => Extended::Finite(x / y),
        (_, Extended::Infinite) => Extended::Finite(0.0),
        _ => Extended::Infinite,
    };
    Estimate { value: q, std_error: var_q.sqrt(), target }
}

/// Residual of the fixed-point identity `ℛ_α φ_α = φ_α` for the density
/// `φ_α = Σ (t_n/a_n) 1_{A_n}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityCheck {
    pub n_atoms: u64,
    pub max_residual: f64,
    /// Whether every residual is exactly zero (exact backend only).
    pub exact_zero: Option<bool>,
    /// `Σ_{n ≤ n_atoms} φ_α|_{A_n} · a_n`.
    pub partial_mass: f64,
    /// `ν_α(𝒰) = Σ_k t_k`.
    pub total_mass: Extended,
}

fn density_at<S: Scalar>(spec: &PartitionSpec, x: &S) -> Result<S> {
    let n = S::locate(spec, x)?;
    Ok(S::tail(spec, n)? / S::atom(spec, n)?)
}

/// `ℛ_α φ(x) - φ(x)` at the midpoint of `A_n`, using the inverse branches
/// `F_{α,0}` (slope `a_{n+1}/a_n`) and `F_{α,1}` (slope `a_1`).
fn density_residual<S: Scalar>(spec: &PartitionSpec, n: u64) -> Result<S> {
    let two = S::one() + S::one();
    let x = (S::tail(spec, n)? + S::tail(spec, n + 1)?) / two;
    let y0 = dynamics::inverse_branch_farey(spec, 0, &x)?;
    let y1 = dynamics::inverse_branch_farey(spec, 1, &x)?;
    let m = S::locate(spec, &y0)?;
    let slope0 = S::atom(spec, m)? / S::atom(spec, m - 1)?;
    let slope1 = S::atom(spec, 1)?;
    let image = slope0 * density_at(spec, &y0)? + slope1 * density_at(spec, &y1)?;
    Ok(image - density_at(spec, &x)?)
}

pub fn invariant_density_check(spec: &PartitionSpec, n_atoms: u64) -> Result<DensityCheck> {
    if n_atoms == 0 {
        return Err(Error::domain("density check needs at least one atom"));
    }
    let mut max_residual = 0.0f64;
    let mut exact_zero = None;
    if spec.is_exact() {
        let mut all_zero = true;
        for n in 1..=n_atoms {
            let r: BigRational = density_residual(spec, n)?;
            all_zero &= r == BigRational::from_integer(0.into());
            max_residual = max_residual.max(Scalar::to_f64(&r).abs());
        }
        exact_zero = Some(all_zero);
    } else {
        for n in 1..=n_atoms {
            let r: f64 = density_residual(spec, n)?;
            let phi = spec.tail(n)? / spec.atom(n)?;
            max_residual = max_residual.max(r.abs() / phi);
        }
    }
    Ok(DensityCheck {
        n_atoms,
        max_residual,
        exact_zero,
        partial_mass: spec.partial_tail_sum(n_atoms)?.value,
        total_mass: spec.total_tail_sum().value,
    })
}

/// Fraction of uniform points lying in the sum-level set `𝓛_{n_level}`,
/// i.e. whose digit partial sums hit `n_level` exactly. Sample `j` uses the
/// sub-stream `(seed, j)`.
pub fn sum_level_frequency(spec: &PartitionSpec, n_level: u64, n_samples: u64, seed: u64) -> Result<Estimate> {
    if n_level == 0 || n_samples == 0 {
        return Err(Error::domain("sum_level_frequency needs n_level ≥ 1 and n_samples ≥ 1"));
    }
    let chunks: Vec<(u64, u64)> =
        (0..n_samples.div_ceil(BLOCK)).map(|b| (b * BLOCK, ((b + 1) * BLOCK).min(n_samples))).collect();
    let hits: u64 = chunks
        .par_iter()
        .map(|&(s, e)| -> Result<u64> {
            let mut hits = 0;
            for j in s..e {
                let mut g = rng::SplitMix64::new(rng::stream_key(seed, j));
                let mut total = 0u64;
                while total < n_level {
                    total = match spec.locate(g.next_unit()) {
                        Ok(d) => total.saturating_add(d),
                        Err(Error::Range { .. }) => u64::MAX,
                        Err(e) => return Err(e),
                    };
                }
                hits += (total == n_level) as u64;
            }
            Ok(hits)
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    let p = hits as f64 / n_samples as f64;
    let target = crate::renewal::renewal_sequence(spec, n_level as usize)?.values[n_level as usize];
    let std_error = (target * (1.0 - target) / n_samples as f64).sqrt();
    Ok(Estimate { value: p, std_error, target: Extended::Finite(target) })
}

/// A short floating-point orbit `x, L_α x, L_α² x, …` (at most
/// [`MAX_FLOAT_ORBIT`] steps); float orbits lose all digits after a few
/// dozen steps.
pub fn float_orbit(spec: &PartitionSpec, x: f64, steps: usize) -> Result<Vec<f64>> {
    if steps > MAX_FLOAT_ORBIT {
        return Err(Error::domain(format!("float orbits are limited to {} steps", MAX_FLOAT_ORBIT)));
    }
    let mut out = vec![x];
    let mut y = x;
    for _ in 0..steps {
        if y == 0.0 {
            break;
        }
        y = luroth_map(spec, &y)?;
        out.push(y);
    }
    Ok(out)
}
