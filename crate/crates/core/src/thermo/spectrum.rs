use serde::Serialize;

use crate::numeric::Extended;
use crate::partition::{AtomAsymptotics, PartitionSpec, Weight};

use super::free_energy::{free_energy, free_energy_derivative};
use super::pressure::{pressure, pressure_at_t_infinity, pressure_derivative, t_infinity, t_minus};
use super::decreasing_root;

/// Number of indices scanned for `s_±` before the analytic limit is used.
pub const S_SEARCH: u64 = 10_000;

const U_TOL: f64 = 1e-13;

/// Domain endpoints of the spectra.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumBounds {
    pub t_minus: f64,
    pub t_infinity: f64,
    /// `inf_n -(log a_n)/n`.
    pub s_minus: f64,
    /// `sup_n -(log a_n)/n`.
    pub s_plus: f64,
    /// Index attaining `s_-`, `None` when it is only a limit.
    pub s_minus_at: Option<u64>,
    pub s_plus_at: Option<u64>,
}

impl SpectrumBounds {
    pub fn degenerate(&self) -> bool {
        (self.s_plus - self.s_minus).abs() <= 1e-14 * self.s_plus.abs()
    }
}

pub fn spectrum_bounds(spec: &PartitionSpec) -> SpectrumBounds {
    let mut lo = (f64::INFINITY, 0u64);
    let mut hi = (f64::NEG_INFINITY, 0u64);
    for n in 1..=S_SEARCH {
        let x = -spec.log_atom(n) / n as f64;
        if x < lo.0 {
            lo = (x, n);
        }
        if x > hi.0 {
            hi = (x, n);
        }
    }
    let limit = match spec.asymptotics() {
        AtomAsymptotics::Geometric { ln_rho } => ln_rho,
        AtomAsymptotics::Power { .. } => 0.0,
    };
    let (s_minus, s_minus_at) = if limit < lo.0 { (limit, None) } else { (lo.0, Some(lo.1)) };
    let (s_plus, s_plus_at) = if limit > hi.0 { (limit, None) } else { (hi.0, Some(hi.1)) };
    SpectrumBounds { t_minus: t_minus(spec), t_infinity: t_infinity(spec), s_minus, s_plus, s_minus_at, s_plus_at }
}

/// One value of `τ_α` or `σ_α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumPoint {
    pub s: f64,
    pub value: f64,
    /// Minimizing `u`; `None` when the spectrum vanishes at `s`.
    pub minimizer: Option<f64>,
    pub error_bound: f64,
}

impl SpectrumPoint {
    fn zero(s: f64) -> Self {
        Self { s, value: 0.0, minimizer: None, error_bound: 0.0 }
    }
}

/// `τ_α(s) = inf_u (u + p(u)/s)`.
///
/// Zero for `s ≤ t_-`. Otherwise the minimizer solves `-p'(u) = s` on
/// `(t_∞, ∞)`, or sits at `t_∞` when `-p'(t_∞⁺) ≤ s`.
pub fn tau(spec: &PartitionSpec, s: f64) -> SpectrumPoint {
    let tm = t_minus(spec);
    if !(s > tm) {
        return SpectrumPoint::zero(s);
    }
    let t_inf = t_infinity(spec);
    let neg_dp = |u: f64| pressure_derivative(spec, u).map(|d| -d).unwrap_or(f64::INFINITY);
    let evaluate = |u: f64, width: f64| {
        let p = pressure(spec, u);
        let value = u + p.value.to_f64() / s;
        SpectrumPoint { s, value, minimizer: Some(u), error_bound: p.error / s + width }
    };

    let p_inf = pressure_at_t_infinity(spec);
    if let Extended::Finite(p0) = p_inf.value {
        if spec.sum_converges(t_inf, 0.0, Weight::LogAtom) && neg_dp(t_inf) <= s {
            return SpectrumPoint { s, value: t_inf + p0 / s, minimizer: Some(t_inf), error_bound: p_inf.error / s };
        }
    }

    let mut gap = 1e-3;
    let mut lo = t_inf + gap;
    while neg_dp(lo) <= s {
        gap *= 0.1;
        if gap < 1e-15 {
            return evaluate(t_inf + gap, gap);
        }
        lo = t_inf + gap;
    }
    let mut hi = (t_inf + 1.0).max(1.0);
    while neg_dp(hi) >= s {
        lo = hi;
        hi *= 2.0;
        if hi > 1e7 {
            return evaluate(lo, f64::INFINITY);
        }
    }
    let (u, width) = decreasing_root(|u| neg_dp(u) - s, lo, hi, U_TOL * hi.max(1.0));
    evaluate(u, width)
}

/// `σ_α(s) = inf_u (u + v(u)/s)`.
///
/// Zero outside `[s_-, s_+]` except in the degenerate case `s_- = s_+`.
/// For subexponential atoms the infimum is 1, attained at `u = 1`, whenever
/// `s ≤ -v'(1⁻)`.
pub fn sigma(spec: &PartitionSpec, s: f64) -> SpectrumPoint {
    let b = spectrum_bounds(spec);
    let evaluate = |u: f64, width: f64| match free_energy(spec, u) {
        Ok(v) => SpectrumPoint { s, value: u + v / s, minimizer: Some(u), error_bound: 1e-12 / s + width },
        Err(_) => SpectrumPoint::zero(s),
    };
    if b.degenerate() {
        if (s - b.s_minus).abs() <= 1e-12 * b.s_minus {
            return evaluate(1.0, 0.0);
        }
        return SpectrumPoint::zero(s);
    }
    if !(s > b.s_minus && s < b.s_plus) {
        return SpectrumPoint::zero(s);
    }
    let neg_dv = |u: f64| free_energy_derivative(spec, u).map(|d| -d).unwrap_or(f64::NAN);
    let subexponential = matches!(spec.asymptotics(), AtomAsymptotics::Power { .. });

    let (mut lo, mut hi);
    if subexponential {
        if neg_dv(1.0) >= s {
            return evaluate(1.0, 0.0);
        }
        hi = 1.0;
        lo = 0.0;
        let mut step = 1.0;
        while neg_dv(lo) <= s {
            hi = lo;
            step *= 2.0;
            lo -= step;
            if step > 1e7 {
                return evaluate(lo, f64::INFINITY);
            }
        }
    } else {
        lo = 0.0;
        hi = 1.0;
        let mut step = 1.0;
        while neg_dv(lo) <= s {
            hi = lo;
            step *= 2.0;
            lo -= step;
            if step > 1e7 {
                return evaluate(lo, f64::INFINITY);
            }
        }
        step = 1.0;
        while neg_dv(hi) >= s {
            lo = lo.max(hi);
            step *= 2.0;
            hi += step;
            if step > 1e7 {
                return evaluate(hi, f64::INFINITY);
            }
        }
    }
    let (u, width) = decreasing_root(|u| neg_dv(u) - s, lo, hi, U_TOL * lo.abs().max(hi.abs()).max(1.0));
    evaluate(u, width)
}
