//! Thermodynamic formalism for `L_α` and `F_α`: pressure `p`, free energy
//! `v`, the Lyapunov spectra `τ_α`, `σ_α` and phase-transition verdicts.

mod free_energy;
mod phase;
mod pressure;
mod spectrum;

use rayon::prelude::*;
use serde::Serialize;

use crate::numeric::Extended;
use crate::partition::PartitionSpec;

pub use free_energy::{free_energy, free_energy_derivative, free_energy_with_error, FreeEnergy};
pub use phase::{farey_phase_report, luroth_phase_report, post_transition_values, MapKind, PhaseReport, Verdict};
pub use pressure::{
    pressure, pressure_at_t_infinity, pressure_derivative, t_infinity, t_minus, t_zero, Pressure,
};
pub use spectrum::{sigma, spectrum_bounds, tau, SpectrumBounds, SpectrumPoint, S_SEARCH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CurveKind {
    Pressure,
    FreeEnergy,
    TauSpectrum,
    SigmaSpectrum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    pub argument: f64,
    pub value: Extended,
    /// Minimizing `u` of the Legendre-type infimum (spectra only).
    pub minimizer: Option<f64>,
    pub error_bound: f64,
}

/// Sampled curve with strictly increasing arguments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveTable {
    pub kind: CurveKind,
    pub samples: Vec<CurveSample>,
}

/// `count` equally spaced points from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![from],
        _ => (0..count).map(|i| from + (to - from) * i as f64 / (count - 1) as f64).collect(),
    }
}

fn sorted_grid(grid: &[f64]) -> Vec<f64> {
    let mut g: Vec<f64> = grid.iter().copied().filter(|x| x.is_finite()).collect();
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

pub fn pressure_curve(spec: &PartitionSpec, u_grid: &[f64]) -> CurveTable {
    let samples = sorted_grid(u_grid)
        .par_iter()
        .map(|&u| {
            let p = pressure(spec, u);
            CurveSample { argument: u, value: p.value, minimizer: None, error_bound: p.error }
        })
        .collect();
    CurveTable { kind: CurveKind::Pressure, samples }
}

pub fn free_energy_curve(spec: &PartitionSpec, u_grid: &[f64]) -> CurveTable {
    let samples = sorted_grid(u_grid)
        .par_iter()
        .map(|&u| match free_energy_with_error(spec, u) {
            Ok(v) => CurveSample { argument: u, value: Extended::Finite(v.value), minimizer: None, error_bound: v.error },
            Err(_) => CurveSample { argument: u, value: Extended::Infinite, minimizer: None, error_bound: f64::INFINITY },
        })
        .collect();
    CurveTable { kind: CurveKind::FreeEnergy, samples }
}

fn spectrum_curve(kind: CurveKind, grid: &[f64], f: impl Fn(f64) -> SpectrumPoint + Sync) -> CurveTable {
    let samples = sorted_grid(grid)
        .par_iter()
        .map(|&s| {
            let p = f(s);
            CurveSample { argument: s, value: Extended::Finite(p.value), minimizer: p.minimizer, error_bound: p.error_bound }
        })
        .collect();
    CurveTable { kind, samples }
}

/// `τ_α(s) = inf_u (u + p(u)/s)` on a grid of `s`.
pub fn tau_spectrum(spec: &PartitionSpec, s_grid: &[f64]) -> CurveTable {
    spectrum_curve(CurveKind::TauSpectrum, s_grid, |s| tau(spec, s))
}

/// `σ_α(s) = inf_u (u + v(u)/s)` on a grid of `s`.
pub fn sigma_spectrum(spec: &PartitionSpec, s_grid: &[f64]) -> CurveTable {
    spectrum_curve(CurveKind::SigmaSpectrum, s_grid, |s| sigma(spec, s))
}

/// Result of comparing a sampled spectrum with its defining infimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LegendreCheck {
    /// `max (value - (u + f(u)/s))` over samples and the `u`-grid; ≤ 0 up
    /// to rounding when every value lies below the envelope.
    pub max_violation: f64,
    /// `max |value - (u* + f(u*)/s)|` at the recorded minimizers.
    pub max_minimizer_gap: f64,
    pub pairs_checked: usize,
}

/// Checks `value ≤ u + f(u)/s` on a `u`-grid and equality at the recorded
/// minimizer, with `f = p` for `τ` and `f = v` for `σ`.
pub fn legendre_check(curve: &CurveTable, spec: &PartitionSpec, u_grid: &[f64]) -> LegendreCheck {
    let objective: Box<dyn Fn(f64) -> Extended + Sync> = match curve.kind {
        CurveKind::TauSpectrum => Box::new(|u| pressure(spec, u).value),
        CurveKind::SigmaSpectrum => {
            Box::new(|u| free_energy(spec, u).map(Extended::Finite).unwrap_or(Extended::Infinite))
        }
        CurveKind::Pressure | CurveKind::FreeEnergy => {
            return LegendreCheck { max_violation: 0.0, max_minimizer_gap: 0.0, pairs_checked: 0 }
        }
    };
    let f_grid: Vec<Extended> = u_grid.par_iter().map(|&u| objective(u)).collect();
    let mut max_violation = f64::NEG_INFINITY;
    let mut max_gap = 0.0f64;
    let mut pairs = 0;
    for sample in &curve.samples {
        let (Some(u_star), Extended::Finite(value)) = (sample.minimizer, sample.value) else {
            continue;
        };
        let s = sample.argument;
        for (&u, f) in u_grid.iter().zip(&f_grid) {
            if let Extended::Finite(f) = f {
                max_violation = max_violation.max(value - (u + f / s));
                pairs += 1;
            }
        }
        if let Extended::Finite(f) = objective(u_star) {
            max_gap = max_gap.max((value - (u_star + f / s)).abs());
        } else {
            max_gap = f64::INFINITY;
        }
    }
    LegendreCheck { max_violation, max_minimizer_gap: max_gap, pairs_checked: pairs }
}

/// Root of a decreasing function on `[lo, hi]` with `f(lo) > 0 > f(hi)`,
/// by Illinois regula falsi safeguarded with bisection. `f` may return
/// `+∞` near `lo`.
pub(crate) fn decreasing_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut flo = f(lo);
    let mut fhi = f(hi);
    let mut side = 0i8;
    for iter in 0..400 {
        let width = hi - lo;
        if width <= tol {
            break;
        }
        let mut x = (lo * fhi - hi * flo) / (fhi - flo);
        if !x.is_finite() || iter % 6 == 5 {
            x = 0.5 * (lo + hi);
        }
        let guard = 0.25 * tol.min(width);
        x = x.clamp(lo + guard, hi - guard);
        let mut fx = f(x);
        if fx.is_nan() {
            fx = f64::INFINITY;
        }
        if fx > 0.0 {
            lo = x;
            flo = fx;
            if side == 1 {
                fhi *= 0.5;
            }
            side = 1;
        } else if fx < 0.0 {
            hi = x;
            fhi = fx;
            if side == -1 && flo.is_finite() {
                flo *= 0.5;
            }
            side = -1;
        } else {
            return (x, 0.0);
        }
    }
    (0.5 * (lo + hi), hi - lo)
}
