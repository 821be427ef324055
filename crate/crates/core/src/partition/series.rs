//! Weighted series `Σ_{n ≥ start} a_n^u e^{-v n} h(n)` over a continuous
//! log-atom law.
//!
//! Terms up to `start + DIRECT_TERMS` are summed directly (compensated);
//! the remainder is an Euler–Maclaurin tail whose integral is evaluated by
//! exp-sinh quadrature. Divergence is decided from the law's asymptotics,
//! never from the numbers.

use super::law::{AtomAsymptotics, Law};
use crate::numeric::quad::exp_sinh;
use crate::numeric::{Extended, NeumaierSum};

pub(crate) const DIRECT_TERMS: u64 = 2048;
const NEGLIGIBLE: f64 = 1e-18;

/// Weight `h(n)` multiplying each term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    One,
    /// `log a_n`.
    LogAtom,
    /// `n + c`.
    Affine(f64),
    /// `log(n + c)`.
    LogAffine(f64),
}

impl Weight {
    fn value(&self, x: f64, la: f64) -> f64 {
        match *self {
            Weight::One => 1.0,
            Weight::LogAtom => la,
            Weight::Affine(c) => x + c,
            Weight::LogAffine(c) => (x + c).ln(),
        }
    }

    fn derivative(&self, x: f64, dla: f64) -> f64 {
        match *self {
            Weight::One => 0.0,
            Weight::LogAtom => dla,
            Weight::Affine(_) => 1.0,
            Weight::LogAffine(c) => 1.0 / (x + c),
        }
    }

    /// Growth of `|h(n)|` as `(n^{poly}, (log n)^{log})`.
    fn growth(&self) -> (f64, f64) {
        match self {
            Weight::One => (0.0, 0.0),
            Weight::LogAtom | Weight::LogAffine(_) => (0.0, 1.0),
            Weight::Affine(_) => (1.0, 0.0),
        }
    }

    pub(crate) fn shifted(&self, m: f64) -> Weight {
        match *self {
            Weight::Affine(c) => Weight::Affine(c + m),
            Weight::LogAffine(c) => Weight::LogAffine(c + m),
            w => w,
        }
    }
}

/// A summed series value with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summed {
    pub value: Extended,
    pub error: f64,
}

impl Summed {
    pub fn finite(value: f64, error: f64) -> Self {
        Self { value: Extended::Finite(value), error }
    }

    pub fn divergent() -> Self {
        Self { value: Extended::Infinite, error: f64::INFINITY }
    }
}

/// Whether `Σ a_n^u e^{-vn} h(n)` converges, from asymptotics alone.
pub(crate) fn converges(asym: AtomAsymptotics, u: f64, v: f64, w: Weight) -> bool {
    match asym {
        AtomAsymptotics::Geometric { ln_rho } => u * ln_rho + v > 1e-15,
        AtomAsymptotics::Power { beta, gamma } => {
            if v > 0.0 {
                return true;
            }
            if v < 0.0 {
                return false;
            }
            let (poly, log) = w.growth();
            let b = u * beta - poly;
            let g = u * gamma - log;
            if (b - 1.0).abs() <= 1e-12 {
                g > 1.0 + 1e-12
            } else {
                b > 1.0
            }
        }
    }
}

pub(crate) fn law_sum(law: &Law, head: &[f64], u: f64, v: f64, w: Weight, start: u64) -> Summed {
    law_sum_scaled(law, head, u, v, w, start, 0.0)
}

/// `e^{-shift} Σ_{n ≥ start} a_n^u e^{-vn} h(n)`.
pub(crate) fn law_sum_scaled(law: &Law, head: &[f64], u: f64, v: f64, w: Weight, start: u64, shift: f64) -> Summed {
    let start = start.max(1);
    if !converges(law.asymptotics(), u, v, w) {
        return Summed::divergent();
    }
    if let Law::Geometric { ln_r, .. } = *law {
        if !matches!(w, Weight::LogAffine(_)) {
            return geometric_closed_form(law, ln_r, u, v, w, start, shift);
        }
    }
    let la_at = |n: u64| -> f64 {
        if n >= 1 && (n as usize) <= head.len() {
            head[n as usize - 1]
        } else {
            law.la(n as f64)
        }
    };
    let exponent = |x: f64, la: f64| u * la - v * x - shift;

    let mut acc = NeumaierSum::new();
    let mut prev = f64::NAN;
    let end = start.saturating_add(DIRECT_TERMS);
    let mut n = start;
    while n < end {
        let x = n as f64;
        let la = la_at(n);
        let e = exponent(x, la);
        if e < -745.0 {
            if v > 0.0 && u * law.dla(x) - v < 0.0 {
                return Summed::finite(acc.value(), 0.0);
            }
            n += 1;
            continue;
        }
        let t = e.exp() * w.value(x, la);
        acc.add(t);
        if v > 0.0 && t != 0.0 && prev.is_finite() && prev != 0.0 {
            let ratio = (t / prev).abs();
            if ratio < 1.0 {
                let bound = t.abs() * ratio / (1.0 - ratio);
                if bound < NEGLIGIBLE * acc.value().abs() {
                    return Summed::finite(acc.value(), bound);
                }
            }
        }
        prev = t;
        n += 1;
    }

    let big = end as f64;
    let tail = em_tail(law, u, v, w, big, acc.value().abs(), shift);
    acc.add(tail.0);
    Summed::finite(acc.value(), tail.1 + 1e-16 * acc.value().abs())
}

/// Euler–Maclaurin estimate of `Σ_{n ≥ big} f(n)` and its error.
fn em_tail(law: &Law, u: f64, v: f64, w: Weight, big: f64, scale: f64, shift: f64) -> (f64, f64) {
    // f(x)·x at x = e^{ly}, assembled in log space
    let f_log = |ly: f64| -> f64 {
        let x = ly.exp();
        let (beta, rest) = law.la_split(ly);
        let la = -beta * ly + rest;
        let mut slope = 1.0 - u * beta;
        let mut e = u * rest - shift;
        if v != 0.0 {
            e -= v * x;
        }
        let h = match w {
            Weight::One => 1.0,
            Weight::LogAtom => la,
            Weight::Affine(c) => {
                slope += 1.0;
                e += (c * (-ly).exp()).ln_1p();
                1.0
            }
            Weight::LogAffine(c) => ly + (c * (-ly).exp()).ln_1p(),
        };
        e += slope * ly;
        if e < -745.0 || e.is_nan() {
            0.0
        } else {
            e.exp() * h
        }
    };
    let la = law.la(big);
    let base = (u * la - v * big - shift).exp();
    let h = w.value(big, la);
    let g = u * law.dla(big) - v;
    let f0 = base * h;
    let f1 = base * (g * h + w.derivative(big, law.dla(big)));
    if f0 == 0.0 && f1 == 0.0 {
        return (0.0, 0.0);
    }
    if g < 0.0 {
        let bound = f0.abs() / (-g) + f0.abs();
        if bound < NEGLIGIBLE * scale {
            return (0.0, bound);
        }
    }
    // in y = log(x/big) the integrand decays like e^{-κ y}; rescaling by κ
    // keeps the quadrature resolved near the convergence boundary
    let log_slope = if h != 0.0 { w.derivative(big, law.dla(big)) / h } else { 0.0 };
    let kappa = (1.0 + big * (g + log_slope)).abs().clamp(1e-12, 1.0);
    let log_big = big.ln();
    let (integral, quad_err) = exp_sinh(
        |z| {
            let ly = log_big + z / kappa;
            f_log(ly) / kappa
        },
        1e-14,
    );
    let third = f0.abs() * g.abs().powi(3) / 720.0 + f0.abs() / (big * big * big);
    (integral + 0.5 * f0 - f1 / 12.0, quad_err + third)
}

fn geometric_closed_form(law: &Law, ln_r: f64, u: f64, v: f64, w: Weight, start: u64, shift: f64) -> Summed {
    let m = start as f64;
    let la_m = law.la(m);
    let t = (u * la_m - v * m - shift).exp();
    let decay = u * (-ln_r) + v;
    let one_minus_q = -(-decay).exp_m1();
    let q = (-decay).exp();
    let s1 = t / one_minus_q;
    let sj = t * q / (one_minus_q * one_minus_q);
    let value = match w {
        Weight::One => s1,
        Weight::Affine(c) => (m + c) * s1 + sj,
        Weight::LogAtom => la_m * s1 + ln_r * sj,
        Weight::LogAffine(_) => unreachable!("log weights are summed directly"),
    };
    Summed::finite(value, 8.0 * f64::EPSILON * value.abs() / one_minus_q.min(1.0))
}
