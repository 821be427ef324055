use crate::error::{Error, Result};
use crate::numeric::Extended;
use crate::partition::{AtomAsymptotics, PartitionSpec, Weight};

/// `p(u)` with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pressure {
    pub value: Extended,
    pub error: f64,
}

/// `max_n u log a_n` over the leading atoms, used to scale sums.
pub(crate) fn log_scale(spec: &PartitionSpec, u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    (1..=spec.decreasing_from()).map(|n| u * spec.log_atom(n)).fold(f64::NEG_INFINITY, f64::max)
}

/// `p(u) = log Σ a_n^u`, symbolically infinite where the series diverges.
pub fn pressure(spec: &PartitionSpec, u: f64) -> Pressure {
    let c = log_scale(spec, u);
    let sum = spec.weighted_sum_scaled(u, 0.0, Weight::One, 1, c);
    match sum.value {
        Extended::Finite(z) if z > 0.0 => Pressure { value: Extended::Finite(c + z.ln()), error: sum.error / z },
        _ => Pressure { value: Extended::Infinite, error: f64::INFINITY },
    }
}

/// `p'(u) = Σ a_n^u log a_n / Σ a_n^u`.
pub fn pressure_derivative(spec: &PartitionSpec, u: f64) -> Result<f64> {
    let c = log_scale(spec, u);
    let num = spec.weighted_sum_scaled(u, 0.0, Weight::LogAtom, 1, c);
    let den = spec.weighted_sum_scaled(u, 0.0, Weight::One, 1, c);
    match (num.value, den.value) {
        (Extended::Finite(a), Extended::Finite(b)) if b > 0.0 => Ok(a / b),
        _ => Err(Error::domain(format!("p'({}) diverges", u))),
    }
}

/// `t_∞ = inf{r > 0 : Σ a_n^r < ∞}` from the tail law: `1/β` for atoms
/// `≍ n^{-β}(log n)^{-γ}`, 0 for geometric atoms.
pub fn t_infinity(spec: &PartitionSpec) -> f64 {
    match spec.asymptotics() {
        AtomAsymptotics::Geometric { .. } => 0.0,
        AtomAsymptotics::Power { beta, .. } => 1.0 / beta,
    }
}

/// `t_- = min_n (-log a_n)`.
pub fn t_minus(spec: &PartitionSpec) -> f64 {
    (1..=spec.decreasing_from()).map(|n| -spec.log_atom(n)).fold(f64::INFINITY, f64::min)
}

/// `p(t_∞)`, symbolically infinite when `Σ a_n^{t_∞}` diverges.
pub fn pressure_at_t_infinity(spec: &PartitionSpec) -> Pressure {
    let t = t_infinity(spec);
    if t <= 0.0 {
        return Pressure { value: Extended::Infinite, error: f64::INFINITY };
    }
    pressure(spec, t)
}

/// `t_0 = lim_{u↓t_∞} -p'(u)`, extrapolated from `δ ∈ {10⁻², 10⁻³, 10⁻⁴}`.
/// Infinite when `Σ a_n^{t_∞} |log a_n|` diverges.
pub fn t_zero(spec: &PartitionSpec) -> Extended {
    let t = t_infinity(spec);
    if t <= 0.0 || !spec.sum_converges(t, 0.0, Weight::One) || !spec.sum_converges(t, 0.0, Weight::LogAtom) {
        return Extended::Infinite;
    }
    let deltas = [1e-2, 1e-3, 1e-4];
    let mut values = [0.0; 3];
    for (v, d) in values.iter_mut().zip(deltas) {
        match pressure_derivative(spec, t + d) {
            Ok(p) => *v = -p,
            Err(_) => return Extended::Infinite,
        }
    }
    // quadratic Neville extrapolation to δ = 0
    let [d0, d1, d2] = deltas;
    let [f0, f1, f2] = values;
    let l0 = d1 * d2 / ((d0 - d1) * (d0 - d2));
    let l1 = d0 * d2 / ((d1 - d0) * (d1 - d2));
    let l2 = d0 * d1 / ((d2 - d0) * (d2 - d1));
    Extended::Finite(l0 * f0 + l1 * f1 + l2 * f2)
}
