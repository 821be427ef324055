use crate::error::{Error, Result};
use crate::numeric::Extended;
use crate::partition::{AtomAsymptotics, PartitionSpec, Weight};

use super::decreasing_root;

const V_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEnergy {
    pub value: f64,
    pub error: f64,
}

fn z(spec: &PartitionSpec, u: f64, v: f64) -> Extended {
    spec.weighted_sum(u, v, Weight::One).value
}

/// Smallest `v` for which `Z(u, v) = Σ a_n^u e^{-vn}` converges.
fn convergence_edge(spec: &PartitionSpec, u: f64) -> f64 {
    match spec.asymptotics() {
        AtomAsymptotics::Geometric { ln_rho } => -u * ln_rho,
        AtomAsymptotics::Power { .. } => 0.0,
    }
}

/// `v(u)`: the solution of `Σ a_n^u e^{-v n} = 1`, or 0 when `Σ a_n^u ≤ 1`
/// for subexponential atoms.
pub fn free_energy_with_error(spec: &PartitionSpec, u: f64) -> Result<FreeEnergy> {
    if !u.is_finite() {
        return Err(Error::domain("free energy needs a finite u"));
    }
    let edge = convergence_edge(spec, u);
    let log_z = |v: f64| match z(spec, u, v) {
        Extended::Finite(x) if x > 0.0 => x.ln(),
        Extended::Finite(_) => f64::NEG_INFINITY,
        Extended::Infinite => f64::INFINITY,
    };
    let mut lo = edge;
    if spec.sum_converges(u, edge, Weight::One) {
        // subexponential atoms: v = 0 once Σ a_n^u ≤ 1
        if log_z(edge) <= 0.0 {
            return Ok(FreeEnergy { value: edge.max(0.0), error: 0.0 });
        }
    } else {
        let mut gap = 1e-9 * edge.abs().max(1.0);
        while log_z(edge + gap) <= 0.0 {
            gap *= 1e-3;
            if gap < 1e-300 {
                return Err(Error::domain(format!("no root of Z({}, v) = 1 above the convergence edge", u)));
            }
        }
        lo = edge + gap;
    }
    let mut step = 1.0;
    let mut hi = lo + step;
    while !(log_z(hi) < 0.0) {
        lo = hi;
        step *= 2.0;
        hi = lo + step;
        if step > 1e12 {
            return Err(Error::domain(format!("free energy bracket failed at u = {}", u)));
        }
    }
    let tol = V_TOL * hi.abs().max(1.0);
    let (v, width) = decreasing_root(log_z, lo, hi, tol);
    Ok(FreeEnergy { value: v, error: width + tol })
}

pub fn free_energy(spec: &PartitionSpec, u: f64) -> Result<f64> {
    free_energy_with_error(spec, u).map(|f| f.value)
}

/// `v'(u) = Σ a_n^u e^{-vn} log a_n / Σ a_n^u e^{-vn} n` at `v = v(u)`; at a
/// kink this is the left derivative. Zero where `v` vanishes identically to
/// the right.
pub fn free_energy_derivative(spec: &PartitionSpec, u: f64) -> Result<f64> {
    let v = free_energy(spec, u)?;
    let num = spec.weighted_sum(u, v, Weight::LogAtom).value;
    let den = spec.weighted_sum(u, v, Weight::Affine(0.0)).value;
    match (num, den) {
        (Extended::Finite(a), Extended::Finite(b)) => {
            if v == 0.0 && matches!(spec.asymptotics(), AtomAsymptotics::Power { .. }) {
                if let Extended::Finite(total) = z(spec, u, 0.0) {
                    if total < 1.0 - 1e-12 {
                        return Ok(0.0);
                    }
                }
            }
            Ok(a / b)
        }
        (Extended::Finite(_), Extended::Infinite) => Ok(0.0),
        _ => Err(Error::domain(format!("v'({}) diverges", u))),
    }
}
