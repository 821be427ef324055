use serde::Serialize;

use crate::numeric::Extended;
use crate::partition::{PartitionSpec, Psi, TailKind, TypeClass, Weight};

use super::pressure::{pressure_at_t_infinity, t_infinity, t_zero};
use super::spectrum::spectrum_bounds;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    Luroth,
    Farey,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Transition,
    NoTransition,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseReport {
    pub map_kind: MapKind,
    pub verdict: Verdict,
    pub transition: bool,
    pub criterion_used: String,
    pub type_class: TypeClass,
    /// `lim t_n/t_{n+1}`.
    pub rho: f64,
    pub t_infinity: f64,
    pub t_zero: Extended,
    pub r_plus: Extended,
    pub t_minus: f64,
    pub s_minus: f64,
    pub s_plus: f64,
    pub p_at_t_infinity: Extended,
    /// `Σ a_n^{t_∞}`.
    pub sum_at_t_infinity: Extended,
}

fn base_report(spec: &PartitionSpec, map_kind: MapKind, verdict: Verdict, criterion: String) -> PhaseReport {
    let c = spec.classify();
    let b = spectrum_bounds(spec);
    let p = pressure_at_t_infinity(spec).value;
    let sum = match p {
        Extended::Finite(x) => Extended::Finite(x.exp()),
        Extended::Infinite => Extended::Infinite,
    };
    PhaseReport {
        map_kind,
        verdict,
        transition: verdict == Verdict::Transition,
        criterion_used: criterion,
        type_class: c.type_class,
        rho: c.rho,
        t_infinity: t_infinity(spec),
        t_zero: t_zero(spec),
        r_plus: r_plus(spec),
        t_minus: b.t_minus,
        s_minus: b.s_minus,
        s_plus: b.s_plus,
        p_at_t_infinity: p,
        sum_at_t_infinity: sum,
    }
}

/// `r_+ = -(Σ n a_n)/(Σ a_n log a_n)`, infinite for infinite type.
fn r_plus(spec: &PartitionSpec) -> Extended {
    let num = spec.weighted_sum(1.0, 0.0, Weight::Affine(0.0)).value;
    let den = spec.weighted_sum(1.0, 0.0, Weight::LogAtom).value;
    match (num, den) {
        (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(-a / b),
        _ => Extended::Infinite,
    }
}

/// Verdict for the pressure of `L_α`.
///
/// Expanding tails never give a transition. For `t_n = ψ(n) n^{-θ}` with
/// `θ > 0` there is no transition iff `Σ ψ(n)^{1/(1+θ)} (log n)/n` diverges;
/// with `ψ(n) ≍ (log n)^{-k}` this is `k/(1+θ) ≤ 2`.
pub fn luroth_phase_report(spec: &PartitionSpec) -> PhaseReport {
    let (verdict, criterion) = match spec.classify().tail_kind {
        TailKind::Expanding { rho } => {
            (Verdict::NoTransition, format!("expanding tail (rho = {}): t_inf = 0, no transition", rho))
        }
        TailKind::Expansive { theta, psi } if theta > 0.0 => {
            let k = match psi {
                Psi::Constant { .. } => 0.0,
                Psi::LogPower { k, .. } => k,
            };
            let exponent = 1.0 - k / (1.0 + theta);
            let verdict = if exponent < -1.0 { Verdict::Transition } else { Verdict::NoTransition };
            let behaviour = if exponent < -1.0 { "converges" } else { "diverges" };
            (
                verdict,
                format!(
                    "expansive tail, theta = {}: sum of psi(n)^(1/(1+theta)) log(n)/n ~ sum (log n)^({})/n {}",
                    theta, exponent, behaviour
                ),
            )
        }
        TailKind::Expansive { .. } => (
            Verdict::Undetermined,
            "expansive tail with theta = 0: criterion needs sum a_n log a_n for t_n = psi(n), not evaluated".into(),
        ),
        TailKind::Other => (Verdict::Undetermined, "tail is neither expansive nor expanding".into()),
    };
    base_report(spec, MapKind::Luroth, verdict, criterion)
}

/// Verdict for the free energy of `F_α`: a transition iff the tail is
/// expansive and of finite type; never for expanding tails.
pub fn farey_phase_report(spec: &PartitionSpec) -> PhaseReport {
    let c = spec.classify();
    let (verdict, criterion) = match c.tail_kind {
        TailKind::Expanding { rho } => (Verdict::NoTransition, format!("expanding tail (rho = {}): no transition", rho)),
        TailKind::Expansive { .. } if c.is_finite_type() => {
            (Verdict::Transition, "expansive tail of finite type: v has a kink at u = 1, sigma = 1 on (0, 1/r_plus]".into())
        }
        TailKind::Expansive { .. } => {
            (Verdict::NoTransition, "expansive tail of infinite type: v is differentiable, no transition".into())
        }
        TailKind::Other => (Verdict::Undetermined, "tail is neither expansive nor expanding".into()),
    };
    base_report(spec, MapKind::Farey, verdict, criterion)
}

/// The two post-transition formulas for `τ_α(s)`: the boundary value of the
/// infimum `t_∞ + p(t_∞)/s`, and `Σ a_n^{t_∞}/s + t_∞`.
pub fn post_transition_values(spec: &PartitionSpec, s: f64) -> Option<(f64, f64)> {
    let t = t_infinity(spec);
    let p = pressure_at_t_infinity(spec).value.finite()?;
    let inf_formula = t + p / s;
    let sum_formula = p.exp() / s + t;
    if (inf_formula - sum_formula).abs() > 1e-12 {
        log::info!(
            "post-transition tau at s = {}: t_inf + p(t_inf)/s = {} differs from sum/s + t_inf = {}",
            s,
            inf_formula,
            sum_formula
        );
    }
    Some((inf_formula, sum_formula))
}
