//! Exp-sinh (double exponential) quadrature on a half line.

use super::sum::NeumaierSum;

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

/// Approximates `∫_0^∞ g(y) dy` for `g` smooth on `(0, ∞)` with at most
/// algebraic singularity at 0 and algebraic or faster decay at infinity.
///
/// Uses the substitution `y = exp(π/2 · sinh t)` and trapezoidal sums that
/// halve the step until two consecutive levels agree to `rel_tol`.
/// Returns the estimate and the last level difference.
pub fn exp_sinh<G: Fn(f64) -> f64>(g: G, rel_tol: f64) -> (f64, f64) {
    let node = |t: f64| -> f64 {
        let s = HALF_PI * t.sinh();
        if s > 709.0 || s < -745.0 {
            return 0.0;
        }
        let y = s.exp();
        let w = HALF_PI * t.cosh() * y;
        if w == 0.0 {
            return 0.0;
        }
        let v = g(y) * w;
        if v.is_nan() {
            0.0
        } else {
            v
        }
    };

    let t_max = 4.5;
    let mut h = 0.5;
    let mut acc = NeumaierSum::new();
    acc.add(node(0.0));
    let mut k = 1;
    while (k as f64) * h <= t_max {
        let t = k as f64 * h;
        acc.add(node(t));
        acc.add(node(-t));
        k += 1;
    }
    let mut estimate = acc.value() * h;
    let mut err = f64::INFINITY;
    for _ in 0..9 {
        h *= 0.5;
        let mut fresh = NeumaierSum::new();
        let mut k = 1;
        while (k as f64) * h <= t_max {
            let t = k as f64 * h;
            fresh.add(node(t));
            fresh.add(node(-t));
            k += 2;
        }
        acc.merge(&fresh);
        let next = acc.value() * h;
        err = (next - estimate).abs();
        estimate = next;
        if err <= rel_tol * estimate.abs() {
            break;
        }
    }
    (estimate, err)
}
