//! Continuous extensions of `log a_n` used by the series engine.

/// Asymptotic shape of the atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AtomAsymptotics {
    /// `a_n ≍ n^{-beta} (log n)^{-gamma}`.
    Power { beta: f64, gamma: f64 },
    /// `a_n ≍ ρ^{-n}`.
    Geometric { ln_rho: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Law {
    Harmonic,
    Geometric { ln_r: f64, ln_1mr: f64 },
    PowerAtoms { s: f64, ln_c: f64 },
    PowerTail { theta: f64 },
    LogPower { k: f64, shift: f64, ln_c: f64 },
}

impl Law {
    /// `log a(x)` for real `x ≥ 1`.
    pub fn la(&self, x: f64) -> f64 {
        match *self {
            Law::Harmonic => -(x.ln() + (x + 1.0).ln()),
            Law::Geometric { ln_r, ln_1mr } => ln_1mr + (x - 1.0) * ln_r,
            Law::PowerAtoms { s, ln_c } => -s * x.ln() - ln_c,
            Law::PowerTail { theta } => {
                -theta * x.ln() + (-(-theta * (1.0 / x).ln_1p()).exp_m1()).ln()
            }
            Law::LogPower { k, shift, ln_c } => -2.0 * x.ln() - k * (x + shift).ln().ln() - ln_c,
        }
    }

    /// `log a(e^{ly}) = -β·ly + rest`, split so that the power part cancels
    /// exactly against other multiples of `ly` for arbitrarily large `ly`.
    pub fn la_split(&self, ly: f64) -> (f64, f64) {
        if ly < 600.0 {
            return (0.0, self.la(ly.exp()));
        }
        let inv = (-ly).exp();
        match *self {
            Law::Harmonic => (2.0, -inv.ln_1p()),
            Law::Geometric { .. } => (0.0, f64::NEG_INFINITY),
            Law::PowerAtoms { s, ln_c } => (s, -ln_c),
            Law::PowerTail { theta } => (theta + 1.0, theta.ln() + (-(theta + 1.0) * inv / 2.0).ln_1p()),
            Law::LogPower { k, shift, ln_c } => (2.0, -k * (ly + (shift * inv).ln_1p()).ln() - ln_c),
        }
    }

    /// Derivative of [`Law::la`].
    pub fn dla(&self, x: f64) -> f64 {
        match *self {
            Law::Harmonic => -1.0 / x - 1.0 / (x + 1.0),
            Law::Geometric { ln_r, .. } => ln_r,
            Law::PowerAtoms { s, .. } => -s / x,
            Law::PowerTail { theta } => {
                let g = -(-theta * (1.0 / x).ln_1p()).exp_m1();
                -theta / x - theta * (1.0 - g) / (g * x * (x + 1.0))
            }
            Law::LogPower { k, shift, .. } => {
                let y = x + shift;
                -2.0 / x - k / (y * y.ln())
            }
        }
    }

    pub fn asymptotics(&self) -> AtomAsymptotics {
        match *self {
            Law::Harmonic => AtomAsymptotics::Power { beta: 2.0, gamma: 0.0 },
            Law::Geometric { ln_r, .. } => AtomAsymptotics::Geometric { ln_rho: -ln_r },
            Law::PowerAtoms { s, .. } => AtomAsymptotics::Power { beta: s, gamma: 0.0 },
            Law::PowerTail { theta } => AtomAsymptotics::Power { beta: 1.0 + theta, gamma: 0.0 },
            Law::LogPower { k, .. } => AtomAsymptotics::Power { beta: 2.0, gamma: k },
        }
    }
}
