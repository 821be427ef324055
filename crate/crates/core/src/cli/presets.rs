//! The six figure datasets: partition, grids and the expected phase
//! verdicts.

use serde::Serialize;

use crate::partition::{Family, PartitionSpec};
use crate::thermo::{linspace, spectrum_bounds, Verdict};

/// Sampling interval `[from, to]` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub from: f64,
    pub to: f64,
    pub count: usize,
}

impl Grid {
    pub const fn new(from: f64, to: f64, count: usize) -> Self {
        Self { from, to, count }
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.from, self.to, self.count)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigurePreset {
    pub name: &'static str,
    pub description: &'static str,
    #[serde(skip)]
    pub family: Family,
    /// Grid for `p` and `v`.
    pub u_grid: Grid,
    pub spectrum_samples: usize,
    /// Width of the `τ` grid above `t_-`.
    pub tau_span: f64,
    /// Upper end of the `σ` grid when `s_+` is large.
    pub sigma_cap: f64,
    /// Verdict for `L_α`; `None` when no verdict is asserted.
    pub expected_luroth: Option<Verdict>,
    /// Verdict for `F_α`; `None` when no verdict is asserted.
    pub expected_farey: Option<Verdict>,
}

impl FigurePreset {
    pub fn spec(&self) -> PartitionSpec {
        PartitionSpec::new(self.family.clone()).expect("preset families are valid")
    }

    /// `τ` grid on `[t_-, t_- + tau_span]`.
    pub fn tau_grid(&self, spec: &PartitionSpec) -> Grid {
        let t = spectrum_bounds(spec).t_minus;
        Grid::new(t, t + self.tau_span, self.spectrum_samples)
    }

    /// `σ` grid on `[s_-, min(s_+, sigma_cap)]`.
    pub fn sigma_grid(&self, spec: &PartitionSpec) -> Grid {
        let b = spectrum_bounds(spec);
        Grid::new(b.s_minus, b.s_plus.min(self.sigma_cap), self.spectrum_samples)
    }
}

const U_GRID: Grid = Grid::new(-1.0, 3.0, 201);

pub fn figure_presets() -> Vec<FigurePreset> {
    use Verdict::*;
    let preset = |name, description, family, luroth, farey| FigurePreset {
        name,
        description,
        family,
        u_grid: U_GRID,
        spectrum_samples: 101,
        tau_span: 4.0,
        sigma_cap: 4.0,
        expected_luroth: luroth,
        expected_farey: farey,
    };
    vec![
        preset(
            "fig1",
            "harmonic partition a_n = 1/(n(n+1)), alternating Lüroth system",
            Family::Harmonic,
            Some(NoTransition),
            Some(NoTransition),
        ),
        preset(
            "fig2",
            "a_n = n^-3 / zeta(3)",
            Family::PowerAtoms { s: 3.0 },
            Some(NoTransition),
            Some(Transition),
        ),
        preset(
            "fig3",
            "a_n proportional to n^-2 (log(n+5))^-12",
            Family::LogPowerAtoms { k: 12.0, shift: 5 },
            Some(Transition),
            None,
        ),
        preset(
            "fig4",
            "a_n proportional to n^-2 (log(n+5))^-4",
            Family::LogPowerAtoms { k: 4.0, shift: 5 },
            Some(NoTransition),
            None,
        ),
        preset(
            "fig5",
            "a_n = n^-5/4 / zeta(5/4)",
            Family::PowerAtoms { s: 1.25 },
            None,
            Some(NoTransition),
        ),
        preset(
            "fig6",
            "a_n = 2 * 3^-n, tent map with slopes 3 and -3/2",
            Family::geometric_exact(2, 1, 3),
            Some(NoTransition),
            Some(NoTransition),
        ),
    ]
}

pub fn figure_preset(name: &str) -> Option<FigurePreset> {
    figure_presets().into_iter().find(|p| p.name == name)
}

/// Partitions addressable by name on the command line: `harmonic`,
/// `dyadic` and the figure presets.
pub fn builtin_spec(name: &str) -> Option<PartitionSpec> {
    match name {
        "harmonic" => Some(PartitionSpec::harmonic()),
        "dyadic" => Some(PartitionSpec::dyadic()),
        _ => figure_preset(name).map(|p| p.spec()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::{farey_phase_report, luroth_phase_report};

    #[test]
    fn presets_match_expected_verdicts() {
        let presets = figure_presets();
        assert_eq!(presets.len(), 6);
        for p in &presets {
            let spec = p.spec();
            if let Some(v) = p.expected_luroth {
                assert_eq!(luroth_phase_report(&spec).verdict, v, "{}", p.name);
            }
            if let Some(v) = p.expected_farey {
                assert_eq!(farey_phase_report(&spec).verdict, v, "{}", p.name);
            }
        }
    }

    #[test]
    fn builtin_names() {
        assert!(builtin_spec("harmonic").is_some());
        assert!(builtin_spec("fig6").unwrap().is_exact());
        assert!(builtin_spec("fig7").is_none());
    }
}
