//! The `alpha-dyn` command-line front end.
//!
//! Exit codes: 0 on success, 2 on a domain or usage error, 3 when the
//! partition spec cannot be read or parsed.

pub mod output;
pub mod presets;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::conjugacy::{theta_exact, theta_f64};
use crate::dynamics::{expand, expand_exact, farey_code, parse_point};
use crate::ergodic::sample_digits;
use crate::error::{Error, Result};
use crate::numeric::format::format_rational;
use crate::partition::specfile::parse_spec;
use crate::partition::PartitionSpec;
use crate::renewal::renewal_sequence;
use crate::thermo::{
    farey_phase_report, free_energy_curve, linspace, luroth_phase_report, pressure_curve, sigma_spectrum,
    spectrum_bounds, t_infinity, t_minus, tau_spectrum, CurveTable,
};

use presets::{builtin_spec, figure_preset, FigurePreset};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_SPEC: i32 = 3;

pub const THREADS_ENV: &str = "ALPHA_DYN_THREADS";

#[derive(Debug, Parser)]
#[command(name = "alpha-dyn", version, about = "alpha-Farey and alpha-Lüroth maps: expansions, renewal sequences, pressure and spectra")]
pub struct Cli {
    /// Write results to this file (for `figure`, this directory) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExpandEmit {
    Digits,
    FareyCode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectrumKind {
    Tau,
    Sigma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapArg {
    Luroth,
    Farey,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classification and boundary data of a partition.
    Info {
        /// Spec file, or one of: harmonic, dyadic, fig1 … fig6.
        #[arg(long)]
        spec: String,
    },
    /// α-Lüroth digits of a point.
    Expand {
        #[arg(long)]
        spec: String,
        /// `p/q`, an integer or a decimal.
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 30)]
        max_digits: usize,
        #[arg(long, value_enum, default_value_t = ExpandEmit::Digits)]
        emit: ExpandEmit,
        /// Longest Farey code printed with `--emit farey-code`.
        #[arg(long, default_value_t = 64)]
        max_bits: usize,
    },
    /// The conjugacy θ_α at a point.
    Theta {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 1e-12)]
        eps: f64,
    },
    /// Sum-level renewal sequence w_1 … w_n.
    Renewal {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Emit::Csv)]
        emit: Emit,
    },
    /// Lüroth pressure p(u) on a grid.
    Pressure {
        #[arg(long)]
        spec: String,
        #[command(flatten)]
        grid: UGrid,
        #[arg(long, value_enum, default_value_t = Emit::Csv)]
        emit: Emit,
    },
    /// Farey free energy v(u) on a grid.
    FreeEnergy {
        #[arg(long)]
        spec: String,
        #[command(flatten)]
        grid: UGrid,
        #[arg(long, value_enum, default_value_t = Emit::Csv)]
        emit: Emit,
    },
    /// Lyapunov spectrum τ (Lüroth) or σ (Farey).
    Spectrum {
        #[arg(long)]
        spec: String,
        #[arg(long, value_enum)]
        kind: SpectrumKind,
        /// Defaults to t_- for τ and s_- for σ.
        #[arg(long, allow_negative_numbers = true)]
        s_from: Option<f64>,
        /// Defaults to t_- + 4 for τ and s_+ (at most 4) for σ.
        #[arg(long, allow_negative_numbers = true)]
        s_to: Option<f64>,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Emit::Csv)]
        emit: Emit,
    },
    /// Phase-transition report; both maps unless `--map` is given.
    Phase {
        #[arg(long)]
        spec: String,
        #[arg(long, value_enum)]
        map: Option<MapArg>,
    },
    /// Monte Carlo Birkhoff averages along a random orbit.
    Simulate {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 1_000_000)]
        steps: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Emit::Csv)]
        emit: Emit,
    },
    /// Writes the p, v, τ and σ tables and the phase reports of a figure preset.
    Figure {
        /// fig1 … fig6.
        name: String,
    },
}

#[derive(Debug, Clone, Copy, clap::Args)]
pub struct UGrid {
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub u_from: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub u_to: f64,
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
}

fn check_grid(from: f64, to: f64, samples: usize, from_name: &str, to_name: &str) -> Result<()> {
    if !from.is_finite() {
        return Err(Error::domain(format!("{}: must be finite", from_name)));
    }
    if !to.is_finite() {
        return Err(Error::domain(format!("{}: must be finite", to_name)));
    }
    if from > to {
        return Err(Error::domain(format!("{}: must not exceed {}", from_name, to_name)));
    }
    if samples == 0 {
        return Err(Error::domain("--samples: must be at least 1"));
    }
    Ok(())
}

/// Reads `--spec` as a file path, falling back to a builtin name.
pub fn load_spec(arg: &str) -> Result<PartitionSpec> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Error::spec("--spec", format!("{}: {}", arg, e)))?;
        return parse_spec(&text);
    }
    builtin_spec(arg).ok_or_else(|| {
        Error::spec("--spec", format!("`{}` is neither a readable file nor a builtin (harmonic, dyadic, fig1 … fig6)", arg))
    })
}

fn configure_threads() {
    let Ok(v) = std::env::var(THREADS_ENV) else { return };
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
                log::warn!("{}: thread pool already initialised", THREADS_ENV);
            }
        }
        _ => log::warn!("{}: ignoring `{}`, expected a positive integer", THREADS_ENV, v),
    }
}

fn emit_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::domain(format!("--out {}: {}", p.display(), e))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Error::domain(format!("stdout: {}", e)))
        }
    }
}

fn to_json(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn curve_text(table: &CurveTable, emit: Emit) -> String {
    match emit {
        Emit::Csv => output::curve_csv(table),
        Emit::Json => to_json(table),
    }
}

fn info(spec: &PartitionSpec) -> serde_json::Value {
    json!({
        "spec": spec.family().to_json(),
        "exact": spec.is_exact(),
        "normalization": spec.normalization(),
        "classification": spec.classify(),
        "total_tail_sum": spec.total_tail_sum().value,
        "t_infinity": t_infinity(spec),
        "t_minus": t_minus(spec),
        "spectrum_bounds": spectrum_bounds(spec),
    })
}

fn phase_json(spec: &PartitionSpec, map: Option<MapArg>) -> serde_json::Value {
    match map {
        Some(MapArg::Luroth) => json!(luroth_phase_report(spec)),
        Some(MapArg::Farey) => json!(farey_phase_report(spec)),
        None => json!({ "luroth": luroth_phase_report(spec), "farey": farey_phase_report(spec) }),
    }
}

/// Files written by `figure`.
pub fn write_figure(preset: &FigurePreset, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::domain(format!("--out {}: {}", dir.display(), e)))?;
    let spec = preset.spec();
    let u = preset.u_grid.points();
    let tau_grid = preset.tau_grid(&spec).points();
    let sigma_grid = preset.sigma_grid(&spec).points();
    let luroth = luroth_phase_report(&spec);
    let farey = farey_phase_report(&spec);
    let matches = preset.expected_luroth.is_none_or(|v| v == luroth.verdict)
        && preset.expected_farey.is_none_or(|v| v == farey.verdict);
    let files = [
        ("pressure.csv", output::curve_csv(&pressure_curve(&spec, &u))),
        ("free_energy.csv", output::curve_csv(&free_energy_curve(&spec, &u))),
        ("tau.csv", output::curve_csv(&tau_spectrum(&spec, &tau_grid))),
        ("sigma.csv", output::curve_csv(&sigma_spectrum(&spec, &sigma_grid))),
        (
            "phase.json",
            to_json(&json!({
                "preset": preset,
                "spec": spec.family().to_json(),
                "luroth": luroth,
                "farey": farey,
                "matches_expected": matches,
            })),
        ),
    ];
    let mut written = Vec::new();
    for (suffix, text) in files {
        let path = dir.join(format!("{}_{}", preset.name, suffix));
        fs::write(&path, text).map_err(|e| Error::domain(format!("{}: {}", path.display(), e)))?;
        written.push(path);
    }
    Ok(written)
}

fn parse_x(text: &str) -> Result<(Option<num_rational::BigRational>, f64)> {
    if let Some(q) = parse_point(text) {
        let f = crate::partition::rational_to_f64(&q);
        return Ok((Some(q), f));
    }
    text.trim()
        .parse::<f64>()
        .map(|f| (None, f))
        .map_err(|_| Error::domain(format!("--x: cannot parse `{}` as a rational or decimal", text)))
}

fn execute(cli: Cli) -> Result<()> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Info { spec } => emit_text(out, &to_json(&info(&load_spec(&spec)?))),
        Command::Expand { spec, x, max_digits, emit, max_bits } => {
            let spec = load_spec(&spec)?;
            let (q, f) = parse_x(&x)?;
            let word = match q {
                Some(q) if spec.is_exact() => expand_exact(&spec, &q, max_digits)?,
                _ => expand(&spec, f, max_digits)?,
            };
            let line = match emit {
                ExpandEmit::Digits => word.to_string(),
                ExpandEmit::FareyCode => farey_code(&word, max_bits).to_string(),
            };
            emit_text(out, &format!("{}\n", line))
        }
        Command::Theta { spec, x, eps } => {
            let spec = load_spec(&spec)?;
            if !(eps > 0.0) {
                return Err(Error::domain("--eps: must be positive"));
            }
            let (q, f) = parse_x(&x)?;
            let t = match q {
                Some(q) if spec.is_exact() => theta_exact(&spec, &q, eps)?,
                _ => theta_f64(&spec, f, eps)?,
            };
            let exact = (t.error_bound == 0.0).then(|| format_rational(&t.exact));
            emit_text(
                out,
                &to_json(&json!({
                    "x": x,
                    "theta": t.value,
                    "theta_exact": exact,
                    "error_bound": t.error_bound,
                    "digits_used": t.digits_used,
                })),
            )
        }
        Command::Renewal { spec, n, emit } => {
            let spec = load_spec(&spec)?;
            if n == 0 {
                return Err(Error::domain("--n: must be at least 1"));
            }
            let seq = renewal_sequence(&spec, n)?;
            let text = match emit {
                Emit::Csv => output::renewal_csv(&spec, &seq),
                Emit::Json => to_json(&json!({
                    "backend": seq.backend,
                    "switch_point": seq.switch_point,
                    "w": &seq.values[1..],
                })),
            };
            emit_text(out, &text)
        }
        Command::Pressure { spec, grid, emit } => {
            let spec = load_spec(&spec)?;
            check_grid(grid.u_from, grid.u_to, grid.samples, "--u-from", "--u-to")?;
            let t = pressure_curve(&spec, &linspace(grid.u_from, grid.u_to, grid.samples));
            emit_text(out, &curve_text(&t, emit))
        }
        Command::FreeEnergy { spec, grid, emit } => {
            let spec = load_spec(&spec)?;
            check_grid(grid.u_from, grid.u_to, grid.samples, "--u-from", "--u-to")?;
            let t = free_energy_curve(&spec, &linspace(grid.u_from, grid.u_to, grid.samples));
            emit_text(out, &curve_text(&t, emit))
        }
        Command::Spectrum { spec, kind, s_from, s_to, samples, emit } => {
            let spec = load_spec(&spec)?;
            let b = spectrum_bounds(&spec);
            let (lo, hi) = match kind {
                SpectrumKind::Tau => (b.t_minus, b.t_minus + 4.0),
                SpectrumKind::Sigma => (b.s_minus, b.s_plus.min(4.0)),
            };
            let (from, to) = (s_from.unwrap_or(lo), s_to.unwrap_or(hi));
            check_grid(from, to, samples, "--s-from", "--s-to")?;
            if from <= 0.0 {
                return Err(Error::domain("--s-from: Lyapunov exponents are positive"));
            }
            let grid = linspace(from, to, samples);
            let t = match kind {
                SpectrumKind::Tau => tau_spectrum(&spec, &grid),
                SpectrumKind::Sigma => sigma_spectrum(&spec, &grid),
            };
            emit_text(out, &curve_text(&t, emit))
        }
        Command::Phase { spec, map } => emit_text(out, &to_json(&phase_json(&load_spec(&spec)?, map))),
        Command::Simulate { spec, steps, seed, emit } => {
            let spec = load_spec(&spec)?;
            if steps == 0 {
                return Err(Error::domain("--steps: must be at least 1"));
            }
            let stats = sample_digits(&spec, steps, seed)?;
            let text = match emit {
                Emit::Csv => output::simulate_csv(&stats),
                Emit::Json => to_json(&json!({ "seed": seed, "n_steps": steps, "decades": stats.decades })),
            };
            emit_text(out, &text)
        }
        Command::Figure { name } => {
            let preset = figure_preset(&name)
                .ok_or_else(|| Error::domain(format!("figure: unknown preset `{}` (fig1 … fig6)", name)))?;
            let dir = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
            let written = write_figure(&preset, &dir)?;
            let list: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{}", list.join("\n")).map_err(|e| Error::domain(format!("stdout: {}", e)))
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SpecParse { .. } | Error::InvalidPartition(_) => EXIT_SPEC,
        _ => EXIT_DOMAIN,
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_DOMAIN } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("alpha-dyn: {}", e);
            exit_code(&e)
        }
    }
}
