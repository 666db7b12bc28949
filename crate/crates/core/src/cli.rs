//! Command-line front end: `rates`, `sweep`, `dynamics` and `validate`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics;
use crate::error::Error;
use crate::oracle::validation::{ValidationGrid, ValidationReport};
use crate::oracle::{run_validation, QuadratureParams};
use crate::params::{
    make_geometry, AtomParams, Boundary, GeometryConfig, InitialState, MirrorDistance, PolarizationAxis, RunConfig,
    UnitMode,
};
use crate::rates::{self, RateSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "twoatom", version, about = "Collective decay of two atoms near a mirror")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print γ₁₁, γ₁₂, Γ± (and optionally V) at one point.
    Rates(RatesArgs),
    /// Write one rate over an (R, Z) grid as CSV.
    Sweep(SweepArgs),
    /// Write the concurrence time series of an evolving state as CSV.
    Dynamics(DynamicsArgs),
    /// Check the closed forms against the numerical oracles.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct PointArgs {
    /// Dipole orientation.
    #[arg(long, value_parser = parse_pol)]
    pol: Option<PolarizationAxis>,
    /// Separation R = rω₀/c.
    #[arg(long = "R")]
    r: Option<f64>,
    /// Doubled mirror distance Z = 2z₀ω₀/c.
    #[arg(long = "Z", conflicts_with = "unbounded")]
    z: Option<f64>,
    /// No mirror.
    #[arg(long)]
    unbounded: bool,
    /// JSON run configuration; flags take precedence over its keys.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RatesArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Also print the dipole-dipole shift V.
    #[arg(long)]
    shift: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Quantity {
    Gamma11,
    Gamma12,
    GammaPlus,
    GammaMinus,
    VShift,
}

impl Quantity {
    fn name(self) -> &'static str {
        match self {
            Quantity::Gamma11 => "gamma11",
            Quantity::Gamma12 => "gamma12",
            Quantity::GammaPlus => "gamma_plus",
            Quantity::GammaMinus => "gamma_minus",
            Quantity::VShift => "v_shift",
        }
    }

    fn eval(self, pol: PolarizationAxis, g: &GeometryConfig) -> crate::Result<f64> {
        if self == Quantity::VShift {
            return rates::dipole_shift(pol, g.separation(), g.boundary());
        }
        let set = rates::collective_rates(pol, g)?;
        Ok(match self {
            Quantity::Gamma11 => set.gamma11(),
            Quantity::Gamma12 => set.gamma12(),
            Quantity::GammaPlus => set.gamma_plus(),
            Quantity::GammaMinus => set.gamma_minus(),
            Quantity::VShift => unreachable!(),
        })
    }
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_pol, default_value = "x")]
    pol: PolarizationAxis,
    #[arg(long, value_enum, default_value = "gamma_plus")]
    quantity: Quantity,
    /// Grid size as <R count>x<Z count>.
    #[arg(long, value_parser = parse_counts, default_value = "200x200")]
    grid: (usize, usize),
    #[arg(long, default_value_t = 0.05)]
    r_min: f64,
    #[arg(long, default_value_t = 20.0)]
    r_max: f64,
    #[arg(long, default_value_t = 0.05)]
    z_min: f64,
    #[arg(long, default_value_t = 20.0)]
    z_max: f64,
    /// Logarithmic spacing on both axes.
    #[arg(long)]
    log: bool,
    /// Append a mirror-free row after the Z values of every R.
    #[arg(long)]
    unbounded: bool,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StateKind {
    #[value(name = "psi+")]
    PsiPlus,
    #[value(name = "psi-")]
    PsiMinus,
    Custom,
}

#[derive(Debug, Args)]
struct DynamicsArgs {
    #[command(flatten)]
    point: PointArgs,
    #[arg(long, value_enum, default_value = "psi+")]
    state: StateKind,
    /// Amplitude of |e₁g₂⟩ for a custom state, as `re` or `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    c_eg: Option<Complex64>,
    /// Amplitude of |g₁e₂⟩ for a custom state, as `re` or `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    c_ge: Option<Complex64>,
    /// Final time in units of 1/γ₀.
    #[arg(long, default_value_t = 10.0)]
    tmax: f64,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Grid override as <R list>x<Z list>, e.g. `1,2,5x0.5,unbounded`.
    #[arg(long, value_parser = parse_value_grid)]
    grid: Option<(Vec<f64>, Vec<Boundary>)>,
    /// Restrict to one polarization.
    #[arg(long, value_parser = parse_pol)]
    pol: Option<PolarizationAxis>,
    /// Report file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_pol(s: &str) -> Result<PolarizationAxis, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_counts(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or("expected <R count>x<Z count>")?;
    let a: usize = a.trim().parse().map_err(|e| format!("R count: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("Z count: {e}"))?;
    Ok((a, b))
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let mut parts = s.split(',');
    let re: f64 = parts.next().unwrap_or("").trim().parse().map_err(|e| format!("{e}"))?;
    let im: f64 = match parts.next() {
        Some(p) => p.trim().parse().map_err(|e| format!("{e}"))?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err("expected `re` or `re,im`".into());
    }
    Ok(Complex64::new(re, im))
}

fn parse_value_grid(s: &str) -> Result<(Vec<f64>, Vec<Boundary>), String> {
    let (rs, zs) = s.split_once('x').ok_or("expected <R list>x<Z list>")?;
    let rs = rs
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("R value `{v}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let zs = zs
        .split(',')
        .map(|v| match v.trim() {
            "unbounded" => Ok(Boundary::Unbounded),
            t => t
                .parse::<f64>()
                .map(Boundary::Mirror)
                .map_err(|e| format!("Z value `{v}`: {e}")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((rs, zs))
}

/// A failure with the exit status it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonConvergence { .. } => EXIT_NONCONVERGENCE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn io_failure(path: Option<&Path>, e: io::Error) -> Failure {
    match path {
        Some(p) => usage(format!("cannot write {}: {e}", p.display())),
        None => usage(format!("write failed: {e}")),
    }
}

/// A fully resolved single-point request.
struct Point {
    pol: PolarizationAxis,
    geometry: GeometryConfig,
    atom: AtomParams,
}

fn resolve_point(args: &PointArgs) -> Result<Point, Failure> {
    let config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
            RunConfig::from_json_str(&text)?
        }
        None => RunConfig::default(),
    };
    let atom = config.atom_params()?;
    let unit = atom.length_unit();
    let pol = args.pol.or(config.polarization).unwrap_or(PolarizationAxis::X);

    // Flags are already dimensionless; config lengths go through the unit.
    let r = match (args.r, config.r) {
        (Some(r), _) => r,
        (None, Some(r)) => r / unit,
        (None, None) => return Err(usage("missing separation: pass --R or set `r` in the config")),
    };
    let boundary = if args.unbounded {
        Boundary::Unbounded
    } else if let Some(z) = args.z {
        Boundary::mirror(z)?
    } else {
        match config.z0 {
            Some(MirrorDistance::Unbounded) => Boundary::Unbounded,
            Some(MirrorDistance::Length(z0)) => make_geometry(1.0, Some(z0), &atom)?.boundary(),
            None => return Err(usage("missing mirror distance: pass --Z, --unbounded or set `z0` in the config")),
        }
    };
    let geometry = GeometryConfig::new(r, boundary)?;
    Ok(Point { pol, geometry, atom })
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| io_failure(Some(p), e))?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn cmd_rates(args: &RatesArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let p = resolve_point(&args.point)?;
    let set = if args.shift {
        rates::full_rates(p.pol, &p.geometry)?
    } else {
        rates::collective_rates(p.pol, &p.geometry)?
    };
    write_rates(out, &p, &set).map_err(|e| io_failure(None, e))
}

fn write_rates(out: &mut dyn Write, p: &Point, set: &RateSet) -> io::Result<()> {
    let g = &p.geometry;
    writeln!(out, "pol = {}", p.pol)?;
    writeln!(out, "R = {}", g.separation())?;
    writeln!(out, "Z = {}", g.boundary())?;
    let p11 = set.provenance_gamma11().name();
    let p12 = set.provenance_gamma12().name();
    let pj = set.provenance_gamma11().join(set.provenance_gamma12()).name();
    writeln!(out, "gamma11 = {:.16e} ({p11})", set.gamma11())?;
    writeln!(out, "gamma12 = {:.16e} ({p12})", set.gamma12())?;
    writeln!(out, "gamma_plus = {:.16e} ({pj})", set.gamma_plus())?;
    writeln!(out, "gamma_minus = {:.16e} ({pj})", set.gamma_minus())?;
    if let Some(v) = set.v_shift() {
        writeln!(out, "v_shift = {v:.16e} (closed-form)")?;
    }
    if p.atom.mode() == UnitMode::Physical {
        let g0 = p.atom.gamma0();
        let s = set.scaled(g0);
        writeln!(out, "gamma0 = {g0:.16e} s^-1")?;
        writeln!(out, "gamma11 = {:.16e} s^-1", s.gamma11())?;
        writeln!(out, "gamma12 = {:.16e} s^-1", s.gamma12())?;
        writeln!(out, "gamma_plus = {:.16e} s^-1", s.gamma_plus())?;
        writeln!(out, "gamma_minus = {:.16e} s^-1", s.gamma_minus())?;
        if let Some(v) = s.v_shift() {
            writeln!(out, "v_shift = {v:.16e} s^-1")?;
        }
    }
    Ok(())
}

fn axis(name: &'static str, min: f64, max: f64, count: usize, log: bool) -> Result<Vec<f64>, Failure> {
    if count < 2 {
        return Err(Error::invalid(name, count as f64, "grid needs at least two points per axis").into());
    }
    if !(min > 0.0 && min < max && max.is_finite()) {
        return Err(Error::invalid(name, min, "range needs 0 < min < max").into());
    }
    let n = (count - 1) as f64;
    Ok((0..count)
        .map(|k| {
            let f = k as f64 / n;
            if k + 1 == count {
                max
            } else if log {
                min * (max / min).powf(f)
            } else {
                min + (max - min) * f
            }
        })
        .collect())
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any f64.
fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn sweep_rows(args: &SweepArgs) -> Result<Vec<String>, Failure> {
    let (nr, nz) = args.grid;
    let rs = axis("R", args.r_min, args.r_max, nr, args.log)?;
    let mut zs: Vec<Boundary> = axis("Z", args.z_min, args.z_max, nz, args.log)?
        .into_iter()
        .map(Boundary::Mirror)
        .collect();
    if args.unbounded {
        zs.push(Boundary::Unbounded);
    }
    let rows: Vec<Result<String, Error>> = rs
        .par_iter()
        .map(|&r| {
            let mut block = String::new();
            for &b in &zs {
                let g = GeometryConfig::new(r, b)?;
                let v = args.quantity.eval(args.pol, &g)?;
                let z = match b {
                    Boundary::Mirror(z) => fmt_num(z),
                    Boundary::Unbounded => "unbounded".to_string(),
                };
                block.push_str(&format!(
                    "{},{},{},{},{}\n",
                    args.pol,
                    fmt_num(r),
                    z,
                    args.quantity.name(),
                    fmt_num(v)
                ));
            }
            Ok(block)
        })
        .collect();
    rows.into_iter().map(|r| r.map_err(Failure::from)).collect()
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let rows = sweep_rows(args)?;
    let mut out = open_output(&args.out)?;
    let write = |out: &mut dyn Write| -> io::Result<()> {
        writeln!(out, "pol,R,Z,quantity,value")?;
        for block in &rows {
            out.write_all(block.as_bytes())?;
        }
        out.flush()
    };
    write(&mut *out).map_err(|e| io_failure(args.out.as_deref(), e))
}

fn initial_state(args: &DynamicsArgs) -> Result<InitialState, Failure> {
    match args.state {
        StateKind::PsiPlus | StateKind::PsiMinus if args.c_eg.is_some() || args.c_ge.is_some() => {
            Err(usage("--c-eg and --c-ge are only used with --state custom"))
        }
        StateKind::PsiPlus => Ok(InitialState::psi_plus()),
        StateKind::PsiMinus => Ok(InitialState::psi_minus()),
        StateKind::Custom => {
            let (Some(a), Some(b)) = (args.c_eg, args.c_ge) else {
                return Err(usage("--state custom needs both --c-eg and --c-ge"));
            };
            Ok(InitialState::new(a, b)?)
        }
    }
}

fn cmd_dynamics(args: &DynamicsArgs) -> Result<(), Failure> {
    let p = resolve_point(&args.point)?;
    let initial = initial_state(args)?;
    let set = rates::full_rates(p.pol, &p.geometry)?;
    let grid = dynamics::uniform_grid(args.tmax, args.steps)?;
    let rows = dynamics::time_series(&initial, &set, &grid)?;
    let mut out = open_output(&args.out)?;
    dynamics::write_csv(&rows, &mut *out)
        .and_then(|_| out.flush())
        .map_err(|e| io_failure(args.out.as_deref(), e))
}

fn cmd_validate(args: &ValidateArgs, err: &mut dyn Write) -> Result<(), Failure> {
    let mut grid = ValidationGrid::default();
    if let Some((rs, zs)) = &args.grid {
        grid.separations = rs.clone();
        grid.boundaries = zs.clone();
    }
    if let Some(pol) = args.pol {
        grid.polarizations = vec![pol];
    }
    let report: ValidationReport = run_validation(&grid, &QuadratureParams::default())?;
    let mut out = open_output(&args.out)?;
    writeln!(out, "{}", report.to_json())
        .and_then(|_| out.flush())
        .map_err(|e| io_failure(args.out.as_deref(), e))?;
    let failures: Vec<_> = report.failures().collect();
    if failures.is_empty() {
        return Ok(());
    }
    for r in &failures {
        let _ = writeln!(
            err,
            "FAILED pol={} pair={} R={} Z={} abs_diff={:.3e} tolerance={:.0e}{}",
            r.pol,
            r.pair,
            r.r,
            r.z.0,
            r.abs_diff,
            r.tolerance,
            r.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
        );
    }
    let code = if report.all_converged() {
        EXIT_VALIDATION
    } else {
        EXIT_NONCONVERGENCE
    };
    Err(Failure {
        code,
        message: format!("{} of {} validation records failed", failures.len(), report.records.len()),
    })
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Rates(a) => cmd_rates(a, out),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Dynamics(a) => cmd_dynamics(a),
        Command::Validate(a) => cmd_validate(a, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_parse() {
        assert_eq!(parse_counts("200x150").unwrap(), (200, 150));
        assert!(parse_counts("200").is_err());
    }

    #[test]
    fn complex_parse() {
        assert_eq!(parse_complex("0.6").unwrap(), Complex64::new(0.6, 0.0));
        assert_eq!(parse_complex("-0.6,0.8").unwrap(), Complex64::new(-0.6, 0.8));
        assert!(parse_complex("1,2,3").is_err());
    }

    #[test]
    fn value_grid_parse() {
        let (r, z) = parse_value_grid("1,2x0.5,unbounded").unwrap();
        assert_eq!(r, vec![1.0, 2.0]);
        assert_eq!(z, vec![Boundary::Mirror(0.5), Boundary::Unbounded]);
    }

    #[test]
    fn axis_endpoints_exact() {
        let a = axis("R", 0.05, 20.0, 7, true).unwrap();
        assert_eq!(a[0], 0.05);
        assert_eq!(a[6], 20.0);
        assert!(axis("R", 1.0, 1.0, 3, false).is_err());
        assert!(axis("R", 0.1, 1.0, 1, false).is_err());
    }

    #[test]
    fn rates_output_names_provenance() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(["twoatom", "rates", "--pol", "x", "--R", "10", "--Z", "0.005"], &mut out, &mut err);
        assert_eq!(code, 0);
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("gamma11 = ") && text.contains("(series)"));
    }
}
