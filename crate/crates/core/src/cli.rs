//! The `casimir-kit` command line.
//!
//! Every single-point command prints one JSON record with the inputs echoed
//! under `inputs`, the value, its error estimate and a convergence flag.
//! Sweeps print CSV (`x,value,err_est,converged`) or JSON.
//!
//! Natural units are the default. Lengths are then in any unit the caller
//! likes, with `hbar = c = 1`. With `--units si`, lengths are in nm, areas in
//! µm², plasma frequencies in rad/s, and results come back in N, J or rad/s.
//! For atoms the natural length unit is `lambda_A` of the first atom.
//!
//! Exit status: 0 on success, 2 for bad arguments or input files, 3 when a
//! result did not reach the requested tolerance (the value is still printed),
//! 1 for any other failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::io::{parse_atom_table, parse_cavity, CavityInputs};
use crate::lifshitz::{
    casimir_energy, casimir_energy_ideal, casimir_force, casimir_force_ideal, eta_e, eta_f, sphere_plane_force,
};
use crate::model::{AtomModel, CavityConfig, Scale, SphereConfig, UnitConvert, UnitSystem};
use crate::optics::{brewster_frequency, plasmon_frequency};
use crate::plasmon::{
    alpha_coefficient, coupled_plasmon_frequencies, plasmon_series_sum, plasmon_shift_energy,
    short_distance_energy_series, SeriesTruncation,
};
use crate::polder::{cp_energy, cp_retarded, eta_cp_pair, london_energy, london_sum};
use crate::quadrature::{QuadResult, QuadratureSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNCONVERGED: i32 = 3;

/// Environment variable capping the number of sweep worker threads.
pub const THREADS_ENV: &str = "CASIMIR_KIT_THREADS";

const NM: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(
    name = "casimir-kit",
    version,
    about = "Casimir forces between plasma mirrors and Casimir-Polder forces between atoms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Force between two plane mirrors (positive = attractive).
    Force(CavityCommand),
    /// Energy between two plane mirrors.
    Energy(CavityCommand),
    /// Force and energy reduction factors relative to perfect mirrors.
    Eta(CavityCommand),
    /// Sphere-plane force in the proximity-force approximation.
    SpherePlane(SphereCommand),
    /// Casimir-Polder energy of two atoms.
    Cp(AtomCommand),
    /// London (non-retarded) energy of two atoms, by quadrature and closed form.
    London(AtomCommand),
    /// Short-distance slope of the force reduction factor.
    Alpha(AlphaCommand),
    /// Surface plasmon and Brewster frequencies, coupled plasmons across a gap.
    Plasmon(PlasmonCommand),
    /// Evaluate a quantity on a grid of points.
    Sweep(SweepCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Units {
    Natural,
    Si,
}

impl From<Units> for UnitSystem {
    fn from(u: Units) -> Self {
        match u {
            Units::Natural => UnitSystem::Natural,
            Units::Si => UnitSystem::Si,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Common {
    /// Relative tolerance of the quadratures.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Unit system of inputs and outputs [default: natural, or that of --config].
    #[arg(long, value_enum)]
    units: Option<Units>,
    #[arg(long, value_enum, default_value = "json")]
    output: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CavityArgs {
    /// Mirror separation.
    #[arg(long = "L")]
    separation: Option<f64>,
    /// Mirror area.
    #[arg(long = "A")]
    area: Option<f64>,
    /// Plasma wavelength.
    #[arg(long = "lambda-p", conflicts_with = "omega_p")]
    lambda_p: Option<f64>,
    /// Plasma frequency.
    #[arg(long = "omega-p")]
    omega_p: Option<f64>,
    /// Separation in units of the plasma wavelength.
    #[arg(long = "L-over-lambdap", conflicts_with = "separation")]
    reduced: Option<f64>,
    /// Cavity file (TOML, or a JSON record printed by this tool).
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CavityCommand {
    #[command(flatten)]
    cavity: CavityArgs,
    /// Perfectly reflecting mirrors.
    #[arg(long)]
    ideal: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SphereCommand {
    #[command(flatten)]
    cavity: CavityArgs,
    /// Sphere radius; --L is the closest approach.
    #[arg(long)]
    radius: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct AtomCommand {
    /// Atom table; give twice for two different atoms.
    #[arg(long = "atom-file", required = true)]
    atom_files: Vec<PathBuf>,
    /// Distance between the atoms.
    #[arg(long = "L")]
    separation: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct AlphaCommand {
    /// Sum exactly this many terms instead of stopping on --tail-tol.
    #[arg(long)]
    terms: Option<usize>,
    #[arg(long, default_value_t = 1e-14)]
    tail_tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    output: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PlasmonCommand {
    #[command(flatten)]
    cavity: CavityArgs,
    /// Transverse wavevector in units of omega_p / c.
    #[arg(long)]
    k: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Quantity {
    EtaF,
    EtaE,
    Force,
    Energy,
    PlasmonDispersion,
    EtaCp,
}

impl Quantity {
    fn name(self) -> &'static str {
        match self {
            Quantity::EtaF => "eta_f",
            Quantity::EtaE => "eta_e",
            Quantity::Force => "force",
            Quantity::Energy => "energy",
            Quantity::PlasmonDispersion => "plasmon_dispersion",
            Quantity::EtaCp => "eta_cp",
        }
    }

    fn axis(self) -> &'static str {
        match self {
            Quantity::PlasmonDispersion => "k c / omega_p",
            Quantity::EtaCp => "L / lambda_A",
            _ => "L / lambda_P",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Spacing {
    Linear,
    Log,
}

#[derive(Args, Debug)]
struct SweepCommand {
    #[arg(long, value_enum)]
    quantity: Quantity,
    #[arg(long)]
    min: f64,
    #[arg(long)]
    max: f64,
    #[arg(long, default_value_t = 50)]
    count: usize,
    #[arg(long, value_enum, default_value = "log")]
    spacing: Spacing,
    #[command(flatten)]
    cavity: CavityArgs,
    /// Atom table for eta-cp.
    #[arg(long = "atom-file")]
    atom_file: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invalid { .. } | Error::Parse(_) | Error::NonIdenticalMirrors(_) => Failure::Usage(e.to_string()),
            other => Failure::Compute(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// One row of tabular output.
#[derive(Debug, Clone, Copy)]
struct Point {
    x: f64,
    value: f64,
    err: f64,
    converged: bool,
}

impl Point {
    fn csv_row(&self) -> String {
        format!("{:.12e},{:.12e},{:.12e},{}", self.x, self.value, self.err, self.converged)
    }
}

/// A finished single-point computation.
struct Report {
    record: Map<String, Value>,
    point: Point,
}

impl Report {
    fn new(command: &str, units: Option<UnitSystem>, inputs: Value, point: Point) -> Self {
        let mut record = Map::new();
        record.insert("command".into(), json!(command));
        if let Some(units) = units {
            record.insert("units".into(), json!(units));
        }
        record.insert("inputs".into(), inputs);
        record.insert("value".into(), json!(point.value));
        record.insert("error_estimate".into(), json!(point.err));
        record.insert("converged".into(), json!(point.converged));
        Report { record, point }
    }

    fn with(mut self, key: &str, value: Value) -> Self {
        self.record.insert(key.into(), value);
        self
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Force(c) => emit(force(&c)?, c.common.output, c.common.out.as_deref(), stdout),
        Command::Energy(c) => emit(energy(&c)?, c.common.output, c.common.out.as_deref(), stdout),
        Command::Eta(c) => emit(eta(&c)?, c.common.output, c.common.out.as_deref(), stdout),
        Command::SpherePlane(c) => emit(sphere(&c)?, c.common.output, c.common.out.as_deref(), stdout),
        Command::Cp(c) => emit(cp(&c)?, c.common.output, c.common.out.as_deref(), stdout),
        Command::London(c) => emit(london(&c)?, c.common.output, c.common.out.as_deref(), stdout),
        Command::Alpha(c) => emit(alpha(&c)?, c.output, c.out.as_deref(), stdout),
        Command::Plasmon(c) => emit(plasmon(&c)?, c.common.output, c.common.out.as_deref(), stdout),
        Command::Sweep(c) => sweep(&c, stdout),
    }
}

fn write_text(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Compute(e.to_string())),
    }
}

fn emit(report: Report, format: Format, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<i32> {
    let text = match format {
        Format::Json => format!("{}\n", Value::Object(report.record)),
        Format::Csv => format!("x,value,err_est,converged\n{}\n", report.point.csv_row()),
    };
    write_text(&text, out, stdout)?;
    Ok(if report.point.converged { EXIT_OK } else { EXIT_UNCONVERGED })
}

fn spec_from(common: &Common) -> CliResult<QuadratureSpec> {
    let spec = QuadratureSpec::with_rel_tol(common.tol);
    spec.validate()?;
    Ok(spec)
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Config file overlaid with command-line flags, and the unit system they
/// are expressed in.
fn cavity_inputs(args: &CavityArgs, units: Option<Units>) -> CliResult<(CavityInputs, UnitSystem)> {
    let mut inputs = match &args.config {
        Some(path) => parse_cavity(&read_file(path)?)?,
        None => CavityInputs::default(),
    };
    let from_file = inputs.units()?;
    let units = match (units.map(UnitSystem::from), from_file) {
        (Some(a), Some(b)) if a != b => {
            return Err(Failure::Usage("--units does not match the units of the config file".into()))
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => UnitSystem::Natural,
    };
    let (lambda_p, omega_p, separation, area) = match units {
        UnitSystem::Si => (
            &mut inputs.lambda_p_nm,
            &mut inputs.omega_p_rad_s,
            &mut inputs.separation_nm,
            &mut inputs.area_um2,
        ),
        UnitSystem::Natural => (
            &mut inputs.lambda_p,
            &mut inputs.omega_p,
            &mut inputs.separation,
            &mut inputs.area,
        ),
    };
    if args.lambda_p.is_some() {
        *lambda_p = args.lambda_p;
        *omega_p = None;
    }
    if args.omega_p.is_some() {
        *omega_p = args.omega_p;
        *lambda_p = None;
    }
    if args.separation.is_some() {
        *separation = args.separation;
    }
    if args.area.is_some() {
        *area = args.area;
    }
    if let Some(reduced) = args.reduced {
        let mirror = inputs.mirror(units)?;
        let lp = match units {
            UnitSystem::Si => mirror.lambda_p(UnitSystem::Si) / NM,
            UnitSystem::Natural => mirror.lambda_p(UnitSystem::Natural),
        };
        match units {
            UnitSystem::Si => inputs.separation_nm = Some(reduced * lp),
            UnitSystem::Natural => inputs.separation = Some(reduced * lp),
        }
    }
    Ok((inputs, units))
}

/// Natural-unit cavity plus everything needed to report back.
struct Resolved {
    inputs: CavityInputs,
    units: UnitSystem,
    cavity: CavityConfig,
    scale: Scale,
}

fn resolve(args: &CavityArgs, units: Option<Units>) -> CliResult<Resolved> {
    let (inputs, units) = cavity_inputs(args, units)?;
    let (cavity, scale) = inputs.cavity(units)?.to_natural(units)?;
    Ok(Resolved {
        inputs,
        units,
        cavity,
        scale,
    })
}

impl Resolved {
    fn inputs_json(&self) -> Value {
        serde_json::to_value(&self.inputs).expect("plain numbers")
    }

    fn force(&self, f: f64) -> f64 {
        match self.units {
            UnitSystem::Si => self.scale.force_to_si(f),
            UnitSystem::Natural => f,
        }
    }

    fn pressure(&self, p: f64) -> f64 {
        match self.units {
            UnitSystem::Si => self.scale.pressure_to_si(p),
            UnitSystem::Natural => p,
        }
    }

    fn energy(&self, e: f64) -> f64 {
        match self.units {
            UnitSystem::Si => self.scale.energy_to_si(e),
            UnitSystem::Natural => e,
        }
    }

    fn energy_density(&self, e: f64) -> f64 {
        match self.units {
            UnitSystem::Si => self.scale.energy_to_si(e) / self.scale.area_to_si(1.0),
            UnitSystem::Natural => e,
        }
    }

    fn frequency(&self, w: f64) -> f64 {
        match self.units {
            UnitSystem::Si => self.scale.frequency_to_si(w),
            UnitSystem::Natural => w,
        }
    }

    fn reduced(&self) -> f64 {
        self.cavity.reduced_distance(UnitSystem::Natural)
    }

    fn warnings(&self) -> Value {
        let mut w = Vec::new();
        if self.cavity.small_area() {
            w.push("area smaller than L^2");
        }
        json!(w)
    }
}

fn force(c: &CavityCommand) -> CliResult<Report> {
    let r = resolve(&c.cavity, c.common.units)?;
    let spec = spec_from(&c.common)?;
    let ideal = casimir_force_ideal(&r.cavity);
    let result = if c.ideal {
        ideal
    } else {
        casimir_force(&r.cavity, &spec)?
    };
    let area = r.cavity.area();
    let point = Point {
        x: r.reduced(),
        value: r.force(result.force),
        err: r.force(result.quad.error_estimate * area),
        converged: result.quad.converged,
    };
    let split = result.by_polarization.map(|s| json!({"te": r.force(s.te * area), "tm": r.force(s.tm * area)}));
    Ok(Report::new("force", Some(r.units), r.inputs_json(), point)
        .with("ideal", json!(c.ideal))
        .with("per_unit_area", json!(r.pressure(result.per_unit_area)))
        .with("by_polarization", json!(split))
        .with("eta_f", json!(result.per_unit_area / ideal.per_unit_area))
        .with("reduced_distance", json!(r.reduced()))
        .with("evaluations", json!(result.quad.evaluations))
        .with("warnings", r.warnings()))
}

fn energy(c: &CavityCommand) -> CliResult<Report> {
    let r = resolve(&c.cavity, c.common.units)?;
    let spec = spec_from(&c.common)?;
    let ideal = casimir_energy_ideal(&r.cavity);
    let result = if c.ideal {
        ideal
    } else {
        casimir_energy(&r.cavity, &spec)?
    };
    let area = r.cavity.area();
    let point = Point {
        x: r.reduced(),
        value: r.energy(result.energy),
        err: r.energy(result.quad.error_estimate * area),
        converged: result.quad.converged,
    };
    let split = result
        .by_polarization
        .map(|s| json!({"te": r.energy(s.te * area), "tm": r.energy(s.tm * area)}));
    Ok(Report::new("energy", Some(r.units), r.inputs_json(), point)
        .with("ideal", json!(c.ideal))
        .with("per_unit_area", json!(r.energy_density(result.per_unit_area)))
        .with("by_polarization", json!(split))
        .with("eta_e", json!(result.per_unit_area / ideal.per_unit_area))
        .with("reduced_distance", json!(r.reduced()))
        .with("evaluations", json!(result.quad.evaluations))
        .with("warnings", r.warnings()))
}

fn eta(c: &CavityCommand) -> CliResult<Report> {
    let r = resolve(&c.cavity, c.common.units)?;
    let spec = spec_from(&c.common)?;
    let cavity = if c.ideal {
        r.cavity.with_perfect_reflection()
    } else {
        r.cavity
    };
    let f = eta_f(&cavity, &spec)?;
    let e = eta_e(&cavity, &spec)?;
    let point = Point {
        x: r.reduced(),
        value: f.value,
        err: f.error_estimate,
        converged: f.converged && e.converged,
    };
    Ok(Report::new("eta", Some(r.units), r.inputs_json(), point)
        .with("eta_f", json!(f.value))
        .with("eta_e", json!(e.value))
        .with("eta_e_error_estimate", json!(e.error_estimate))
        .with("reduced_distance", json!(r.reduced())))
}

fn sphere(c: &SphereCommand) -> CliResult<Report> {
    let r = resolve(&c.cavity, c.common.units)?;
    let spec = spec_from(&c.common)?;
    let radius = match r.units {
        UnitSystem::Si => r.scale.length_to_natural(c.radius * NM),
        UnitSystem::Natural => c.radius,
    };
    let sphere = SphereConfig::new(radius, r.cavity.separation())?;
    let result = sphere_plane_force(&sphere, &r.cavity, &spec)?;
    let point = Point {
        x: r.reduced(),
        value: r.force(result.force),
        err: r.force(result.quad.error_estimate),
        converged: result.quad.converged,
    };
    let mut inputs = r.inputs_json();
    inputs["radius"] = json!(c.radius);
    let mut warnings = Vec::new();
    if result.pfa_questionable {
        warnings.push("closest approach not small against the radius; PFA questionable");
    }
    Ok(Report::new("sphere-plane", Some(r.units), inputs, point)
        .with("eta_e", json!(result.eta_e))
        .with("pfa_questionable", json!(result.pfa_questionable))
        .with("reduced_distance", json!(r.reduced()))
        .with("warnings", json!(warnings)))
}

struct AtomPair {
    first: AtomModel,
    second: AtomModel,
    identical: bool,
    scale: Scale,
    separation: f64,
    units: UnitSystem,
}

fn atom_pair(files: &[PathBuf], separation: f64, units: Option<Units>) -> CliResult<AtomPair> {
    if files.len() > 2 {
        return Err(Failure::Usage("--atom-file accepts at most two atoms".into()));
    }
    let first = parse_atom_table(&read_file(&files[0])?)?;
    let second = match files.get(1) {
        Some(path) => parse_atom_table(&read_file(path)?)?,
        None => first.clone(),
    };
    let units = units.map(UnitSystem::from).unwrap_or(UnitSystem::Natural);
    let scale = Scale::new(first.lambda_a_si())?;
    let separation = match units {
        UnitSystem::Si => scale.length_to_natural(separation * NM),
        UnitSystem::Natural => separation,
    };
    Ok(AtomPair {
        identical: first == second,
        first: first.to_natural_in(&scale),
        second: second.to_natural_in(&scale),
        scale,
        separation,
        units,
    })
}

impl AtomPair {
    fn energy(&self, e: f64) -> f64 {
        match self.units {
            UnitSystem::Si => self.scale.energy_to_si(e),
            UnitSystem::Natural => e,
        }
    }

    fn inputs(&self, files: &[PathBuf], separation: f64) -> Value {
        let files: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
        let key = match self.units {
            UnitSystem::Si => "separation_nm",
            UnitSystem::Natural => "separation",
        };
        json!({ "atom_files": files, key: separation })
    }

    fn reduced(&self) -> f64 {
        self.separation / self.first.lambda_a()
    }
}

fn cp(c: &AtomCommand) -> CliResult<Report> {
    let pair = atom_pair(&c.atom_files, c.separation, c.common.units)?;
    let spec = spec_from(&c.common)?;
    let l = pair.separation;
    let e = cp_energy(&pair.first, &pair.second, l, &spec)?;
    let retarded = cp_retarded(&pair.first, &pair.second, l)?;
    let ratio = eta_cp_pair(&pair.first, &pair.second, l, &spec)?;
    let point = Point {
        x: pair.reduced(),
        value: pair.energy(e.value),
        err: pair.energy(e.error_estimate),
        converged: e.converged && ratio.converged,
    };
    let eta_key = if pair.identical { "eta_cp" } else { "ratio_to_retarded" };
    Ok(Report::new("cp", Some(pair.units), pair.inputs(&c.atom_files, c.separation), point)
        .with("retarded", json!(pair.energy(retarded)))
        .with("london", json!(pair.energy(london_sum(&pair.first, &pair.second, l)?)))
        .with(eta_key, json!(ratio.value))
        .with("identical_atoms", json!(pair.identical))
        .with("l_over_lambda_a", json!(pair.reduced())))
}

fn london(c: &AtomCommand) -> CliResult<Report> {
    let pair = atom_pair(&c.atom_files, c.separation, c.common.units)?;
    let spec = spec_from(&c.common)?;
    let l = pair.separation;
    let q = london_energy(&pair.first, &pair.second, l, &spec)?;
    let closed = london_sum(&pair.first, &pair.second, l)?;
    let point = Point {
        x: pair.reduced(),
        value: pair.energy(q.value),
        err: pair.energy(q.error_estimate),
        converged: q.converged,
    };
    let rel = if closed != 0.0 { (q.value - closed).abs() / closed.abs() } else { 0.0 };
    Ok(Report::new("london", Some(pair.units), pair.inputs(&c.atom_files, c.separation), point)
        .with("closed_form", json!(pair.energy(closed)))
        .with("relative_difference", json!(rel))
        .with("l_over_lambda_a", json!(pair.reduced())))
}

fn alpha(c: &AlphaCommand) -> CliResult<Report> {
    let factor = 30.0 / (std::f64::consts::SQRT_2 * std::f64::consts::PI.powi(2));
    let (sum, inputs) = match c.terms {
        Some(n) => (plasmon_series_sum(SeriesTruncation::Terms(n))?, json!({ "terms": n })),
        None => {
            if c.tail_tol.is_nan() || c.tail_tol <= 0.0 {
                return Err(Failure::Usage("--tail-tol must be positive".into()));
            }
            (alpha_coefficient(c.tail_tol)?, json!({ "tail_tol": c.tail_tol }))
        }
    };
    // alpha_coefficient is already scaled
    let (alpha, series) = match c.terms {
        Some(_) => (factor * sum.value, sum.value),
        None => (sum.value, sum.value / factor),
    };
    let first = factor * 0.5;
    let point = Point {
        x: sum.n_used as f64,
        value: alpha,
        err: match c.terms {
            Some(_) => 0.0,
            None => sum.tail.abs(),
        },
        converged: true,
    };
    Ok(Report::new("alpha", None, inputs, point)
        .with("alpha", json!(alpha))
        .with("series_sum", json!(series))
        .with("n_terms", json!(sum.n_used))
        .with("first_term", json!(first))
        .with("first_term_share", json!(first / alpha)))
}

fn plasmon(c: &PlasmonCommand) -> CliResult<Report> {
    let has_gap = c.cavity.separation.is_some() || c.cavity.reduced.is_some();
    let mut args_with_gap = CavityArgs {
        separation: c.cavity.separation,
        area: c.cavity.area,
        lambda_p: c.cavity.lambda_p,
        omega_p: c.cavity.omega_p,
        reduced: c.cavity.reduced,
        config: c.cavity.config.clone(),
    };
    if !has_gap && c.cavity.config.is_none() {
        // the single-interface quantities do not depend on the gap
        args_with_gap.reduced = Some(1.0);
    }
    let r = resolve(&args_with_gap, c.common.units)?;
    let spec = spec_from(&c.common)?;
    let mirror = *r.cavity.mirror1();
    let wp = mirror.omega_p();
    let k = c.k * wp;
    let omega = plasmon_frequency(k, &mirror)?;
    let brewster = brewster_frequency(k, &mirror)?;
    let point = Point {
        x: c.k,
        value: r.frequency(omega),
        err: 0.0,
        converged: true,
    };
    let mut inputs = if has_gap || c.cavity.config.is_some() {
        r.inputs_json()
    } else {
        let mut v = r.inputs_json();
        if let Some(obj) = v.as_object_mut() {
            obj.remove("separation");
            obj.remove("separation_nm");
        }
        v
    };
    inputs["k_over_kp"] = json!(c.k);
    let mut report = Report::new("plasmon", Some(r.units), inputs, point)
        .with("omega_plasmon_over_omega_p", json!(omega / wp))
        .with("omega_s", json!(r.frequency(mirror.omega_s())))
        .with("omega_brewster", json!(r.frequency(brewster)));
    if has_gap || c.cavity.config.is_some() {
        let l = r.cavity.separation();
        let pair = coupled_plasmon_frequencies(k, l, &mirror)?;
        let shift = plasmon_shift_energy(&r.cavity, &spec)?;
        let series = short_distance_energy_series(&r.cavity, SeriesTruncation::default())?;
        let converged = shift.quad.converged;
        report = report
            .with("omega_plus", json!(r.frequency(pair.omega_plus)))
            .with("omega_minus", json!(r.frequency(pair.omega_minus)))
            .with("shift_energy", json!(r.energy(shift.energy)))
            .with("series_energy", json!(r.energy(series.energy)))
            .with("reduced_distance", json!(r.reduced()));
        report.point.converged = converged;
        report.record.insert("converged".into(), json!(converged));
    }
    Ok(report)
}

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Failure::Compute(e.to_string()))
}

fn grid(c: &SweepCommand) -> CliResult<Vec<f64>> {
    if c.count < 2 {
        return Err(Failure::Usage("--count must be at least 2".into()));
    }
    if !(c.min.is_finite() && c.max.is_finite() && c.min < c.max) {
        return Err(Failure::Usage("need finite --min < --max".into()));
    }
    let last = (c.count - 1) as f64;
    Ok(match c.spacing {
        Spacing::Linear => (0..c.count)
            .map(|i| c.min + (c.max - c.min) * i as f64 / last)
            .collect(),
        Spacing::Log => {
            if c.min <= 0.0 {
                return Err(Failure::Usage("log spacing needs --min > 0".into()));
            }
            let (a, b) = (c.min.ln(), c.max.ln());
            (0..c.count)
                .map(|i| match i {
                    0 => c.min,
                    i if i == c.count - 1 => c.max,
                    i => (a + (b - a) * i as f64 / last).exp(),
                })
                .collect()
        }
    })
}

fn point_from(x: f64, q: crate::Result<QuadResult>, convert: impl Fn(f64) -> f64) -> Point {
    match q {
        Ok(q) => Point {
            x,
            value: convert(q.value),
            err: convert(q.error_estimate).abs(),
            converged: q.converged,
        },
        Err(_) => Point {
            x,
            value: f64::NAN,
            err: f64::NAN,
            converged: false,
        },
    }
}

fn sweep(c: &SweepCommand, stdout: &mut dyn Write) -> CliResult<i32> {
    let xs = grid(c)?;
    let spec = spec_from(&c.common)?;
    let pool = thread_pool()?;
    let mut metadata = vec![
        format!("casimir-kit {}", env!("CARGO_PKG_VERSION")),
        format!("quantity: {}", c.quantity.name()),
        format!("x: {}", c.quantity.axis()),
    ];
    let points: Vec<Point>;
    let units;
    let inputs;
    if c.quantity == Quantity::EtaCp {
        let file = c
            .atom_file
            .as_ref()
            .ok_or_else(|| Failure::Usage("eta-cp needs --atom-file".into()))?;
        let pair = atom_pair(std::slice::from_ref(file), 1.0, Some(Units::Natural))?;
        let lambda_a = pair.first.lambda_a();
        points = pool.install(|| {
            xs.par_iter()
                .map(|&x| point_from(x, eta_cp_pair(&pair.first, &pair.second, x * lambda_a, &spec), |v| v))
                .collect()
        });
        units = UnitSystem::Natural;
        inputs = json!({ "atom_file": file.display().to_string() });
        metadata.push(format!("atom: {}", file.display()));
    } else {
        let args = CavityArgs {
            separation: None,
            area: c.cavity.area,
            lambda_p: c.cavity.lambda_p,
            omega_p: c.cavity.omega_p,
            reduced: Some(1.0),
            config: c.cavity.config.clone(),
        };
        if c.cavity.separation.is_some() || c.cavity.reduced.is_some() {
            return Err(Failure::Usage("the sweep sets the separation; drop --L and --L-over-lambdap".into()));
        }
        let base = resolve(&args, c.common.units)?;
        let lambda_p = base.cavity.mirror1().lambda_p(UnitSystem::Natural);
        let mirror = *base.cavity.mirror1();
        let at = |x: f64| base.cavity.with_separation(x * lambda_p);
        let quantity = c.quantity;
        let area = base.cavity.area();
        points = pool.install(|| {
            xs.par_iter()
                .map(|&x| match quantity {
                    Quantity::EtaF => point_from(x, at(x).and_then(|cv| eta_f(&cv, &spec)), |v| v),
                    Quantity::EtaE => point_from(x, at(x).and_then(|cv| eta_e(&cv, &spec)), |v| v),
                    Quantity::Force => point_from(
                        x,
                        at(x).and_then(|cv| casimir_force(&cv, &spec)).map(|f| f.quad.scaled(area)),
                        |v| base.force(v),
                    ),
                    Quantity::Energy => point_from(
                        x,
                        at(x).and_then(|cv| casimir_energy(&cv, &spec)).map(|e| e.quad.scaled(area)),
                        |v| base.energy(v),
                    ),
                    Quantity::PlasmonDispersion => point_from(
                        x,
                        plasmon_frequency(x * mirror.omega_p(), &mirror).map(|w| QuadResult::analytic(w / mirror.omega_p())),
                        |v| v,
                    ),
                    Quantity::EtaCp => unreachable!("handled above"),
                })
                .collect()
        });
        units = base.units;
        let mut v = base.inputs_json();
        if let Some(obj) = v.as_object_mut() {
            obj.remove("separation");
            obj.remove("separation_nm");
        }
        inputs = v;
        metadata.push(match base.units {
            UnitSystem::Si => format!(
                "material: lambda_p = {:.12e} nm, omega_p = {:.12e} rad/s",
                base.scale.length_m / NM,
                base.scale.frequency_to_si(mirror.omega_p())
            ),
            UnitSystem::Natural => format!("material: lambda_p = {lambda_p:.12e}"),
        });
    }
    metadata.push(format!("units: {}", match units {
        UnitSystem::Natural => "natural",
        UnitSystem::Si => "si",
    }));
    if c.quantity == Quantity::PlasmonDispersion {
        metadata.push("value: omega_plasmon / omega_p".into());
    }
    metadata.push(format!("tolerances: rel {:e} abs {:e}", spec.rel_tol, spec.abs_tol));

    let text = match c.common.output {
        Format::Csv => {
            let mut s = String::new();
            for m in &metadata {
                s.push_str("# ");
                s.push_str(m);
                s.push('\n');
            }
            s.push_str("x,value,err_est,converged\n");
            for p in &points {
                s.push_str(&p.csv_row());
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = points
                .iter()
                .map(|p| json!({"x": p.x, "value": p.value, "err_est": p.err, "converged": p.converged}))
                .collect();
            let record = json!({
                "command": "sweep",
                "quantity": c.quantity.name(),
                "x": c.quantity.axis(),
                "units": units,
                "inputs": inputs,
                "tolerances": {"rel": spec.rel_tol, "abs": spec.abs_tol},
                "points": rows,
            });
            format!("{record}\n")
        }
    };
    write_text(&text, c.common.out.as_deref(), stdout)?;
    Ok(if points.iter().all(|p| p.converged) {
        EXIT_OK
    } else {
        EXIT_UNCONVERGED
    })
}
