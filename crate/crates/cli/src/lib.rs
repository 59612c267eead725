//! Command-line front end: reads equations and parameters as JSON, runs the
//! analyses and transforms of `apparent`, and writes versioned reports.
//!
//! Exit codes: `0` success, `1` a domain error (a JSON object
//! `{"error": {"code", "message"}}` on stderr), `2` usage or I/O errors.

pub mod report;

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use apparent::heun::{FamilyRegistry, HeunError};
use apparent::ode::{fuchs_check, make_ode, riemann_symbol, singular_points, LinearOde, OdeError};
use apparent::polymer::{solve_spectrum, PolymerError, PolymerParams, SpectralConfig};
use apparent::polyrat::{parse_rat, BigRat, RatPoly};
use apparent::transform::{deform_iter, undeform, Target, TransformError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::Value;

use report::*;

const ERROR_CODES: &str = "\
Error codes (exit status 1, reported as {\"error\": {\"code\", \"message\"}}):
  InvalidInput             input is not valid JSON or does not match the expected shape
  ParseError               a rational number could not be parsed
  ZeroPolynomial           operation needs a nonzero polynomial
  DivisionByZero           division by a zero rational or polynomial
  NotAnODE                 fewer than two coefficients
  DegenerateLeading        leading coefficient is identically zero
  SingularMoebius          Moebius map with ad - bc = 0
  NotFuchsian              an irregular singular point was found
  NotSingular              the point is ordinary
  IrregularPoint           the point is an irregular singularity
  IrrationalExponents      exponents are not all rational
  NotAnExponent            requested exponent is not a root of the indicial polynomial
  BothZero                 P_{n-1} and P_n are both identically zero
  AlreadyIntegrated        P_n is identically zero
  NothingToRemove          no apparent point to remove
  NotRemovable             the point is not apparent
  MultiplicityRequired     higher-order removal needs an explicit multiplicity
  OrderTooLow              the equation has order below two
  FuchsianIdentity         parameters violate the exponent-sum relation
  DegenerateGeometry       singular points coincide
  NotConfluentClass        polynomial degrees do not fit the confluent class
  InvalidParams            parameters are out of range
  UnknownFamily            no such equation family
  DegenerateApparentPoint  the deformed polymer equation has no apparent point
  NoEigenvalueInWindow     no eigenvalue in the requested window
  PrecisionExhausted       series did not converge within the precision caps

Exit status 2 is used for usage errors and unreadable input or output files.";

#[derive(Debug, Parser)]
#[command(name = "apparent", version, about = "Apparent singularities of linear ODEs with polynomial coefficients", after_help = ERROR_CODES)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct InputArg {
    /// A JSON file, `-` for stdin, or inline JSON. Either an equation
    /// `{"coeffs": [...]}` or any report with an `ode` field.
    input: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Singular points, Riemann symbol and the Fuchs relation.
    Analyze(InputArg),
    /// Differentiate and clear denominators, creating apparent points.
    Deform {
        #[command(flatten)]
        input: InputArg,
        /// Number of times to deform.
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// Remove apparent points.
    Undeform {
        #[command(flatten)]
        input: InputArg,
        /// Point to remove, as `loc` or `loc:multiplicity`; repeatable.
        /// Without it every detected apparent point is removed.
        #[arg(long = "at", value_name = "LOC[:MULT]")]
        at: Vec<String>,
    },
    /// Build an equation from a named family.
    Heun {
        /// Family name; see --list.
        #[arg(long, required_unless_present = "list")]
        family: Option<String>,
        /// Parameters as a JSON file, `-` or inline JSON. Defaults to the family's example.
        #[arg(long)]
        params: Option<String>,
        /// List the registered families.
        #[arg(long)]
        list: bool,
    },
    /// Eigenvalues of the polymer stretching problem.
    Polymer(PolymerArgs),
    /// Riemann symbol of a Fuchsian equation.
    Riemann(InputArg),
}

#[derive(Debug, Args)]
struct PolymerArgs {
    /// Flexibility b.
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    /// Weissenberg number; several values (comma separated or repeated) run a sweep.
    #[arg(long = "W", value_delimiter = ',', required = true, allow_hyphen_values = true)]
    w: Vec<String>,
    /// Equilibrium relaxation time.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    tau: String,
    #[arg(long, default_value_t = 0.0)]
    nu_min: f64,
    /// Upper end of the search window; defaults to 10 b.
    #[arg(long)]
    nu_max: Option<f64>,
    /// Number of eigenvalues to locate.
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 256)]
    precision_bits: usize,
    #[arg(long, default_value_t = 200)]
    series_order: usize,
    /// Grid cells in the scan of the window.
    #[arg(long, default_value_t = 400)]
    grid: usize,
    /// Report endpoint values of each eigenfunction.
    #[arg(long)]
    strict: bool,
    /// Include every matching-Wronskian sample in the diagnostics.
    #[arg(long)]
    samples: bool,
    /// Write the sweep as CSV (W, nu1, T_rel) to this path.
    #[arg(long)]
    csv: Option<String>,
}

#[derive(Debug)]
enum Failure {
    Domain { code: String, message: String },
    Io(String),
}

impl Failure {
    fn domain(code: &str, message: impl ToString) -> Self {
        Failure::Domain { code: code.to_string(), message: message.to_string() }
    }

    fn invalid(message: impl ToString) -> Self {
        Failure::domain("InvalidInput", message)
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::domain(e.code(), &e)
            }
        }
    )*};
}

domain_from!(OdeError, TransformError, HeunError, PolymerError, apparent::polyrat::PolyError);

/// Runs the tool with `argv` (program name first) and returns the exit status.
pub fn run(argv: &[String], stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let shown = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{shown}");
                return 2;
            }
            let _ = write!(stdout, "{shown}");
            return 0;
        }
    };
    let format = cli.format;
    let result = dispatch(cli, stdin).and_then(|out| {
        let text = match format {
            Format::Json => out.to_json(),
            Format::Text => out.to_text(),
        };
        stdout.write_all(text.as_bytes()).map_err(|e| Failure::Io(format!("writing output: {e}")))
    });
    match result {
        Ok(()) => 0,
        Err(Failure::Domain { code, message }) => {
            let body = ErrorReport { error: ErrorBody { code, message } };
            let _ = match format {
                Format::Json => writeln!(stderr, "{}", serde_json::to_string_pretty(&body).expect("serializable")),
                Format::Text => writeln!(stderr, "error[{}]: {}", body.error.code, body.error.message),
            };
            1
        }
        Err(Failure::Io(message)) => {
            let _ = writeln!(stderr, "error: {message}");
            2
        }
    }
}

fn dispatch(cli: Cli, stdin: &mut dyn Read) -> Result<Report, Failure> {
    match cli.command {
        Command::Analyze(i) => analyze(read_ode(&i.input, stdin)?).map(Report::Analyze),
        Command::Riemann(i) => {
            let ode = read_ode(&i.input, stdin)?;
            let riemann = riemann_symbol(&ode)?;
            Ok(Report::Riemann(RiemannReport::new(ode, riemann)))
        }
        Command::Deform { input, times } => {
            let ode = read_ode(&input.input, stdin)?;
            if times == 0 {
                return Err(Failure::invalid("--times must be at least 1"));
            }
            let steps = deform_iter(&ode, times)?;
            Ok(Report::Deform(DeformReport::new(ode, steps)))
        }
        Command::Undeform { input, at } => {
            let ode = read_ode(&input.input, stdin)?;
            let targets = at.iter().map(|s| parse_target(s)).collect::<Result<Vec<_>, _>>()?;
            let result = undeform(&ode, if targets.is_empty() { None } else { Some(&targets) })?;
            Ok(Report::Undeform(UndeformReport::new(ode, result)))
        }
        Command::Heun { family, params, list } => {
            let registry = FamilyRegistry::new();
            if list {
                let families = registry
                    .iter()
                    .map(|f| FamilyEntry { name: f.name().to_string(), summary: f.summary().to_string(), example: f.example() })
                    .collect();
                return Ok(Report::Families(FamiliesReport::new(families)));
            }
            let name = family.expect("clap requires --family without --list");
            let family = registry.get(&name).ok_or_else(|| HeunError::UnknownFamily(name.clone()))?;
            let params = match params {
                Some(p) => read_json(&p, stdin)?,
                None => family.example(),
            };
            let ode = family.build(&params)?;
            let fuchs = fuchs_check(&ode);
            let riemann = riemann_symbol(&ode).ok();
            Ok(Report::Heun(HeunReport::new(name, params, ode, riemann, fuchs)))
        }
        Command::Polymer(args) => polymer(args),
    }
}

fn analyze(ode: LinearOde) -> Result<AnalyzeReport, Failure> {
    let singular = singular_points(&ode);
    let fuchs = fuchs_check(&ode);
    let mut warnings = Vec::new();
    let riemann = match riemann_symbol(&ode) {
        Ok(r) => Some(r),
        Err(e) => {
            warnings.push(format!("no Riemann symbol: {e}"));
            None
        }
    };
    if let Some(u) = &singular.unresolved_factor {
        warnings.push(format!("singular points at the roots of {} are not classified", u.to_expr()));
    }
    if !ode.follows_degree_convention() {
        warnings.push("coefficient degrees do not follow deg P_k <= deg P_0 - k".to_string());
    }
    Ok(AnalyzeReport::new(ode, singular, riemann, fuchs, warnings))
}

fn parse_target(s: &str) -> Result<Target, Failure> {
    match s.rsplit_once(':') {
        Some((loc, m)) => {
            let m: usize = m.trim().parse().map_err(|_| Failure::invalid(format!("bad multiplicity in --at {s}")))?;
            Ok(Target::with_multiplicity(parse_rat(loc)?, m))
        }
        None => Ok(Target::new(parse_rat(s)?)),
    }
}

fn polymer(a: PolymerArgs) -> Result<Report, Failure> {
    let b = parse_rat(&a.b)?;
    let tau = parse_rat(&a.tau)?;
    let ws = a.w.iter().map(|w| parse_rat(w)).collect::<Result<Vec<BigRat>, _>>()?;
    let nu_max = a.nu_max.unwrap_or_else(|| 10.0 * apparent::polyrat::rational::rat_to_f64(&b));
    let cfg = SpectralConfig {
        precision_bits: a.precision_bits,
        series_order: a.series_order,
        grid: a.grid,
        strict: a.strict,
        ..Default::default()
    };
    let mut runs = Vec::with_capacity(ws.len());
    for w in ws {
        let p = PolymerParams { b: b.clone(), w, tau: tau.clone() };
        let r = solve_spectrum(&p, a.nu_min, nu_max, a.count, &cfg)?;
        runs.push(PolymerRun::new(p, r, a.samples));
    }
    if let Some(path) = &a.csv {
        write_csv(path, &runs)?;
    }
    let window = Window { nu_min: a.nu_min, nu_max, count: a.count };
    Ok(if runs.len() == 1 {
        Report::Polymer(PolymerReport::new(window, runs.pop().expect("one run")))
    } else {
        Report::Sweep(SweepReport::new(window, runs))
    })
}

fn write_csv(path: &str, runs: &[PolymerRun]) -> Result<(), Failure> {
    let io = |e: csv::Error| Failure::Io(format!("{path}: {e}"));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["W", "nu1", "T_rel"]).map_err(io)?;
    for r in runs {
        let nu1 = r.eigenvalues.first().map(|v| v.to_string()).unwrap_or_default();
        w.write_record([apparent::polyrat::format_rat(&r.params.w), nu1, r.t_rel.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| Failure::Io(format!("{path}: {e}")))
}

fn read_source(source: &str, stdin: &mut dyn Read) -> Result<String, Failure> {
    if source == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| Failure::Io(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    let trimmed = source.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(source.to_string());
    }
    if !Path::new(source).exists() {
        return Err(Failure::Io(format!("{source}: no such file")));
    }
    fs::read_to_string(source).map_err(|e| Failure::Io(format!("{source}: {e}")))
}

fn read_json(source: &str, stdin: &mut dyn Read) -> Result<Value, Failure> {
    let text = read_source(source, stdin)?;
    serde_json::from_str(&text).map_err(Failure::invalid)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOde {
    coeffs: Vec<RatPoly>,
}

/// Accepts `{"coeffs": ...}` or a report carrying the equation under `ode`.
fn read_ode(source: &str, stdin: &mut dyn Read) -> Result<LinearOde, Failure> {
    let value = read_json(source, stdin)?;
    let raw = match value.get("coeffs") {
        Some(_) => value,
        None => value
            .get("ode")
            .cloned()
            .ok_or_else(|| Failure::invalid("expected an object with \"coeffs\" or \"ode\""))?,
    };
    let raw: RawOde = serde_json::from_value(raw).map_err(Failure::invalid)?;
    Ok(make_ode(raw.coeffs)?)
}
