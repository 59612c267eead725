//! Report types. Every report starts with `schema` and `version`, has a fixed
//! field order and no timestamps, so identical inputs give identical bytes.

use std::fmt::Write as _;

use apparent::ode::{FuchsReport, LinearOde, RiemannSymbol, SingularPoints};
use apparent::polymer::{EndpointValues, PolymerParams, SpectralResult, WronskianSample};
use apparent::polyrat::format_rat;
use apparent::transform::{DeformResult, UndeformResult};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "apparent/v1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub schema: String,
    pub version: String,
    pub command: String,
}

impl Header {
    fn new(command: &str) -> Self {
        Header { schema: SCHEMA.to_string(), version: VERSION.to_string(), command: command.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: ErrorBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    #[serde(flatten)]
    pub header: Header,
    pub ode: LinearOde,
    pub equation: String,
    pub singular_points: SingularPoints,
    pub riemann: Option<RiemannSymbol>,
    pub fuchs: FuchsReport,
    pub warnings: Vec<String>,
}

impl AnalyzeReport {
    pub fn new(
        ode: LinearOde,
        singular_points: SingularPoints,
        riemann: Option<RiemannSymbol>,
        fuchs: FuchsReport,
        warnings: Vec<String>,
    ) -> Self {
        let equation = ode.to_string();
        AnalyzeReport { header: Header::new("analyze"), ode, equation, singular_points, riemann, fuchs, warnings }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiemannReport {
    #[serde(flatten)]
    pub header: Header,
    pub ode: LinearOde,
    pub riemann: RiemannSymbol,
    pub matrix: String,
}

impl RiemannReport {
    pub fn new(ode: LinearOde, riemann: RiemannSymbol) -> Self {
        let matrix = riemann.to_matrix_text();
        RiemannReport { header: Header::new("riemann"), ode, riemann, matrix }
    }
}

/// `ode` is the last deformed equation, so the report can be piped on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformReport {
    #[serde(flatten)]
    pub header: Header,
    pub input: LinearOde,
    pub steps: Vec<DeformResult>,
    pub ode: LinearOde,
}

impl DeformReport {
    pub fn new(input: LinearOde, steps: Vec<DeformResult>) -> Self {
        let ode = steps.last().map(|s| s.ode.clone()).unwrap_or_else(|| input.clone());
        DeformReport { header: Header::new("deform"), input, steps, ode }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndeformReport {
    #[serde(flatten)]
    pub header: Header,
    pub input: LinearOde,
    #[serde(flatten)]
    pub result: UndeformResult,
}

impl UndeformReport {
    pub fn new(input: LinearOde, result: UndeformResult) -> Self {
        UndeformReport { header: Header::new("undeform"), input, result }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeunReport {
    #[serde(flatten)]
    pub header: Header,
    pub family: String,
    pub params: Value,
    pub ode: LinearOde,
    pub equation: String,
    pub riemann: Option<RiemannSymbol>,
    pub fuchs: FuchsReport,
}

impl HeunReport {
    pub fn new(family: String, params: Value, ode: LinearOde, riemann: Option<RiemannSymbol>, fuchs: FuchsReport) -> Self {
        let equation = ode.to_string();
        HeunReport { header: Header::new("heun"), family, params, ode, equation, riemann, fuchs }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyEntry {
    pub name: String,
    pub summary: String,
    pub example: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamiliesReport {
    #[serde(flatten)]
    pub header: Header,
    pub families: Vec<FamilyEntry>,
}

impl FamiliesReport {
    pub fn new(families: Vec<FamilyEntry>) -> Self {
        FamiliesReport { header: Header::new("heun"), families }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub nu_min: f64,
    pub nu_max: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub series_order: usize,
    pub precision_bits: usize,
    pub grid_points: usize,
    /// Sign changes of the matching Wronskian over the grid.
    pub sign_changes: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wronskian_samples: Option<Vec<WronskianSample>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub endpoint_values: Option<Vec<EndpointValues>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolymerRun {
    pub params: PolymerParams,
    pub eigenvalues: Vec<f64>,
    #[serde(rename = "T_rel")]
    pub t_rel: f64,
    pub q: Option<f64>,
    pub diagnostics: Diagnostics,
}

impl PolymerRun {
    pub fn new(params: PolymerParams, r: SpectralResult, keep_samples: bool) -> Self {
        let sign_changes = r.wronskian_samples.windows(2).filter(|s| s[0].value * s[1].value < 0.0).count();
        let diagnostics = Diagnostics {
            series_order: r.series_order,
            precision_bits: r.precision_bits,
            grid_points: r.wronskian_samples.len(),
            sign_changes,
            wronskian_samples: keep_samples.then_some(r.wronskian_samples),
            endpoint_values: r.endpoint_values,
        };
        PolymerRun { params, eigenvalues: r.eigenvalues, t_rel: r.t_rel, q: r.q, diagnostics }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolymerReport {
    #[serde(flatten)]
    pub header: Header,
    pub window: Window,
    #[serde(flatten)]
    pub run: PolymerRun,
}

impl PolymerReport {
    pub fn new(window: Window, run: PolymerRun) -> Self {
        PolymerReport { header: Header::new("polymer"), window, run }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    #[serde(flatten)]
    pub header: Header,
    pub window: Window,
    pub sweep: Vec<PolymerRun>,
}

impl SweepReport {
    pub fn new(window: Window, sweep: Vec<PolymerRun>) -> Self {
        SweepReport { header: Header::new("polymer"), window, sweep }
    }
}

pub enum Report {
    Analyze(AnalyzeReport),
    Riemann(RiemannReport),
    Deform(DeformReport),
    Undeform(UndeformReport),
    Heun(HeunReport),
    Families(FamiliesReport),
    Polymer(PolymerReport),
    Sweep(SweepReport),
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = match self {
            Report::Analyze(r) => serde_json::to_string_pretty(r),
            Report::Riemann(r) => serde_json::to_string_pretty(r),
            Report::Deform(r) => serde_json::to_string_pretty(r),
            Report::Undeform(r) => serde_json::to_string_pretty(r),
            Report::Heun(r) => serde_json::to_string_pretty(r),
            Report::Families(r) => serde_json::to_string_pretty(r),
            Report::Polymer(r) => serde_json::to_string_pretty(r),
            Report::Sweep(r) => serde_json::to_string_pretty(r),
        }
        .expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Analyze(r) => {
                let _ = writeln!(out, "{}\n", r.equation);
                out.push_str(&singular_table(&r.singular_points));
                if let Some(rs) = &r.riemann {
                    let _ = writeln!(out, "\n{}", rs.to_matrix_text().trim_end());
                }
                let _ = writeln!(out, "\n{}", fuchs_line(&r.fuchs));
                for w in &r.warnings {
                    let _ = writeln!(out, "warning: {w}");
                }
            }
            Report::Riemann(r) => {
                let _ = writeln!(out, "{}\n\n{}", r.ode, r.matrix.trim_end());
            }
            Report::Deform(r) => {
                for (i, s) in r.steps.iter().enumerate() {
                    let _ = writeln!(out, "step {}: {}", i + 1, s.ode);
                    for a in &s.new_apparent {
                        let gap = a.expected_gap.map(|g| format!(", expected gap {g}")).unwrap_or_default();
                        let _ = writeln!(out, "  new apparent point {} (multiplicity {}{gap})", format_rat(&a.location), a.multiplicity);
                    }
                    if let Some(f) = &s.unresolved_factor {
                        let _ = writeln!(out, "  apparent points at the roots of {}", f.to_expr());
                    }
                }
            }
            Report::Undeform(r) => {
                let removed: Vec<String> = r.result.removed_points.iter().map(format_rat).collect();
                let _ = writeln!(out, "{}", r.result.ode);
                let _ = writeln!(out, "removed: {}", removed.join(", "));
                let _ = writeln!(out, "free parameters: {}", r.result.free_parameters);
            }
            Report::Heun(r) => {
                let _ = writeln!(out, "{}: {}", r.family, r.equation);
                if let Some(rs) = &r.riemann {
                    let _ = writeln!(out, "\n{}", rs.to_matrix_text().trim_end());
                }
                let _ = writeln!(out, "\n{}", fuchs_line(&r.fuchs));
            }
            Report::Families(r) => {
                for f in &r.families {
                    let _ = writeln!(out, "{:<12} {}", f.name, f.summary);
                }
            }
            Report::Polymer(r) => polymer_text(&mut out, &r.run),
            Report::Sweep(r) => {
                let _ = writeln!(out, "{:>12} {:>20} {:>12}", "W", "nu1", "T_rel");
                for run in &r.sweep {
                    let nu1 = run.eigenvalues.first().copied().unwrap_or(f64::NAN);
                    let _ = writeln!(out, "{:>12} {:>20.12} {:>12.6}", format_rat(&run.params.w), nu1, run.t_rel);
                }
            }
        }
        out
    }
}

fn singular_table(sp: &SingularPoints) -> String {
    let mut out = String::from("singular points:\n");
    for p in &sp.points {
        let exps = p
            .exponents
            .as_ref()
            .map(|e| {
                let mut v: Vec<String> = e.values.iter().map(format_rat).collect();
                if let Some(f) = &e.irrational_factor {
                    v.push(format!("roots of {}", f.to_expr_in("r")));
                }
                v.join(", ")
            })
            .unwrap_or_default();
        let _ = write!(out, "  {:<10} {:<18} {}", p.location.to_string(), format!("{:?}", p.kind), exps);
        if let Some(c) = &p.failed_condition {
            let _ = write!(out, "  ({c})");
        }
        out.push('\n');
    }
    if let Some(f) = &sp.unresolved_factor {
        let _ = writeln!(out, "  roots of {}  unclassified", f.to_expr());
    }
    out
}

fn fuchs_line(f: &FuchsReport) -> String {
    if !f.fuchsian {
        let pts: Vec<String> = f.irregular_points.iter().map(|p| p.to_string()).collect();
        return format!("not Fuchsian: irregular at {}", pts.join(", "));
    }
    match (&f.exponent_sum, &f.expected_sum) {
        (Some(s), Some(e)) => format!(
            "Fuchs relation: exponent sum {} vs {} over {} points ({})",
            format_rat(s),
            format_rat(e),
            f.singular_count,
            if f.identity_holds { "holds" } else { "fails" }
        ),
        _ => "Fuchs relation: exponent sum unavailable".to_string(),
    }
}

fn polymer_text(out: &mut String, r: &PolymerRun) {
    let _ = writeln!(
        out,
        "b = {}, W = {}, tau = {}",
        format_rat(&r.params.b),
        format_rat(&r.params.w),
        format_rat(&r.params.tau)
    );
    for (i, nu) in r.eigenvalues.iter().enumerate() {
        let _ = writeln!(out, "nu_{} = {nu:.12}", i + 1);
    }
    let _ = writeln!(out, "T_rel = {:.9}", r.t_rel);
    if let Some(q) = r.q {
        let _ = writeln!(out, "q = {q:.12}");
    }
    let d = &r.diagnostics;
    let _ = writeln!(
        out,
        "series order {}, {} bits, {} sign changes over {} grid points",
        d.series_order, d.precision_bits, d.sign_changes, d.grid_points
    );
}
