//! Command-line front end. Reports are JSON objects tagged with
//! `schema_version`; grid-like results can also be written as CSV.
//!
//! Exit codes: 0 on success, 1 on input errors, 2 when two computations that
//! must agree do not. A code-2 report carries the disagreeing values.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::appendix::{self, AppendixParams};
use crate::error::Error;
use crate::hessian::{self, PiecewiseAffineConvex};
use crate::json::rvec_strings;
use crate::mixed;
use crate::rational::{format_rational, parse_rational, RVec, Rational};
use crate::smooth::{self, Grid, Rect, SmoothFunction};
use crate::{extremality, Direction, Polytope};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "mixedarea", version, about = "Exact mixed volumes, mixed area measures and mixed Hessian measures")]
pub struct Cli {
    /// Seed for randomized harnesses.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mixed volume of n polytopes in R^n, by interpolation and by measure integration.
    MixedVolume { files: Vec<PathBuf> },
    /// Mixed area measure of n−1 polytopes in R^n.
    AreaMeasure { files: Vec<PathBuf> },
    /// Extremality of a direction for n−1 polytopes.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
        files: Vec<PathBuf>,
    },
    /// Atom support of the mixed area measure against the extreme set.
    Schneider { files: Vec<PathBuf> },
    /// Mixed Hessian measure of n piecewise-affine functions on R^n.
    Hessian { files: Vec<PathBuf> },
    /// Segment through a point on which two planar functions are affine.
    Ruling {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        f: PathBuf,
        g: PathBuf,
    },
    /// Density of the mixed area measure for smooth support functions, or
    /// the planar mixed Monge–Ampère residual on a grid.
    SmoothDensity {
        /// Registry names of the functions.
        names: Vec<String>,
        /// Unit direction for the density.
        #[arg(long, allow_hyphen_values = true)]
        dir: Option<String>,
        /// Grid size per axis for the residual field.
        #[arg(long)]
        grid: Option<usize>,
        /// Grid rectangle as x1_lo,x2_lo,x1_hi,x2_hi.
        #[arg(long, allow_hyphen_values = true, default_value = "-0.5,-0.5,0.5,0.5")]
        rect: String,
        /// Residual threshold counted in the grid summary.
        #[arg(long, default_value_t = smooth::RESIDUAL_TOL)]
        tol: f64,
    },
    /// Newton probe of the residual system over random starts.
    AppendixProbe {
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// (v₂, …, v_{n−1}), comma separated.
        #[arg(long, allow_hyphen_values = true, default_value = "1,1")]
        v: String,
        #[arg(long, default_value_t = appendix::DEFAULT_T)]
        t: f64,
        #[arg(long, default_value_t = 1000)]
        seeds: usize,
        /// Largest accepted cluster residual.
        #[arg(long, default_value_t = appendix::SOLUTION_TOL)]
        tol: f64,
    },
    /// Projection identities for mixed volumes and mixed area measures along a direction.
    ProjectionCheck {
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
        files: Vec<PathBuf>,
    },
}

impl Command {
    pub fn verb(&self) -> &'static str {
        match self {
            Command::MixedVolume { .. } => "mixed-volume",
            Command::AreaMeasure { .. } => "area-measure",
            Command::Classify { .. } => "classify",
            Command::Schneider { .. } => "schneider",
            Command::Hessian { .. } => "hessian",
            Command::Ruling { .. } => "ruling",
            Command::SmoothDensity { .. } => "smooth-density",
            Command::AppendixProbe { .. } => "appendix-probe",
            Command::ProjectionCheck { .. } => "projection-check",
        }
    }
}

/// Result of one invocation. Nothing is printed; `--out` files are written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Input(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(json!({ "kind": error_kind(&e), "message": e.to_string() }))
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::UnsupportedDimension(_) => "unsupported_dimension",
        _ => "invalid",
    }
}

fn input_error(kind: &str, message: impl Into<String>) -> Failure {
    Failure::Input(json!({ "kind": kind, "message": message.into() }))
}

struct Report {
    body: Value,
    csv: Option<String>,
    discrepancy: bool,
}

impl Report {
    fn new(body: impl Serialize, discrepancy: bool) -> Result<Self, Failure> {
        let body = serde_json::to_value(body).map_err(|e| input_error("serialize", e.to_string()))?;
        Ok(Report { body, csv: None, discrepancy })
    }

    fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_with<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    execute(&cli)
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Outcome {
    let verb = cli.command.verb();
    let report = match dispatch(cli) {
        Ok(r) => r,
        Err(Failure::Input(err)) => {
            let body = json!({ "schema_version": SCHEMA_VERSION, "command": verb, "error": err });
            return Outcome { code: 1, stdout: String::new(), stderr: pretty(&body) };
        }
    };
    let text = match cli.format {
        Format::Json => pretty(&json!({
            "schema_version": SCHEMA_VERSION,
            "command": verb,
            "status": if report.discrepancy { "discrepancy" } else { "ok" },
            "report": report.body,
        })),
        Format::Csv => match report.csv {
            Some(csv) => csv,
            None => {
                let err = json!({ "kind": "format", "message": format!("{verb} has no CSV output") });
                let body = json!({ "schema_version": SCHEMA_VERSION, "command": verb, "error": err });
                return Outcome { code: 1, stdout: String::new(), stderr: pretty(&body) };
            }
        },
    };
    let code = if report.discrepancy { 2 } else { 0 };
    match &cli.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
            Err(e) => {
                let err = json!({ "kind": "io", "file": path.display().to_string(), "message": e.to_string() });
                let body = json!({ "schema_version": SCHEMA_VERSION, "command": verb, "error": err });
                Outcome { code: 1, stdout: String::new(), stderr: pretty(&body) }
            }
        },
        None => Outcome { code, stdout: text, stderr: String::new() },
    }
}

/// Entry point for the binary: runs, prints and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let out = run_with(args);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::MixedVolume { files } => {
            let bodies = load_all::<Polytope>(files)?;
            let r = mixed::mixed_volume(&bodies)?;
            let bad = !r.agree();
            Report::new(r, bad)
        }
        Command::AreaMeasure { files } => {
            let bodies = load_all::<Polytope>(files)?;
            let m = mixed::mixed_area_atoms(&bodies)?;
            let mut csv = csv_writer();
            write_row(&mut csv, ["dir", "scale", "mass_numeric"])?;
            for (w, q) in m.atoms() {
                write_row(&mut csv, [joined(w.coords()), format_rational(q), m.mass_f64(w).to_string()])?;
            }
            Ok(Report::new(&m, false)?.with_csv(finish_csv(csv)?))
        }
        Command::Classify { dir, files } => {
            let u = parse_direction(dir)?;
            let bodies = load_all::<Polytope>(files)?;
            Report::new(extremality::classify(&bodies, &u)?, false)
        }
        Command::Schneider { files } => {
            let bodies = load_all::<Polytope>(files)?;
            let r = extremality::schneider_verify(&bodies)?;
            let bad = !r.equal;
            Report::new(r, bad)
        }
        Command::Hessian { files } => {
            let fs = load_all::<PiecewiseAffineConvex>(files)?;
            let atoms = hessian::mixed_hessian_atoms(&fs)?;
            let oracle = hessian::ma_oracle(&fs)?;
            let support = hessian::fcn_schneider_verify(&fs)?;
            let agree = atoms == oracle;
            let mut csv = csv_writer();
            write_row(&mut csv, ["point", "mass", "mass_numeric"])?;
            for (x, q) in atoms.atoms() {
                write_row(&mut csv, [rvec_strings(x).join(" "), format_rational(q), crate::rational::to_f64(q).to_string()])?;
            }
            let body = json!({
                "measure": atoms,
                "total": format_rational(&atoms.total()),
                "oracle_agrees": agree,
                "oracle": if agree { Value::Null } else { serde_json::to_value(&oracle).unwrap_or(Value::Null) },
                "support": support,
            });
            Ok(Report::new(body, !agree || !support.holds)?.with_csv(finish_csv(csv)?))
        }
        Command::Ruling { point, f, g } => {
            let x = parse_rationals(point)?;
            let f: PiecewiseAffineConvex = load(f)?;
            let g: PiecewiseAffineConvex = load(g)?;
            let d = common_box(&f, &g)?;
            Report::new(hessian::ruling(&f, &g, &d, &x)?, false)
        }
        Command::SmoothDensity { names, dir, grid, rect, tol } => match (dir, grid) {
            (Some(dir), None) => {
                let u = parse_floats(dir)?;
                let hs = registry_all(names, u.len())?;
                let density = smooth::smooth_density(&hs, &u)?;
                let failing = smooth::rank_failing_sets(&hs, &u)?;
                let body = json!({
                    "functions": names,
                    "direction": u,
                    "density": density,
                    "rank_extreme": failing.is_empty(),
                    "failing_sets": failing,
                });
                Report::new(body, false)
            }
            (None, Some(size)) => {
                let hs = registry_all(names, 2)?;
                if hs.len() != 2 {
                    return Err(input_error("invalid", "the residual grid takes two planar functions"));
                }
                let r = parse_floats(rect)?;
                if r.len() != 4 {
                    return Err(Error::DimensionMismatch { expected: 4, found: r.len() }.into());
                }
                let grid = Grid::new(Rect::new([r[0], r[1]], [r[2], r[3]]), *size, *size)?;
                let nodes = smooth::mixed_ma_residual(&hs[0], &hs[1], &grid)?;
                let csv = smooth::residual_csv(&nodes)?;
                let max = nodes.iter().map(|n| n.residual.abs()).fold(0.0, f64::max);
                let above = nodes.iter().filter(|n| n.residual.abs() >= *tol).count();
                let body = json!({
                    "functions": names,
                    "grid": grid,
                    "max_residual": max,
                    "tolerance": tol,
                    "nodes_above_tolerance": above,
                    "nodes": nodes,
                });
                Ok(Report::new(body, false)?.with_csv(csv))
            }
            _ => Err(input_error("invalid", "give exactly one of --dir and --grid")),
        },
        Command::AppendixProbe { n, v, t, seeds, tol } => {
            let p = AppendixParams::new(*n, *t, parse_floats(v)?)?;
            let r = appendix::dimension_probe(&p, *seeds, cli.seed)?;
            let bad = r.clusters.iter().any(|c| c.residual.is_nan() || c.residual >= *tol);
            let mut csv = csv_writer();
            write_row(&mut csv, ["a", "residual", "hits"])?;
            for c in &r.clusters {
                write_row(&mut csv, [joined(&c.a), c.residual.to_string(), c.hits.to_string()])?;
            }
            Ok(Report::new(r, bad)?.with_csv(finish_csv(csv)?))
        }
        Command::ProjectionCheck { dir, files } => {
            let v = parse_direction(dir)?;
            let bodies = load_all::<Polytope>(files)?;
            let r = mixed::projection_identities(&bodies, &v)?;
            let bad = !r.holds();
            Report::new(r, bad)
        }
    }
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let file = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(json!({ "kind": "io", "file": file, "message": e.to_string() })))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::Input(json!({
            "kind": "parse",
            "file": file,
            "line": e.line(),
            "column": e.column(),
            "message": e.to_string(),
        }))
    })
}

fn load_all<T: DeserializeOwned>(files: &[PathBuf]) -> Result<Vec<T>, Failure> {
    if files.is_empty() {
        return Err(Error::Empty.into());
    }
    files.iter().map(|f| load(f)).collect()
}

fn split(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim)
}

fn parse_rationals(s: &str) -> Result<RVec, Failure> {
    Ok(split(s).map(parse_rational).collect::<crate::Result<RVec>>()?)
}

fn parse_direction(s: &str) -> Result<Direction, Failure> {
    Ok(Direction::from_rationals(&parse_rationals(s)?)?)
}

fn parse_floats(s: &str) -> Result<Vec<f64>, Failure> {
    split(s)
        .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("invalid number {t:?}")).into()))
        .collect()
}

fn registry_all(names: &[String], dim: usize) -> Result<Vec<SmoothFunction>, Failure> {
    if names.is_empty() {
        return Err(Error::Empty.into());
    }
    names
        .iter()
        .map(|name| {
            SmoothFunction::registry(name, dim).ok_or_else(|| {
                input_error(
                    "unknown_function",
                    format!("no function {name:?} in dimension {dim}; known: {}", SmoothFunction::REGISTRY_NAMES.join(", ")),
                )
            })
        })
        .collect()
}

fn common_box(f: &PiecewiseAffineConvex, g: &PiecewiseAffineConvex) -> Result<Vec<(Rational, Rational)>, Failure> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: g.dim() }.into());
    }
    let d: Vec<_> = f
        .domain()
        .iter()
        .zip(g.domain())
        .map(|((a, b), (c, e))| (a.max(c).clone(), b.min(e).clone()))
        .collect();
    if d.iter().any(|(lo, hi)| lo >= hi) {
        return Err(input_error("invalid", "domain boxes do not overlap"));
    }
    Ok(d)
}

fn joined<T: ToString>(xs: &[T]) -> String {
    let mut s = String::new();
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{}", x.to_string());
    }
    s
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn write_row<I, S>(w: &mut csv::Writer<Vec<u8>>, row: I) -> Result<(), Failure>
where
    I: IntoIterator<Item = S>,
    S: AsRef<[u8]>,
{
    w.write_record(row).map_err(|e| input_error("serialize", e.to_string()))
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String, Failure> {
    let bytes = w.into_inner().map_err(|e| input_error("serialize", e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| input_error("serialize", e.to_string()))
}
