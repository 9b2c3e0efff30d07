//! The `lemni` command line: one job per invocation, described by a [`JobSpec`]
//! built from flags or read from a JSON job file.
//!
//! Reports are JSON (sorted keys, floats to 12 significant digits) embedding the
//! tool version, the fully resolved options and the seed. `trace` and `sphere`
//! can also draw SVG; `report` can write CSV. Exit codes: 0 on success, 2 for
//! invalid input, 3 for numerical failure, with a one-line JSON error on stderr.

pub mod output;
pub mod parse;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::extremal::{self, SearchOptions, SearchResult};
use crate::geometry::{self, HullCheck};
use crate::levelset::{self, LevelCurve, TraceOptions};
use crate::measure::{self, ComponentProjection, Disc, LengthReport, Line};
use crate::poly::MonicPolynomial;
use crate::spherical::{self, CircleOnSphere, PoincareEstimate, RationalFunction, SpherePoint, SphereTraceOptions};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Environment variable supplying the seed when none is given explicitly.
pub const SEED_ENV: &str = "LEMNI_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Trace,
    Length,
    Bounds,
    Search,
    Sphere,
    Report,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Svg,
}

/// One job. Polynomials are comma-separated complex literals; coefficients run
/// from the constant term up and must end in 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default)]
    pub roots: Option<String>,
    #[serde(default)]
    pub coeffs: Option<String>,
    /// Rational map for `sphere`.
    #[serde(default)]
    pub numerator: Option<String>,
    #[serde(default)]
    pub denominator: Option<String>,
    /// Overrides of module defaults; nested keys use dots (`trace.phase_step_max`).
    #[serde(default)]
    pub options: BTreeMap<String, String>,
    /// Standard output when absent.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            roots: None,
            coeffs: None,
            numerator: None,
            denominator: None,
            options: BTreeMap::new(),
            output: None,
            format: Format::Json,
            seed: None,
        }
    }

    pub fn with_roots(mut self, roots: &str) -> Self {
        self.roots = Some(roots.into());
        self
    }

    pub fn with_coeffs(mut self, coeffs: &str) -> Self {
        self.coeffs = Some(coeffs.into());
        self
    }

    pub fn with_option(mut self, key: &str, value: &str) -> Self {
        self.options.insert(key.into(), value.into());
        self
    }

    pub fn with_format(mut self, format: Format) -> Self {
        self.format = format;
        self
    }

    /// Explicit seed, else `LEMNI_SEED`, else 0.
    pub fn resolved_seed(&self) -> Result<u64> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))),
            Err(_) => Ok(0),
        }
    }

    fn polynomial(&self) -> Result<MonicPolynomial> {
        match (&self.roots, &self.coeffs) {
            (Some(r), None) => MonicPolynomial::from_roots(&parse::complex_list(r)?),
            (None, Some(c)) => MonicPolynomial::from_coefficients(&parse::complex_list(c)?),
            (Some(_), Some(_)) => Err(Error::InvalidInput("give either roots or coeffs, not both".into())),
            (None, None) => Err(Error::InvalidInput("a polynomial (roots or coeffs) is required".into())),
        }
    }

    fn validate(&self) -> Result<()> {
        let has_poly = self.roots.is_some() || self.coeffs.is_some();
        let has_rational = self.numerator.is_some() || self.denominator.is_some();
        match self.command {
            Command::Trace | Command::Length | Command::Bounds if has_rational => {
                return Err(Error::InvalidInput("numerator/denominator only apply to sphere".into()))
            }
            Command::Search | Command::Report if has_poly || has_rational => {
                return Err(Error::InvalidInput(format!("{:?} takes no polynomial", self.command).to_lowercase()))
            }
            Command::Sphere if has_poly => {
                return Err(Error::InvalidInput("sphere takes numerator/denominator, not roots/coeffs".into()))
            }
            _ => {}
        }
        let ok = match self.format {
            Format::Json => true,
            Format::Svg => matches!(self.command, Command::Trace | Command::Sphere),
            Format::Csv => self.command == Command::Report,
        };
        if !ok {
            return Err(Error::InvalidInput(format!("format {:?} is not available for this command", self.format).to_lowercase()));
        }
        Ok(())
    }
}

/// Apply `key=value` overrides to serialised defaults. Values are read as JSON
/// when they parse, otherwise as strings; unknown keys are rejected.
pub fn resolve_options<T: Serialize + DeserializeOwned>(defaults: &T, overrides: &BTreeMap<String, String>) -> Result<(T, Value)> {
    let mut v = serde_json::to_value(defaults).map_err(|e| Error::InvalidInput(e.to_string()))?;
    for (key, raw) in overrides {
        let slot = key
            .split('.')
            .try_fold(&mut v, |node, part| node.get_mut(part))
            .ok_or_else(|| Error::InvalidInput(format!("unknown option `{key}`")))?;
        *slot = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.clone()));
    }
    let resolved: T = serde_json::from_value(v).map_err(|e| Error::InvalidInput(format!("bad option value: {e}")))?;
    let echo = serde_json::to_value(&resolved).map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok((resolved, echo))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct LengthJob {
    pub tol: f64,
    pub crofton_grid: usize,
    pub trace: TraceOptions,
}

impl Default for LengthJob {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            crofton_grid: measure::REPORT_CROFTON_GRID,
            trace: TraceOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct BoundsJob {
    /// Random lines for the crossing-count check.
    pub lines: usize,
    /// Sublevels `M` for Cartan covers.
    pub levels: Vec<f64>,
    pub trace: TraceOptions,
}

impl Default for BoundsJob {
    fn default() -> Self {
        Self {
            lines: 1000,
            levels: vec![0.25, 1.0, 4.0],
            trace: TraceOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchJob {
    pub degree: usize,
    pub budget: usize,
    pub initial_step: f64,
}

impl Default for SearchJob {
    fn default() -> Self {
        Self {
            degree: 2,
            budget: 2000,
            initial_step: SearchOptions::default().initial_step,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SphereJob {
    pub circle: CircleOnSphere,
    /// Monte-Carlo samples for the Poincaré estimate.
    pub samples: usize,
    pub trace: SphereTraceOptions,
}

impl Default for SphereJob {
    fn default() -> Self {
        Self {
            circle: CircleOnSphere::unit_circle(),
            samples: 10_000,
            trace: SphereTraceOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ReportJob {
    /// `zd+1` or `zd`.
    pub family: String,
    pub dmax: usize,
    pub tol: f64,
}

impl Default for ReportJob {
    fn default() -> Self {
        Self {
            family: "zd+1".into(),
            dmax: 6,
            tol: 1e-10,
        }
    }
}

#[derive(Serialize)]
struct Envelope<R: Serialize> {
    command: Command,
    version: &'static str,
    seed: u64,
    options: Value,
    input: Value,
    result: R,
}

#[derive(Serialize)]
struct PolyInput<'a> {
    roots: &'a [Complex64],
    coefficients: &'a [Complex64],
}

#[derive(Serialize)]
struct TraceResult {
    degree: usize,
    component_count: usize,
    vertex_count: usize,
    polyline_length: f64,
    monodromy: Vec<usize>,
    monodromy_cycles: Vec<Vec<usize>>,
    monodromy_perturbed: bool,
    critical_phases: Vec<f64>,
    touch_points: Vec<Complex64>,
    resolved_spatial_step: f64,
    resolved_max_deviation: f64,
    components: Vec<Vec<Complex64>>,
}

#[derive(Serialize)]
struct LengthResult {
    #[serde(flatten)]
    report: LengthReport,
    hull: HullCheck,
    quadrature_panels: usize,
    quadrature_evaluations: usize,
}

#[derive(Serialize)]
struct LineSuite {
    lines: usize,
    max_count: usize,
    bound: usize,
    within_bound: bool,
    perturbed: usize,
}

#[derive(Serialize)]
struct ProjectionSuite {
    holds: bool,
    components: Vec<ComponentProjection>,
}

#[derive(Serialize)]
struct CartanEntry {
    level: f64,
    total_radius: f64,
    bound: f64,
    certificate_holds: bool,
    discs: Vec<Disc>,
}

#[derive(Serialize)]
struct BoundsResult {
    degree: usize,
    component_count: usize,
    line_intersections: LineSuite,
    projection_corollary: ProjectionSuite,
    hull: HullCheck,
    cartan: Vec<CartanEntry>,
}

#[derive(Serialize)]
struct SearchReport {
    #[serde(flatten)]
    result: SearchResult,
    candidate_length: f64,
    margin: f64,
}

#[derive(Serialize)]
struct SphereResult {
    degree: usize,
    component_count: usize,
    vertex_count: usize,
    spherical_length: f64,
    bound: f64,
    satisfies_theorem2: bool,
    poincare: PoincareEstimate,
    critical_phases: Vec<f64>,
    touch_points: Vec<SpherePoint>,
}

/// One row of the `report` sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub d: usize,
    pub length: f64,
    pub length_over_d: f64,
    pub bound_alpha0_d: f64,
    pub connected: bool,
    pub max_crit_dist: f64,
}

#[derive(Serialize)]
struct SweepResult {
    family: String,
    rows: Vec<ReportRow>,
}

fn envelope<R: Serialize>(spec: &JobSpec, seed: u64, options: Value, input: Value, result: R) -> Result<String> {
    output::to_json(&Envelope {
        command: spec.command,
        version: VERSION,
        seed,
        options,
        input,
        result,
    })
}

fn poly_input(p: &MonicPolynomial) -> Value {
    serde_json::to_value(PolyInput {
        roots: p.roots(),
        coefficients: p.coefficients(),
    })
    .expect("serialisable input")
}

fn trace_result(curve: &LevelCurve, opts: &TraceOptions, p: &MonicPolynomial) -> TraceResult {
    TraceResult {
        degree: curve.degree,
        component_count: curve.component_count(),
        vertex_count: curve.vertex_count(),
        polyline_length: measure::length_polyline(curve),
        monodromy: curve.monodromy.clone(),
        monodromy_cycles: curve.monodromy_cycles(),
        monodromy_perturbed: curve.monodromy_perturbed,
        critical_phases: curve.critical_phases.clone(),
        touch_points: curve.touch_points.clone(),
        resolved_spatial_step: opts.resolved_spatial_step(p),
        resolved_max_deviation: opts.resolved_max_deviation(p),
        components: curve.polylines(),
    }
}

/// Sweep over `z^d + 1` (or `z^d`) for `d = 1..=dmax`.
pub fn sweep(family: &str, dmax: usize, tol: f64) -> Result<Vec<ReportRow>> {
    let constant = match family {
        "zd+1" => 1.0,
        "zd" => 0.0,
        other => return Err(Error::InvalidInput(format!("unknown family `{other}` (expected zd+1 or zd)"))),
    };
    if !(1..=crate::poly::MAX_DEGREE).contains(&dmax) {
        return Err(Error::InvalidInput(format!("dmax must be in 1..={}", crate::poly::MAX_DEGREE)));
    }
    (1..=dmax)
        .map(|d| {
            let p = MonicPolynomial::power_plus(d, Complex64::new(constant, 0.0))?;
            let length = measure::length_integral(&p, tol)?;
            let max_crit_dist = if d >= 2 {
                extremal::critical_value_report(&p)?.first().copied().unwrap_or(0.0)
            } else {
                0.0
            };
            Ok(ReportRow {
                d,
                length,
                length_over_d: length / d as f64,
                bound_alpha0_d: measure::alpha0_bound() * d as f64,
                connected: levelset::is_connected(&p)?,
                max_crit_dist,
            })
        })
        .collect()
}

/// Random lines meeting the disc of radius `radius` about `centre`.
pub fn random_lines(count: usize, centre: Complex64, radius: f64, seed: u64) -> Vec<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let theta = rng.random_range(0.0..std::f64::consts::PI);
            let offset = centre.re * theta.cos() + centre.im * theta.sin();
            Line::new(theta, offset + rng.random_range(-radius..radius))
        })
        .collect()
}

/// Run a job and return the artifact text.
pub fn execute(spec: &JobSpec) -> Result<String> {
    spec.validate()?;
    let seed = spec.resolved_seed()?;
    match spec.command {
        Command::Trace => {
            let p = spec.polynomial()?;
            let (opts, echo) = resolve_options(&TraceOptions::default(), &spec.options)?;
            let curve = levelset::trace(&p, &opts)?;
            match spec.format {
                Format::Svg => Ok(output::level_curve_svg(&curve)),
                _ => envelope(spec, seed, echo, poly_input(&p), trace_result(&curve, &opts, &p)),
            }
        }
        Command::Length => {
            let p = spec.polynomial()?;
            let (job, echo) = resolve_options(&LengthJob::default(), &spec.options)?;
            if job.tol <= 0.0 {
                return Err(Error::InvalidInput("tol must be positive".into()));
            }
            let curve = levelset::trace(&p, &job.trace)?;
            let exact = measure::length_integral_detailed(&p, job.tol)?;
            let crofton = measure::crofton_length(&curve, job.crofton_grid, job.crofton_grid)?;
            let mut report = measure::report_for(&p, &curve, job.tol)?;
            report.crofton = crofton.length;
            report.crofton_stderr = crofton.stderr;
            let result = LengthResult {
                report,
                hull: geometry::hull_check(&curve),
                quadrature_panels: exact.panels,
                quadrature_evaluations: exact.evaluations,
            };
            envelope(spec, seed, echo, poly_input(&p), result)
        }
        Command::Bounds => {
            let p = spec.polynomial()?;
            let (job, echo) = resolve_options(&BoundsJob::default(), &spec.options)?;
            let curve = levelset::trace(&p, &job.trace)?;
            let d = p.degree();
            let pts: Vec<Complex64> = curve.points().collect();
            let centre = pts.iter().sum::<Complex64>() / pts.len().max(1) as f64;
            let radius = pts.iter().map(|z| (z - centre).norm()).fold(0.0, f64::max) + 1e-9;
            let mut max_count = 0;
            let mut perturbed = 0;
            for line in random_lines(job.lines, centre, radius, seed) {
                let hit = measure::line_intersections(&curve, &line);
                max_count = max_count.max(hit.points.len());
                perturbed += usize::from(hit.perturbed);
            }
            let components = measure::projection_corollary(&curve, d);
            let cartan = job
                .levels
                .iter()
                .map(|&m| {
                    let cover = measure::cartan_cover(&p, m)?;
                    Ok(CartanEntry {
                        level: m,
                        total_radius: cover.total_radius,
                        bound: cover.bound,
                        certificate_holds: cover.certificate_holds(),
                        discs: cover.discs,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let result = BoundsResult {
                degree: d,
                component_count: curve.component_count(),
                line_intersections: LineSuite {
                    lines: job.lines,
                    max_count,
                    bound: 2 * d,
                    within_bound: max_count <= 2 * d,
                    perturbed,
                },
                projection_corollary: ProjectionSuite {
                    holds: components.iter().all(|c| c.projection_bound_holds && c.diameter_bound_holds),
                    components,
                },
                hull: geometry::hull_check(&curve),
                cartan,
            };
            envelope(spec, seed, echo, poly_input(&p), result)
        }
        Command::Search => {
            let (job, echo) = resolve_options(&SearchJob::default(), &spec.options)?;
            let opts = SearchOptions {
                budget: job.budget,
                seed,
                start: None,
                initial_step: job.initial_step,
            };
            let result = extremal::search_with(job.degree, &opts)?;
            let candidate = MonicPolynomial::power_plus(job.degree, Complex64::new(1.0, 0.0))?;
            let candidate_length = measure::length_integral(&candidate, extremal::REPORT_TOL)?;
            let margin = result.best_length - candidate_length;
            envelope(
                spec,
                seed,
                echo,
                Value::Null,
                SearchReport {
                    result,
                    candidate_length,
                    margin,
                },
            )
        }
        Command::Sphere => {
            let num = parse::complex_list(
                spec.numerator
                    .as_deref()
                    .ok_or_else(|| Error::InvalidInput("sphere needs a numerator".into()))?,
            )?;
            let den = parse::complex_list(spec.denominator.as_deref().unwrap_or("1"))?;
            let f = RationalFunction::new(&num, &den)?;
            let (job, echo) = resolve_options(&SphereJob::default(), &spec.options)?;
            let curve = spherical::preimage_trace_with(&f, &job.circle, &job.trace)?;
            if spec.format == Format::Svg {
                return Ok(output::spherical_curve_svg(&curve));
            }
            let poincare = spherical::poincare_length(&curve, job.samples, seed)?;
            let bound = std::f64::consts::TAU * f.degree() as f64;
            let input = serde_json::json!({
                "numerator": f.numerator(),
                "denominator": f.denominator(),
            });
            let result = SphereResult {
                degree: f.degree(),
                component_count: curve.component_count(),
                vertex_count: curve.vertex_count(),
                spherical_length: curve.spherical_length,
                bound,
                satisfies_theorem2: curve.spherical_length <= bound + 1e-3,
                poincare,
                critical_phases: curve.critical_phases.clone(),
                touch_points: curve.touch_points.clone(),
            };
            envelope(spec, seed, echo, input, result)
        }
        Command::Report => {
            let (job, echo) = resolve_options(&ReportJob::default(), &spec.options)?;
            let rows = sweep(&job.family, job.dmax, job.tol)?;
            match spec.format {
                Format::Csv => output::to_csv(&rows),
                _ => envelope(
                    spec,
                    seed,
                    echo,
                    Value::Null,
                    SweepResult {
                        family: job.family.clone(),
                        rows,
                    },
                ),
            }
        }
    }
}

/// Exit code for an error: 3 for numerical failures, 2 for everything else.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() {
        3
    } else {
        2
    }
}

/// The single-line JSON error record written to stderr.
pub fn error_json(err: &Error) -> String {
    let mut v = serde_json::json!({
        "error": if err.is_numerical() { "numerical" } else { "validation" },
        "stage": err.stage(),
        "message": err.to_string(),
    });
    match err {
        Error::Continuation { theta, .. } => v["theta"] = serde_json::json!(theta),
        Error::NoConvergence { w, residual, .. } => {
            v["w"] = serde_json::json!([w.re, w.im]);
            v["residual"] = serde_json::json!(residual);
        }
        Error::Quadrature { a, b, error } => v["panel"] = serde_json::json!([a, b, error]),
        _ => {}
    }
    serde_json::to_string(&v).expect("serialisable error")
}

/// Run a job, writing its artifact; returns the process exit code.
pub fn run(spec: &JobSpec) -> i32 {
    let result = execute(spec).and_then(|text| match &spec.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::InvalidInput(format!("cannot write to stdout: {e}"))),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            exit_code(&e)
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lemni", version, about = "Polynomial lemniscates: trace, measure, bound, search")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Args)]
struct Common {
    /// Option override, repeatable (`--set tol=1e-8`, `--set trace.reverse=true`).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output file (default: standard output).
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed (default: $LEMNI_SEED, else 0).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct PolyArgs {
    /// Roots, e.g. "i,-i".
    #[arg(long, allow_hyphen_values = true, conflicts_with = "coeffs")]
    roots: Option<String>,
    /// Coefficients from the constant term up, ending in 1, e.g. "1,0,0,1".
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Trace E(p) (JSON summary or SVG).
    Trace(PolyArgs),
    /// Length by the exact integral, polyline and Crofton estimators.
    Length(PolyArgs),
    /// Line-crossing, projection, hull and Cartan checks.
    Bounds(PolyArgs),
    /// Search for long lemniscates of a given degree.
    Search {
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Preimage of a circle under a rational map, on the sphere.
    Sphere {
        #[arg(long, allow_hyphen_values = true)]
        numerator: String,
        #[arg(long, allow_hyphen_values = true)]
        denominator: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep a family of polynomials (JSON or CSV).
    Report {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        dmax: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a JSON job file.
    Run { job: PathBuf },
}

fn apply_common(spec: &mut JobSpec, common: Common) -> Result<()> {
    for kv in common.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("--set expects KEY=VALUE, got `{kv}`")))?;
        spec.options.insert(k.trim().into(), v.trim().into());
    }
    spec.output = common.output;
    spec.format = common.format;
    spec.seed = common.seed;
    Ok(())
}

/// Build the job from command-line arguments (program name first).
pub fn spec_from_args<I, T>(args: I) -> std::result::Result<JobSpec, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    let to_spec = |sub: Sub| -> Result<JobSpec> {
        let (command, poly, common) = match sub {
            Sub::Trace(a) => (Command::Trace, Some((a.roots, a.coeffs)), a.common),
            Sub::Length(a) => (Command::Length, Some((a.roots, a.coeffs)), a.common),
            Sub::Bounds(a) => (Command::Bounds, Some((a.roots, a.coeffs)), a.common),
            Sub::Search { degree, budget, common } => {
                let mut spec = JobSpec::new(Command::Search);
                if let Some(d) = degree {
                    spec.options.insert("degree".into(), d.to_string());
                }
                if let Some(b) = budget {
                    spec.options.insert("budget".into(), b.to_string());
                }
                apply_common(&mut spec, common)?;
                return Ok(spec);
            }
            Sub::Sphere {
                numerator,
                denominator,
                common,
            } => {
                let mut spec = JobSpec::new(Command::Sphere);
                spec.numerator = Some(numerator);
                spec.denominator = denominator;
                apply_common(&mut spec, common)?;
                return Ok(spec);
            }
            Sub::Report { family, dmax, common } => {
                let mut spec = JobSpec::new(Command::Report);
                if let Some(f) = family {
                    spec.options.insert("family".into(), f);
                }
                if let Some(d) = dmax {
                    spec.options.insert("dmax".into(), d.to_string());
                }
                apply_common(&mut spec, common)?;
                return Ok(spec);
            }
            Sub::Run { job } => {
                let text = std::fs::read_to_string(&job)
                    .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", job.display())))?;
                return serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("bad job file: {e}")));
            }
        };
        let mut spec = JobSpec::new(command);
        if let Some((roots, coeffs)) = poly {
            spec.roots = roots;
            spec.coeffs = coeffs;
        }
        apply_common(&mut spec, common)?;
        Ok(spec)
    };
    to_spec(cli.command).map_err(|e| clap::Error::raw(clap::error::ErrorKind::ValueValidation, e.to_string()))
}

/// Entry point for the binary: parse, run, and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match spec_from_args(args) {
        Ok(spec) => run(&spec),
        Err(e) => match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                print!("{e}");
                0
            }
            _ => {
                let message = e.to_string();
                let line = message.lines().find(|l| !l.trim().is_empty()).unwrap_or("usage error");
                let v = serde_json::json!({"error": "validation", "stage": "arguments", "message": line.trim()});
                eprintln!("{v}");
                2
            }
        },
    }
}
