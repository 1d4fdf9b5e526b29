//! Preset experiments and the file-producing front ends used by the CLI.
//!
//! Point identifiers are 0-based: the string impulse sits at id 4, the
//! fifth point.
//!
//! | preset  | space          | coefficients                       | data (id: value)     | steps |
//! |---------|----------------|------------------------------------|----------------------|-------|
//! | exp_4_1 | two_point      | c00=.8 c01=.3 c10=.2 c11=.7        | f0 {0:2}, f1 {0:2}   | 50    |
//! | exp_4_2 | string_disk(10)| c(i,i+1)=.3 c(i,i-1)=.4, see below | f0 {4:10}, f1 {4:10} | 50    |
//! | exp_4_3 | klein16        | uniform 0.1                        | f0 {7:16}, f1 {9:16} | 100   |
//! | exp_4_4 | projective11   | uniform 0.1                        | f0 {9:11}, f1 {10:11}| 100   |
//! | exp_4_5 | sphere4_min    | uniform 0.01                       | f0 {5:10}, f1 {6:10} | 400   |
//!
//! The string diagonal completes each column to 1: 0.3 inside, 0.6 and 0.7
//! at the clamped endpoints 0 and 9.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::analysis::{self, closed_form_period, conservation_report, estimate_period};
use crate::catalog::{catalog, CatalogError, CatalogName};
use crate::config::{ConfigError, ProblemConfig};
use crate::graph::{Graph, PointFunction};
use crate::solver::{
    self, uniform_scheme, validate_scheme, BoundaryCondition, Prescription, ProblemSpec, Scheme,
    SchemeClass, SchemeError, SolverError, Trace,
};
use crate::topology::{self, TopologyError};

/// Cycles required in the autocorrelation window of preset period checks.
pub const PERIOD_MIN_CYCLES: usize = 2;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("unknown preset `{0}` (expected exp_4_1 .. exp_4_5)")]
    UnknownPreset(String),
    #[error("bad override `{0}`: {1}")]
    BadOverride(String, String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("cannot resolve `{0}` as a graph file or catalog name")]
    Target(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PresetName {
    TwoPoint,
    String,
    Klein,
    Projective,
    Sphere4,
}

impl PresetName {
    pub const ALL: [PresetName; 5] = [
        PresetName::TwoPoint,
        PresetName::String,
        PresetName::Klein,
        PresetName::Projective,
        PresetName::Sphere4,
    ];
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PresetName::TwoPoint => "exp_4_1",
            PresetName::String => "exp_4_2",
            PresetName::Klein => "exp_4_3",
            PresetName::Projective => "exp_4_4",
            PresetName::Sphere4 => "exp_4_5",
        })
    }
}

impl FromStr for PresetName {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PresetName::ALL
            .into_iter()
            .find(|p| p.to_string() == s)
            .ok_or_else(|| ExperimentError::UnknownPreset(s.to_string()))
    }
}

/// A property the preset's trace must have.
#[derive(Clone, Debug, PartialEq)]
pub enum Check {
    /// `|S^n - target| < tol` for every `n`.
    Conservation { target: f64, tol: f64 },
    /// Autocorrelation period at `point` within `rel_tol` of `target`.
    Period {
        point: usize,
        target: f64,
        rel_tol: f64,
    },
    /// Autocorrelation period at `point` exceeds `bound`.
    PeriodAbove { point: usize, bound: f64 },
    /// No value exceeds `factor` times the largest initial magnitude.
    Bounded { factor: f64 },
    /// The points hold exactly zero at every step.
    ClampedZero { points: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{}: {verdict} ({})", self.label, self.detail)
    }
}

impl Check {
    pub fn evaluate(&self, trace: &Trace, problem: &ProblemSpec) -> CheckOutcome {
        match self {
            Check::Conservation { target, tol } => {
                let worst = trace
                    .sums()
                    .iter()
                    .fold(0.0, |m: f64, s| m.max((s - target).abs()));
                CheckOutcome {
                    label: format!("conservation(A={target})"),
                    passed: worst < *tol,
                    detail: format!("max |S^n - A| = {worst:e}, tol {tol:e}"),
                }
            }
            Check::Period {
                point,
                target,
                rel_tol,
            } => {
                let label = format!("period(p{point}~{target:.4})");
                match estimate_period(&trace.series(*point), PERIOD_MIN_CYCLES) {
                    Ok(est) => {
                        let rel = (est.period - target).abs() / target;
                        CheckOutcome {
                            label,
                            passed: rel < *rel_tol,
                            detail: format!("estimate {:.4}, relative error {rel:.2e}", est.period),
                        }
                    }
                    Err(e) => CheckOutcome {
                        label,
                        passed: false,
                        detail: e.to_string(),
                    },
                }
            }
            Check::PeriodAbove { point, bound } => {
                let label = format!("period(p{point})>{bound}");
                match estimate_period(&trace.series(*point), PERIOD_MIN_CYCLES) {
                    Ok(est) => CheckOutcome {
                        label,
                        passed: est.period > *bound && est.residual.is_finite(),
                        detail: format!(
                            "estimate {:.4}, residual {:.3e}",
                            est.period, est.residual
                        ),
                    },
                    Err(e) => CheckOutcome {
                        label,
                        passed: false,
                        detail: e.to_string(),
                    },
                }
            }
            Check::Bounded { factor } => {
                let initial = problem
                    .f0
                    .values()
                    .iter()
                    .chain(problem.f1.values())
                    .fold(0.0, |m: f64, x| m.max(x.abs()));
                let peak = trace.max_abs();
                CheckOutcome {
                    label: format!("bounded({factor}x)"),
                    passed: peak <= factor * initial,
                    detail: format!("max |f| = {peak}, initial max {initial}"),
                }
            }
            Check::ClampedZero { points } => {
                let bad = points
                    .iter()
                    .flat_map(|&p| trace.series(p).into_iter().map(move |x| (p, x)))
                    .find(|&(_, x)| x.to_bits() != 0.0f64.to_bits());
                CheckOutcome {
                    label: format!("clamped{points:?}"),
                    passed: bad.is_none(),
                    detail: match bad {
                        None => "identically 0".into(),
                        Some((p, x)) => format!("point {p} took {x}"),
                    },
                }
            }
        }
    }
}

/// Problem plus the checks that decide the exit status.
#[derive(Clone, Debug)]
pub struct ExperimentPreset {
    pub name: PresetName,
    pub problem: ProblemSpec,
    pub checks: Vec<Check>,
    /// Points whose periods are reported.
    pub observe: Vec<usize>,
}

/// A `key=value` change to a preset.
#[derive(Clone, Debug, PartialEq)]
pub enum Override {
    Steps(usize),
    /// Edge weight of a uniform scheme.
    Weight(f64),
    F0(usize, f64),
    F1(usize, f64),
    ClearF0,
    ClearF1,
    Boundary(usize, f64),
}

impl FromStr for Override {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| ExperimentError::BadOverride(s.to_string(), why.to_string());
        let (key, value) = s.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        let (key, value) = (key.trim(), value.trim());
        let num = |v: &str| v.parse::<f64>().map_err(|_| bad("value is not a number"));
        let point = |p: &str| {
            p.parse::<usize>()
                .map_err(|_| bad("point is not an integer"))
        };
        match key.split_once('.') {
            None => match (key, value) {
                ("steps", v) => v
                    .parse()
                    .map(Override::Steps)
                    .map_err(|_| bad("steps must be a nonnegative integer")),
                ("weight", v) => num(v).map(Override::Weight),
                ("f0", "zero") => Ok(Override::ClearF0),
                ("f1", "zero") => Ok(Override::ClearF1),
                _ => Err(bad("unknown key")),
            },
            Some(("f0", p)) => Ok(Override::F0(point(p)?, num(value)?)),
            Some(("f1", p)) => Ok(Override::F1(point(p)?, num(value)?)),
            Some(("bc", p)) => Ok(Override::Boundary(point(p)?, num(value)?)),
            Some(_) => Err(bad("unknown key")),
        }
    }
}

/// Column-stochastic string scheme: 0.3 toward the next point, 0.4 toward
/// the previous one, diagonal completing each column.
pub fn string_scheme(graph: Arc<Graph>) -> Result<Scheme, SchemeError> {
    let n = graph.n_points();
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        if i + 1 < n {
            c[i][i + 1] = 0.3;
        }
        if i > 0 {
            c[i][i - 1] = 0.4;
        }
    }
    let off: Vec<f64> = (0..n)
        .map(|k| (0..n).filter(|&p| p != k).map(|p| c[p][k]).sum())
        .collect();
    for (k, row) in c.iter_mut().enumerate() {
        row[k] = 1.0 - off[k];
    }
    validate_scheme(graph, &c, SchemeClass::Wave)
}

struct Raw {
    space: CatalogName,
    weight: Option<f64>,
    f0: Vec<(usize, f64)>,
    f1: Vec<(usize, f64)>,
    boundary: Vec<(usize, f64)>,
    steps: usize,
    observe: Vec<usize>,
}

fn raw(name: PresetName) -> Raw {
    match name {
        PresetName::TwoPoint => Raw {
            space: CatalogName::TwoPoint,
            weight: None,
            f0: vec![(0, 2.0)],
            f1: vec![(0, 2.0)],
            boundary: vec![],
            steps: 50,
            observe: vec![0, 1],
        },
        PresetName::String => Raw {
            space: CatalogName::StringDisk(10),
            weight: None,
            f0: vec![(4, 10.0)],
            f1: vec![(4, 10.0)],
            boundary: vec![(0, 0.0), (9, 0.0)],
            steps: 50,
            observe: vec![4],
        },
        PresetName::Klein => Raw {
            space: CatalogName::Klein16,
            weight: Some(0.1),
            f0: vec![(7, 16.0)],
            f1: vec![(9, 16.0)],
            boundary: vec![],
            steps: 100,
            observe: vec![0, 2],
        },
        PresetName::Projective => Raw {
            space: CatalogName::Projective11,
            weight: Some(0.1),
            f0: vec![(9, 11.0)],
            f1: vec![(10, 11.0)],
            boundary: vec![],
            steps: 100,
            observe: vec![0, 1],
        },
        PresetName::Sphere4 => Raw {
            space: CatalogName::Sphere4Min,
            weight: Some(0.01),
            f0: vec![(5, 10.0)],
            f1: vec![(6, 10.0)],
            boundary: vec![],
            steps: 400,
            observe: vec![0, 1],
        },
    }
}

impl ExperimentPreset {
    pub fn new(name: PresetName) -> Result<Self, ExperimentError> {
        Self::with_overrides(name, &[])
    }

    pub fn with_overrides(
        name: PresetName,
        overrides: &[Override],
    ) -> Result<Self, ExperimentError> {
        let mut r = raw(name);
        for o in overrides {
            match *o {
                Override::Steps(n) => r.steps = n,
                Override::Weight(w) => {
                    if r.weight.is_none() {
                        return Err(ExperimentError::BadOverride(
                            format!("weight={w}"),
                            format!("{name} does not use a uniform scheme"),
                        ));
                    }
                    r.weight = Some(w);
                }
                Override::F0(p, x) => r.f0.push((p, x)),
                Override::F1(p, x) => r.f1.push((p, x)),
                Override::ClearF0 => r.f0.clear(),
                Override::ClearF1 => r.f1.clear(),
                Override::Boundary(p, x) => {
                    r.boundary.retain(|&(q, _)| q != p);
                    r.boundary.push((p, x));
                }
            }
        }
        let graph = Arc::new(catalog(r.space)?.graph);
        let n = graph.n_points();
        let scheme = match (name, r.weight) {
            (_, Some(w)) => uniform_scheme(graph, w)?,
            (PresetName::TwoPoint, None) => {
                validate_scheme(graph, &[vec![0.8, 0.3], vec![0.2, 0.7]], SchemeClass::Wave)?
            }
            (_, None) => string_scheme(graph)?,
        };
        let scheme = Arc::new(scheme);
        let sparse = |entries: &[(usize, f64)]| {
            PointFunction::from_sparse(n, entries)
                .map_err(|e| ExperimentError::BadOverride(format!("{entries:?}"), e.to_string()))
        };
        let boundary: Vec<BoundaryCondition> = r
            .boundary
            .iter()
            .map(|&(point, x)| BoundaryCondition {
                point,
                values: Prescription::Constant(x),
            })
            .collect();
        let problem = ProblemSpec::new(
            Arc::clone(&scheme),
            sparse(&r.f0)?,
            sparse(&r.f1)?,
            boundary,
            r.steps,
        )?;

        let mut checks = Vec::new();
        let (s0, s1) = (problem.f0.sum(), problem.f1.sum());
        if problem.boundary.is_empty() && s0 == s1 {
            checks.push(Check::Conservation {
                target: s0,
                tol: 1e-9,
            });
        }
        if name == PresetName::TwoPoint {
            if let Ok(t) = closed_form_period(scheme.coeff(0, 0), scheme.coeff(0, 1)) {
                checks.push(Check::Period {
                    point: 0,
                    target: t.period,
                    rel_tol: 0.01,
                });
            }
        } else {
            checks.push(Check::PeriodAbove {
                point: r.observe[0],
                bound: 2.0,
            });
        }
        checks.push(Check::Bounded { factor: 10.0 });
        let clamped: Vec<usize> = r
            .boundary
            .iter()
            .filter(|&&(_, x)| x == 0.0)
            .map(|&(p, _)| p)
            .collect();
        if !clamped.is_empty() {
            checks.push(Check::ClampedZero { points: clamped });
        }

        Ok(Self {
            name,
            problem,
            checks,
            observe: r.observe,
        })
    }

    pub fn run(&self) -> Result<Trace, ExperimentError> {
        Ok(solver::run(&self.problem)?)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct OutputOptions {
    /// Also write a whitespace-separated `.dat` table.
    pub gnuplot: bool,
    /// Also write `(lag, autocorrelation)` CSVs for the observed points.
    pub acf: bool,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub checks: Vec<CheckOutcome>,
    pub report: String,
    pub files: Vec<PathBuf>,
}

impl ExperimentOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Text report: conservation, per-point periods and check verdicts.
pub fn experiment_report(
    preset: &ExperimentPreset,
    trace: &Trace,
    checks: &[CheckOutcome],
) -> String {
    let mut out = format!(
        "preset={}\nkind={}\nclass={}\nsteps={}\n",
        preset.name,
        trace.kind(),
        trace.scheme().class(),
        trace.steps()
    );
    out.push_str(&conservation_report(trace).to_string());
    for &p in &preset.observe {
        match estimate_period(&trace.series(p), PERIOD_MIN_CYCLES) {
            Ok(est) => out.push_str(&format!(
                "period.p{p}={}\nresidual.p{p}={}\n",
                est.period, est.residual
            )),
            Err(e) => out.push_str(&format!("period.p{p}=none ({e})\n")),
        }
    }
    for c in checks {
        out.push_str(&format!("check {c}\n"));
    }
    out
}

/// Runs a preset and writes `<name>.csv` and `<name>_report.txt` (plus the
/// optional extras) into `out_dir`.
pub fn run_experiment(
    name: PresetName,
    overrides: &[Override],
    out_dir: &Path,
    options: OutputOptions,
) -> Result<ExperimentOutcome, ExperimentError> {
    let preset = ExperimentPreset::with_overrides(name, overrides)?;
    let trace = preset.run()?;
    let checks: Vec<CheckOutcome> = preset
        .checks
        .iter()
        .map(|c| c.evaluate(&trace, &preset.problem))
        .collect();
    let report = experiment_report(&preset, &trace, &checks);

    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut files = Vec::new();
    let csv = out_dir.join(format!("{name}.csv"));
    fs::write(&csv, trace.to_csv_string()).map_err(io_err(&csv))?;
    files.push(csv);
    let rep = out_dir.join(format!("{name}_report.txt"));
    fs::write(&rep, &report).map_err(io_err(&rep))?;
    files.push(rep);
    if options.gnuplot {
        let dat = out_dir.join(format!("{name}.dat"));
        let mut buf = Vec::new();
        trace.write_gnuplot(&mut buf).map_err(io_err(&dat))?;
        fs::write(&dat, buf).map_err(io_err(&dat))?;
        files.push(dat);
    }
    if options.acf {
        for &p in &preset.observe {
            let series = trace.series(p);
            let path = out_dir.join(format!("{name}_acf_p{p}.csv"));
            let body = analysis::autocorrelation_csv(&series, series.len() / PERIOD_MIN_CYCLES);
            fs::write(&path, body).map_err(io_err(&path))?;
            files.push(path);
        }
    }
    Ok(ExperimentOutcome {
        checks,
        report,
        files,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveSummary {
    pub steps: usize,
    pub points: usize,
    pub a: f64,
    pub max_dev: f64,
}

impl fmt::Display for SolveSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "steps={} points={} A={} max_dev={:e}",
            self.steps, self.points, self.a, self.max_dev
        )
    }
}

/// Runs the problem described by a JSON config and writes the trace.
pub fn solve(config: &Path, out: &Path, gnuplot: bool) -> Result<SolveSummary, ExperimentError> {
    let problem = ProblemConfig::from_path(config)?.build_problem()?;
    let trace = solver::run(&problem)?;
    let mut buf = Vec::new();
    if gnuplot {
        trace.write_gnuplot(&mut buf).map_err(io_err(out))?;
    } else {
        trace.write_csv(&mut buf).map_err(io_err(out))?;
    }
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    fs::write(out, buf).map_err(io_err(out))?;
    let report = conservation_report(&trace);
    Ok(SolveSummary {
        steps: trace.steps(),
        points: trace.graph().n_points(),
        a: report.a,
        max_dev: report.max_dev,
    })
}

/// A topology question asked of a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TopologyCheck {
    Sphere(usize),
    Manifold(usize),
    Contractible,
    Orientable,
    Euler,
}

/// One line of `topology check` output. `passed` is `None` for purely
/// informational lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictLine {
    pub text: String,
    pub passed: Option<bool>,
}

/// Loads a graph from a text file, or else from the catalog.
pub fn resolve_target(target: &str) -> Result<Graph, ExperimentError> {
    let path = Path::new(target);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        return Graph::parse_text(&text)
            .map_err(|e| ExperimentError::Topology(TopologyError::Graph(e)));
    }
    match target.parse::<CatalogName>() {
        Ok(name) => Ok(catalog(name)?.graph),
        Err(_) => Err(ExperimentError::Target(target.to_string())),
    }
}

pub fn topology_check(
    graph: &Graph,
    checks: &[TopologyCheck],
) -> Result<Vec<VerdictLine>, ExperimentError> {
    let verdict = |label: String, ok: bool| VerdictLine {
        text: format!("{label}: {}", if ok { "PASS" } else { "FAIL" }),
        passed: Some(ok),
    };
    checks
        .iter()
        .map(|c| {
            Ok(match *c {
                TopologyCheck::Sphere(n) => {
                    verdict(format!("sphere({n})"), topology::is_n_sphere(graph, n)?)
                }
                TopologyCheck::Manifold(n) => {
                    verdict(format!("manifold({n})"), topology::is_n_manifold(graph, n)?)
                }
                TopologyCheck::Contractible => {
                    verdict("contractible".into(), topology::is_contractible(graph)?)
                }
                TopologyCheck::Orientable => VerdictLine {
                    text: format!("orientable: {}", topology::is_orientable(graph)?),
                    passed: None,
                },
                TopologyCheck::Euler => VerdictLine {
                    text: format!("euler: {}", graph.euler_characteristic()),
                    passed: None,
                },
            })
        })
        .collect()
}
