//! Explicit time stepping of the hyperbolic equation on a graph.
//!
//! With a coefficient matrix `C` supported on the balls of the graph, one
//! step maps `(f^{n-1}, f^n)` to
//!
//! ```text
//! f^{n+1}_p = sum_k C[p][k] f^n_k + f^n_p - f^{n-1}_p
//! ```
//!
//! Schemes of the wave class are nonnegative with unit column sums, which
//! makes `sum_p f^n_p` evolve as `S^{n+1} = 2 S^n - S^{n-1}`.

use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{Graph, PointFunction};

/// Tolerance on wave-class column sums.
pub const COLUMN_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchemeError {
    #[error("coefficient array is {rows}x{cols}, graph has {points} points")]
    Dimension {
        rows: usize,
        cols: usize,
        points: usize,
    },
    #[error("c[{p}][{k}] = {value} but points {p} and {k} are not adjacent")]
    Sparsity { p: usize, k: usize, value: f64 },
    #[error("c[{p}][{k}] = {value} is negative")]
    Negative { p: usize, k: usize, value: f64 },
    #[error("column {column} sums to {sum}, expected 1")]
    ColumnSum { column: usize, sum: f64 },
    #[error("c[{p}][{k}] is not finite")]
    NonFinite { p: usize, k: usize },
    #[error("edge weight {0} must be finite and nonnegative")]
    EdgeWeight(f64),
    #[error("diagonal at point {point} would be {value}")]
    NegativeDiagonal { point: usize, value: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("{what} has {len} values, graph has {points} points")]
    Misaligned {
        what: &'static str,
        len: usize,
        points: usize,
    },
    #[error("boundary point {0} is not in the graph")]
    UnknownBoundaryPoint(usize),
    #[error("boundary point {point}: prescribed {len} values, need {needed}")]
    ShortPrescription {
        point: usize,
        len: usize,
        needed: usize,
    },
    #[error("initial value problem must not have boundary points")]
    UnexpectedBoundary,
    #[error("boundary value problem needs at least one boundary point")]
    MissingBoundary,
    #[error("step {n} out of range 0..={last}")]
    StepOutOfRange { n: usize, last: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemeClass {
    /// Any coefficients supported on the balls of the graph.
    Hyperbolic,
    /// Nonnegative, unit column sums.
    Wave,
}

impl fmt::Display for SchemeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeClass::Hyperbolic => "hyperbolic",
            SchemeClass::Wave => "wave",
        })
    }
}

/// Validated, time-constant coefficients on a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Scheme {
    graph: Arc<Graph>,
    /// Row-major `n x n`.
    coeffs: Vec<f64>,
    /// Per row, `(k, c_pk)` over the ball of `p` in ascending `k`.
    rows: Vec<Vec<(usize, f64)>>,
    class: SchemeClass,
}

impl Scheme {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shared_graph(&self) -> Arc<Graph> {
        Arc::clone(&self.graph)
    }

    pub fn class(&self) -> SchemeClass {
        self.class
    }

    pub fn n_points(&self) -> usize {
        self.rows.len()
    }

    pub fn coeff(&self, p: usize, k: usize) -> f64 {
        self.coeffs[p * self.n_points() + k]
    }

    /// The coefficient matrix as rows.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.coeffs
            .chunks(self.n_points().max(1))
            .take(self.n_points())
            .map(<[f64]>::to_vec)
            .collect()
    }

    /// `(C - I) f` in flux form: each off-diagonal product `c_pk f_k` is
    /// computed once, added at `p` and taken from `k`. Only valid for wave
    /// schemes, where the diagonal is `1 - sum_{q != k} c_qk`. The second
    /// vector holds the rounding error of each accumulated entry.
    fn exchange(&self, f: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut delta = vec![0.0; f.len()];
        let mut err = vec![0.0; f.len()];
        for (p, row) in self.rows.iter().enumerate() {
            for &(k, c) in row.iter().filter(|&&(k, _)| k != p) {
                let flux = c * f[k];
                let (s, e) = two_sum(delta[p], flux);
                delta[p] = s;
                err[p] += e;
                let (s, e) = two_sum(delta[k], -flux);
                delta[k] = s;
                err[k] += e;
            }
        }
        (delta, err)
    }

    /// `sum_k c_pk f_k` for every `p`, summed in ascending `k`.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(k, c)| c * f[k]).sum())
            .collect()
    }
}

/// Checks `coefficients` against the graph and the requested class.
pub fn validate_scheme(
    graph: Arc<Graph>,
    coefficients: &[Vec<f64>],
    class: SchemeClass,
) -> Result<Scheme, SchemeError> {
    let n = graph.n_points();
    if coefficients.len() != n {
        return Err(SchemeError::Dimension {
            rows: coefficients.len(),
            cols: coefficients.first().map_or(0, Vec::len),
            points: n,
        });
    }
    if let Some(bad) = coefficients.iter().find(|r| r.len() != n) {
        return Err(SchemeError::Dimension {
            rows: n,
            cols: bad.len(),
            points: n,
        });
    }
    for (p, row) in coefficients.iter().enumerate() {
        for (k, &value) in row.iter().enumerate() {
            if !value.is_finite() {
                return Err(SchemeError::NonFinite { p, k });
            }
            if p != k && value != 0.0 && !graph.has_edge(p, k) {
                return Err(SchemeError::Sparsity { p, k, value });
            }
            if class == SchemeClass::Wave && value < 0.0 {
                return Err(SchemeError::Negative { p, k, value });
            }
        }
    }
    if class == SchemeClass::Wave {
        for column in 0..n {
            let sum: f64 = coefficients.iter().map(|row| row[column]).sum();
            if (sum - 1.0).abs() > COLUMN_SUM_TOLERANCE {
                return Err(SchemeError::ColumnSum { column, sum });
            }
        }
    }
    let rows = (0..n)
        .map(|p| {
            let mut ball: Vec<usize> = graph.neighbors(p).to_vec();
            let at = ball.partition_point(|&q| q < p);
            ball.insert(at, p);
            ball.into_iter().map(|k| (k, coefficients[p][k])).collect()
        })
        .collect();
    Ok(Scheme {
        graph,
        coeffs: coefficients.concat(),
        rows,
        class,
    })
}

/// Symmetric wave scheme with `edge_weight` on every edge and
/// `1 - degree * edge_weight` on the diagonal.
pub fn uniform_scheme(graph: Arc<Graph>, edge_weight: f64) -> Result<Scheme, SchemeError> {
    if !edge_weight.is_finite() || edge_weight < 0.0 {
        return Err(SchemeError::EdgeWeight(edge_weight));
    }
    let n = graph.n_points();
    let mut c = vec![vec![0.0; n]; n];
    for (p, row) in c.iter_mut().enumerate() {
        for &k in graph.neighbors(p) {
            row[k] = edge_weight;
        }
        let diag = 1.0 - graph.degree(p) as f64 * edge_weight;
        if diag < 0.0 {
            return Err(SchemeError::NegativeDiagonal {
                point: p,
                value: diag,
            });
        }
        row[p] = diag;
    }
    validate_scheme(graph, &c, SchemeClass::Wave)
}

/// Prescribed values at a boundary point.
#[derive(Clone, Debug, PartialEq)]
pub enum Prescription {
    Constant(f64),
    /// Value at step `n` is entry `n`.
    Sequence(Vec<f64>),
}

impl Prescription {
    fn at(&self, n: usize) -> f64 {
        match self {
            Prescription::Constant(x) => *x,
            Prescription::Sequence(xs) => xs[n],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryCondition {
    pub point: usize,
    pub values: Prescription,
}

/// Initial data, optional Dirichlet boundary and horizon for one run.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub scheme: Arc<Scheme>,
    pub f0: PointFunction,
    pub f1: PointFunction,
    pub boundary: Vec<BoundaryCondition>,
    pub steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    InitialValue,
    BoundaryValue,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::InitialValue => "ivp",
            ProblemKind::BoundaryValue => "bvp",
        })
    }
}

impl ProblemSpec {
    pub fn new(
        scheme: Arc<Scheme>,
        f0: PointFunction,
        f1: PointFunction,
        boundary: Vec<BoundaryCondition>,
        steps: usize,
    ) -> Result<Self, SolverError> {
        let problem = Self {
            scheme,
            f0,
            f1,
            boundary,
            steps,
        };
        problem.check()?;
        Ok(problem)
    }

    pub fn initial_value(
        scheme: Arc<Scheme>,
        f0: PointFunction,
        f1: PointFunction,
        steps: usize,
    ) -> Result<Self, SolverError> {
        Self::new(scheme, f0, f1, Vec::new(), steps)
    }

    pub fn kind(&self) -> ProblemKind {
        if self.boundary.is_empty() {
            ProblemKind::InitialValue
        } else {
            ProblemKind::BoundaryValue
        }
    }

    fn check(&self) -> Result<(), SolverError> {
        let points = self.scheme.n_points();
        for (what, f) in [("f0", &self.f0), ("f1", &self.f1)] {
            if f.len() != points {
                return Err(SolverError::Misaligned {
                    what,
                    len: f.len(),
                    points,
                });
            }
        }
        for bc in &self.boundary {
            if bc.point >= points {
                return Err(SolverError::UnknownBoundaryPoint(bc.point));
            }
            if let Prescription::Sequence(xs) = &bc.values {
                if xs.len() < self.steps + 1 {
                    return Err(SolverError::ShortPrescription {
                        point: bc.point,
                        len: xs.len(),
                        needed: self.steps + 1,
                    });
                }
            }
        }
        Ok(())
    }
}

/// The two most recent time levels.
/// Error-free `a + b`: the rounded sum and its exact rounding error.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// The two most recent time levels.
///
/// `curr_residual` and `prev_residual` hold rounding error that wave steps
/// have not yet folded into the stored values; they stay zero for
/// hyperbolic and parabolic steps.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionState {
    pub prev: PointFunction,
    pub curr: PointFunction,
    pub prev_residual: Vec<f64>,
    pub curr_residual: Vec<f64>,
    pub n: usize,
}

impl EvolutionState {
    /// State at `n = 1` from the two initial rows.
    pub fn start(f0: PointFunction, f1: PointFunction) -> Self {
        Self {
            prev_residual: vec![0.0; f0.len()],
            curr_residual: vec![0.0; f1.len()],
            prev: f0,
            curr: f1,
            n: 1,
        }
    }

    /// Overwrites point `p` of the current level with `value`.
    pub fn set_current(&mut self, p: usize, value: f64) {
        let mut values = std::mem::take(&mut self.curr).into_values();
        values[p] = value;
        self.curr = values.into();
        self.curr_residual[p] = 0.0;
    }
}

/// One hyperbolic step: `C f^n + f^n - f^{n-1}`.
///
/// Wave schemes are stepped as `f^n + ((f^n - f^{n-1}) + (C - I) f^n)`
/// with the flux form of `C - I`, carrying every rounding error into the
/// next step, so the total sum does not drift.
pub fn step(state: &EvolutionState, scheme: &Scheme) -> EvolutionState {
    let (x, y) = (state.curr.values(), state.prev.values());
    let n_points = x.len();
    let (next, residual) = match scheme.class {
        SchemeClass::Wave => {
            let (delta, delta_err) = scheme.exchange(x);
            let mut next = Vec::with_capacity(n_points);
            let mut residual = Vec::with_capacity(n_points);
            for p in 0..n_points {
                let (u, e0) = two_sum(x[p], -y[p]);
                let (t, e1) = two_sum(u, delta[p]);
                let (s, e2) = two_sum(x[p], t);
                let carried = 2.0 * state.curr_residual[p] - state.prev_residual[p];
                let (v, e3) = two_sum(s, e0 + e1 + e2 + delta_err[p] + carried);
                next.push(v);
                residual.push(e3);
            }
            (next, residual)
        }
        SchemeClass::Hyperbolic => {
            let next = scheme
                .apply(x)
                .iter()
                .zip(x.iter().zip(y))
                .map(|(&c, (&x, &y))| c + x - y)
                .collect();
            (next, vec![0.0; n_points])
        }
    };
    EvolutionState {
        prev: state.curr.clone(),
        curr: PointFunction::new(next),
        prev_residual: state.curr_residual.clone(),
        curr_residual: residual,
        n: state.n + 1,
    }
}

/// One parabolic step: `C f^n`.
pub fn step_parabolic(state: &EvolutionState, scheme: &Scheme) -> EvolutionState {
    let x = state.curr.values();
    let next = match scheme.class {
        SchemeClass::Wave => scheme
            .exchange(x)
            .0
            .iter()
            .zip(x)
            .map(|(&d, &x)| x + d)
            .collect(),
        SchemeClass::Hyperbolic => scheme.apply(x),
    };
    EvolutionState {
        prev: state.curr.clone(),
        curr: PointFunction::new(next),
        prev_residual: vec![0.0; x.len()],
        curr_residual: vec![0.0; x.len()],
        n: state.n + 1,
    }
}

/// Values `f^n_p` for `n = 0..=N` of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    scheme: Arc<Scheme>,
    kind: ProblemKind,
    rows: Vec<Vec<f64>>,
}

impl Trace {
    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn graph(&self) -> &Graph {
        self.scheme.graph()
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    /// Last step index `N`.
    pub fn steps(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, n: usize) -> Option<&[f64]> {
        self.rows.get(n).map(Vec::as_slice)
    }

    /// Time series at point `p`.
    pub fn series(&self, p: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[p]).collect()
    }

    /// `sum_p f^n_p`.
    pub fn total_sum(&self, n: usize) -> Result<f64, SolverError> {
        self.row(n)
            .map(|r| r.iter().sum())
            .ok_or(SolverError::StepOutOfRange {
                n,
                last: self.steps(),
            })
    }

    pub fn sums(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }

    /// Largest absolute value anywhere in the trace.
    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .fold(0.0, |m: f64, x| m.max(x.abs()))
    }

    /// CSV with header `n,p0,p1,...`; values use the shortest decimal form
    /// that parses back to the same `f64`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        self.write_table(out, ",", "")
    }

    /// Whitespace-separated columns with a `#` header line, as read by
    /// gnuplot.
    pub fn write_gnuplot<W: Write>(&self, out: &mut W) -> io::Result<()> {
        self.write_table(out, " ", "# ")
    }

    fn write_table<W: Write>(&self, out: &mut W, sep: &str, lead: &str) -> io::Result<()> {
        write!(out, "{lead}n")?;
        for p in 0..self.scheme.n_points() {
            write!(out, "{sep}p{p}")?;
        }
        writeln!(out)?;
        for (n, row) in self.rows.iter().enumerate() {
            write!(out, "{n}")?;
            for x in row {
                write!(out, "{sep}{x}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

fn clamp(row: &mut [f64], boundary: &[BoundaryCondition], n: usize) {
    for bc in boundary {
        row[bc.point] = bc.values.at(n);
    }
}

fn evolve(problem: &ProblemSpec) -> Trace {
    let mut f0 = problem.f0.values().to_vec();
    clamp(&mut f0, &problem.boundary, 0);
    let mut rows = vec![f0.clone()];
    if problem.steps >= 1 {
        let mut f1 = problem.f1.values().to_vec();
        clamp(&mut f1, &problem.boundary, 1);
        rows.push(f1.clone());
        let mut state = EvolutionState::start(f0.into(), f1.into());
        while state.n < problem.steps {
            state = step(&state, &problem.scheme);
            for bc in &problem.boundary {
                state.set_current(bc.point, bc.values.at(state.n));
            }
            rows.push(state.curr.values().to_vec());
        }
    }
    Trace {
        scheme: Arc::clone(&problem.scheme),
        kind: problem.kind(),
        rows,
    }
}

/// Runs an initial value problem for `steps` steps.
pub fn run_ivp(problem: &ProblemSpec) -> Result<Trace, SolverError> {
    problem.check()?;
    if !problem.boundary.is_empty() {
        return Err(SolverError::UnexpectedBoundary);
    }
    Ok(evolve(problem))
}

/// Runs a boundary value problem: boundary points are overwritten with
/// their prescriptions at every step, including rows 0 and 1.
pub fn run_bvp(problem: &ProblemSpec) -> Result<Trace, SolverError> {
    problem.check()?;
    if problem.boundary.is_empty() {
        return Err(SolverError::MissingBoundary);
    }
    Ok(evolve(problem))
}

/// Dispatches on whether the problem has boundary points.
pub fn run(problem: &ProblemSpec) -> Result<Trace, SolverError> {
    match problem.kind() {
        ProblemKind::InitialValue => run_ivp(problem),
        ProblemKind::BoundaryValue => run_bvp(problem),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point() -> Arc<Graph> {
        Arc::new(Graph::from_edges(2, &[(0, 1)]).unwrap())
    }

    fn two_point_scheme() -> Arc<Scheme> {
        Arc::new(
            validate_scheme(
                two_point(),
                &[vec![0.8, 0.3], vec![0.2, 0.7]],
                SchemeClass::Wave,
            )
            .unwrap(),
        )
    }

    fn pf(xs: &[f64]) -> PointFunction {
        PointFunction::new(xs.to_vec())
    }

    #[test]
    fn two_point_coefficients_are_a_wave_scheme() {
        let s = two_point_scheme();
        assert_eq!(s.class(), SchemeClass::Wave);
        assert_eq!(s.coeff(1, 0), 0.2);
    }

    #[test]
    fn column_sum_violation_names_the_column() {
        let err = validate_scheme(
            two_point(),
            &[vec![0.8, 0.3], vec![0.3, 0.7]],
            SchemeClass::Wave,
        )
        .unwrap_err();
        match err {
            SchemeError::ColumnSum { column, sum } => {
                assert_eq!(column, 0);
                assert!((sum - 1.1).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        // The same array is fine as a general hyperbolic scheme.
        assert!(validate_scheme(
            two_point(),
            &[vec![0.8, 0.3], vec![0.3, 0.7]],
            SchemeClass::Hyperbolic
        )
        .is_ok());
    }

    #[test]
    fn sparsity_negativity_and_shape_errors() {
        let g = Arc::new(Graph::isolated(2));
        assert!(matches!(
            validate_scheme(
                g.clone(),
                &[vec![0.5, 0.5], vec![0.5, 0.5]],
                SchemeClass::Hyperbolic
            ),
            Err(SchemeError::Sparsity { p: 0, k: 1, .. })
        ));
        assert!(matches!(
            validate_scheme(
                two_point(),
                &[vec![1.2, 0.0], vec![-0.2, 1.0]],
                SchemeClass::Wave
            ),
            Err(SchemeError::Negative { p: 1, k: 0, .. })
        ));
        assert!(matches!(
            validate_scheme(two_point(), &[vec![1.0, 0.0]], SchemeClass::Wave),
            Err(SchemeError::Dimension { .. })
        ));
        assert!(matches!(
            validate_scheme(two_point(), &[vec![1.0, 0.0], vec![0.0]], SchemeClass::Wave),
            Err(SchemeError::Dimension { .. })
        ));
        assert!(matches!(
            validate_scheme(
                two_point(),
                &[vec![f64::NAN, 0.0], vec![0.0, 1.0]],
                SchemeClass::Hyperbolic
            ),
            Err(SchemeError::NonFinite { p: 0, k: 0 })
        ));
    }

    #[test]
    fn uniform_scheme_diagonals() {
        let path = Arc::new(Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap());
        let s = uniform_scheme(path.clone(), 0.25).unwrap();
        assert_eq!(s.coeff(0, 0), 0.75);
        assert_eq!(s.coeff(1, 1), 0.5);
        assert_eq!(s.coeff(0, 1), 0.25);
        assert_eq!(s.coeff(0, 2), 0.0);
        let id = uniform_scheme(path.clone(), 0.0).unwrap();
        assert_eq!(
            id.matrix(),
            vec![
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0]
            ]
        );
        assert!(matches!(
            uniform_scheme(path.clone(), 0.6),
            Err(SchemeError::NegativeDiagonal { point: 1, .. })
        ));
        assert!(matches!(
            uniform_scheme(path, -0.1),
            Err(SchemeError::EdgeWeight(_))
        ));
    }

    #[test]
    fn hand_evaluated_step() {
        let s = two_point_scheme();
        let st = EvolutionState::start(pf(&[2.0, 0.0]), pf(&[2.0, 0.0]));
        let next = step(&st, &s);
        assert_eq!(next.n, 2);
        assert!((next.curr[0] - 1.6).abs() < 1e-15);
        assert!((next.curr[1] - 0.4).abs() < 1e-15);
        assert_eq!(next.prev, pf(&[2.0, 0.0]));

        let par = step_parabolic(&EvolutionState::start(pf(&[0.0, 0.0]), pf(&[2.0, 0.0])), &s);
        assert!((par.curr[0] - 1.6).abs() < 1e-15);
        assert!((par.curr[1] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn zero_and_identity_dynamics() {
        let s = two_point_scheme();
        let mut st = EvolutionState::start(pf(&[0.0, 0.0]), pf(&[0.0, 0.0]));
        for _ in 0..20 {
            st = step(&st, &s);
        }
        assert_eq!(st.curr, pf(&[0.0, 0.0]));

        let id = uniform_scheme(two_point(), 0.0).unwrap();
        let x = pf(&[3.5, -1.25]);
        let mut st = EvolutionState::start(x.clone(), x.clone());
        for _ in 0..20 {
            st = step(&st, &id);
            assert_eq!(st.curr, x);
            assert_eq!(step_parabolic(&st, &id).curr, x);
        }
    }

    #[test]
    fn ivp_trace_shape() {
        let s = two_point_scheme();
        let p = ProblemSpec::initial_value(s.clone(), pf(&[2.0, 0.0]), pf(&[2.0, 0.0]), 0).unwrap();
        let t = run_ivp(&p).unwrap();
        assert_eq!(t.rows(), &[vec![2.0, 0.0]]);
        assert_eq!(t.steps(), 0);

        let p = ProblemSpec::initial_value(s, pf(&[2.0, 0.0]), pf(&[2.0, 0.0]), 50).unwrap();
        let t = run_ivp(&p).unwrap();
        assert_eq!(t.steps(), 50);
        assert_eq!(t.row(1).unwrap(), &[2.0, 0.0]);
        for n in 0..=50 {
            assert!((t.total_sum(n).unwrap() - 2.0).abs() < 1e-12);
        }
        assert!(matches!(
            t.total_sum(51),
            Err(SolverError::StepOutOfRange { n: 51, last: 50 })
        ));
        assert_eq!(t.kind(), ProblemKind::InitialValue);
    }

    #[test]
    fn problem_validation() {
        let s = two_point_scheme();
        assert!(matches!(
            ProblemSpec::initial_value(s.clone(), pf(&[1.0]), pf(&[1.0, 0.0]), 3),
            Err(SolverError::Misaligned { what: "f0", .. })
        ));
        let bc = |point, values| BoundaryCondition { point, values };
        assert!(matches!(
            ProblemSpec::new(
                s.clone(),
                pf(&[0.0; 2]),
                pf(&[0.0; 2]),
                vec![bc(2, Prescription::Constant(0.0))],
                3
            ),
            Err(SolverError::UnknownBoundaryPoint(2))
        ));
        assert!(matches!(
            ProblemSpec::new(
                s.clone(),
                pf(&[0.0; 2]),
                pf(&[0.0; 2]),
                vec![bc(0, Prescription::Sequence(vec![0.0; 3]))],
                3
            ),
            Err(SolverError::ShortPrescription {
                point: 0,
                len: 3,
                needed: 4
            })
        ));
        let with_bc = ProblemSpec::new(
            s.clone(),
            pf(&[0.0; 2]),
            pf(&[0.0; 2]),
            vec![bc(0, Prescription::Constant(1.0))],
            3,
        )
        .unwrap();
        assert_eq!(run_ivp(&with_bc), Err(SolverError::UnexpectedBoundary));
        let without = ProblemSpec::initial_value(s, pf(&[0.0; 2]), pf(&[0.0; 2]), 3).unwrap();
        assert_eq!(run_bvp(&without), Err(SolverError::MissingBoundary));
    }

    #[test]
    fn bvp_clamps_including_initial_rows() {
        let s = two_point_scheme();
        let bcs = vec![
            BoundaryCondition {
                point: 0,
                values: Prescription::Constant(5.0),
            },
            BoundaryCondition {
                point: 1,
                values: Prescription::Sequence((0..11).map(f64::from).collect()),
            },
        ];
        let p = ProblemSpec::new(s, pf(&[1.0, 1.0]), pf(&[1.0, 1.0]), bcs, 10).unwrap();
        let t = run_bvp(&p).unwrap();
        for n in 0..=10 {
            assert_eq!(t.row(n).unwrap(), &[5.0, n as f64]);
        }
        assert_eq!(t.kind(), ProblemKind::BoundaryValue);
    }

    #[test]
    fn csv_layout() {
        let s = two_point_scheme();
        let p = ProblemSpec::initial_value(s, pf(&[2.0, 0.0]), pf(&[2.0, 0.0]), 2).unwrap();
        let t = run_ivp(&p).unwrap();
        let csv = t.to_csv_string();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,p0,p1");
        assert_eq!(lines[1], "0,2,0");
        assert_eq!(lines.len(), 4);
        let last: Vec<f64> = lines[3]
            .split(',')
            .skip(1)
            .map(|x| x.parse().unwrap())
            .collect();
        assert_eq!(last, t.row(2).unwrap());

        let mut g = Vec::new();
        t.write_gnuplot(&mut g).unwrap();
        let g = String::from_utf8(g).unwrap();
        assert!(g.starts_with("# n p0 p1\n0 2 0\n"));
    }
}
