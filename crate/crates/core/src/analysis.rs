//! Conservation, periodicity and aggregation checks on solver traces.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::solver::Trace;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("|B| = |{b}| >= 2: the two-point recurrence does not oscillate")]
    Degenerate { b: f64 },
    #[error("no significant autocorrelation peak")]
    Aperiodic,
    #[error("series of length {len} is too short for {min_cycles} cycles")]
    TooShort { len: usize, min_cycles: usize },
    #[error("expected a two-point trace, got {0} points")]
    NotTwoPoint(usize),
    #[error("initial sums differ: {s0} vs {s1}")]
    UnequalSums { s0: f64, s1: f64 },
    #[error("unknown point {0}")]
    UnknownPoint(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeriodMethod {
    ClosedForm,
    Autocorrelation,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodEstimate {
    /// In steps.
    pub period: f64,
    /// `1 - r` at the refined autocorrelation peak; zero for closed forms.
    pub residual: f64,
    pub method: PeriodMethod,
}

fn two_point_b(c_self: f64, c_other: f64) -> Result<f64, AnalysisError> {
    let b = 1.0 + c_self - c_other;
    if b.abs() >= 2.0 {
        Err(AnalysisError::Degenerate { b })
    } else {
        Ok(b)
    }
}

/// `T = 2 pi / arccos(B / 2)` with `B = 1 + c11 - c12`.
pub fn closed_form_period(c11: f64, c12: f64) -> Result<PeriodEstimate, AnalysisError> {
    let b = two_point_b(c11, c12)?;
    Ok(PeriodEstimate {
        period: 2.0 * PI / (b / 2.0).acos(),
        residual: 0.0,
        method: PeriodMethod::ClosedForm,
    })
}

/// `f^n = mean + a cos(omega n) + b sin(omega n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoPointClosedForm {
    pub mean: f64,
    pub cos_coeff: f64,
    pub sin_coeff: f64,
    /// Radians per step.
    pub omega: f64,
}

impl TwoPointClosedForm {
    pub fn predict(&self, n: usize) -> f64 {
        let t = self.omega * n as f64;
        self.mean + self.cos_coeff * t.cos() + self.sin_coeff * t.sin()
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }
}

/// Closed form of the series at `point` on a two-point trace.
///
/// With `A` the conserved sum and `q` the other point, the series obeys
/// `f^{n+1} = c_pq A + B f^n - f^{n-1}`, `B = 1 + c_pp - c_pq`, whose fixed
/// point is `c_pq A / (2 - B)`.
pub fn fit_two_point(trace: &Trace, point: usize) -> Result<TwoPointClosedForm, AnalysisError> {
    let n_points = trace.graph().n_points();
    if n_points != 2 {
        return Err(AnalysisError::NotTwoPoint(n_points));
    }
    if point >= 2 {
        return Err(AnalysisError::UnknownPoint(point));
    }
    let other = 1 - point;
    let s = trace.scheme();
    let b = two_point_b(s.coeff(point, point), s.coeff(point, other))?;
    let r0 = trace.row(0).expect("trace has row 0");
    let r1 = trace.row(1).unwrap_or(r0);
    let (s0, s1) = (r0[0] + r0[1], r1[0] + r1[1]);
    if (s0 - s1).abs() > 1e-12 * s0.abs().max(1.0) {
        return Err(AnalysisError::UnequalSums { s0, s1 });
    }
    let omega = (b / 2.0).acos();
    let mean = s.coeff(point, other) * s0 / (2.0 - b);
    let cos_coeff = r0[point] - mean;
    let sin_coeff = (r1[point] - mean - cos_coeff * omega.cos()) / omega.sin();
    Ok(TwoPointClosedForm {
        mean,
        cos_coeff,
        sin_coeff,
        omega,
    })
}

/// Normalized autocorrelation of the mean-removed series for lags
/// `0..=max_lag`. Each lag is averaged over its overlap, so `r[0] = 1`.
pub fn autocorrelation(series: &[f64], max_lag: usize) -> Vec<f64> {
    let n = series.len();
    if n == 0 {
        return Vec::new();
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let x: Vec<f64> = series.iter().map(|v| v - mean).collect();
    let var = x.iter().map(|v| v * v).sum::<f64>() / n as f64;
    (0..=max_lag.min(n - 1))
        .map(|lag| {
            let overlap = n - lag;
            let s: f64 = x[..overlap].iter().zip(&x[lag..]).map(|(a, b)| a * b).sum();
            if var > 0.0 {
                s / overlap as f64 / var
            } else {
                0.0
            }
        })
        .collect()
}

/// Minimum normalized autocorrelation for a peak to count.
const PEAK_THRESHOLD: f64 = 0.2;

/// Height, relative to the coarse peak, a peak at a fraction of its lag needs.
const SUBMULTIPLE_RATIO: f64 = 0.7;

/// Parabola through `(i-1, i, i+1)`: vertex offset and height.
fn parabolic_peak(r: &[f64], i: usize) -> (f64, f64) {
    let (a, b, c) = (r[i - 1], r[i], r[i + 1]);
    let denom = a - 2.0 * b + c;
    if denom >= 0.0 {
        return (i as f64, b);
    }
    let off = 0.5 * (a - c) / denom;
    (i as f64 + off, b - 0.25 * (a - c) * off)
}

fn is_local_max(r: &[f64], i: usize) -> bool {
    i >= 1 && i + 1 < r.len() && r[i] >= r[i - 1] && r[i] >= r[i + 1]
}

/// Tallest local maximum among lags `guess - 1 ..= guess + 1`.
fn tallest_near(r: &[f64], guess: usize) -> Option<usize> {
    (guess.saturating_sub(1)..=guess + 1)
        .filter(|&i| is_local_max(r, i))
        .max_by(|&a, &b| r[a].total_cmp(&r[b]))
}

/// Dominant period from the autocorrelation.
///
/// The first local maximum after the autocorrelation turns negative, and
/// within 90% of the tallest peak, fixes a coarse period; a qualifying peak
/// near an integer fraction of it replaces it, since sampling can flatten
/// the first true peak. Strong peaks near multiples of the period then
/// refine it, each located by a 3-point parabola. Lags are searched up to
/// `len / min_cycles`.
pub fn estimate_period(series: &[f64], min_cycles: usize) -> Result<PeriodEstimate, AnalysisError> {
    let min_cycles = min_cycles.max(1);
    let max_lag = series.len() / min_cycles;
    if max_lag < 3 {
        return Err(AnalysisError::TooShort {
            len: series.len(),
            min_cycles,
        });
    }
    let r = autocorrelation(series, max_lag);
    if r.len() < 3 || r[0] == 0.0 {
        return Err(AnalysisError::Aperiodic);
    }
    let first_negative = r
        .iter()
        .position(|&v| v < 0.0)
        .ok_or(AnalysisError::Aperiodic)?;
    let peaks: Vec<usize> = (first_negative..r.len())
        .filter(|&i| is_local_max(&r, i) && r[i] > PEAK_THRESHOLD)
        .collect();
    let tallest = peaks
        .iter()
        .map(|&i| r[i])
        .fold(f64::NEG_INFINITY, f64::max);
    let first = *peaks
        .iter()
        .find(|&&i| r[i] >= 0.9 * tallest)
        .ok_or(AnalysisError::Aperiodic)?;
    let first = (2..)
        .map(|d| first as f64 / d as f64)
        .take_while(|&lag| lag >= 2.0)
        .filter_map(|lag| tallest_near(&r, lag.round() as usize))
        .filter(|&i| i >= first_negative && r[i] >= SUBMULTIPLE_RATIO * r[first])
        .last()
        .unwrap_or(first);
    let (mut period, mut height) = parabolic_peak(&r, first);

    for k in 2.. {
        let guess = (period * k as f64).round() as usize;
        if guess + 2 > r.len() {
            break;
        }
        let Some(i) = tallest_near(&r, guess) else {
            continue;
        };
        if r[i] < 0.9 * height {
            continue;
        }
        let (lag, h) = parabolic_peak(&r, i);
        period = lag / k as f64;
        height = height.max(h);
    }

    Ok(PeriodEstimate {
        period,
        residual: 1.0 - height.min(1.0),
        method: PeriodMethod::Autocorrelation,
    })
}

/// Series of one point and of the sum over the remaining points.
#[derive(Clone, Debug, PartialEq)]
pub struct Aggregation {
    pub point_series: Vec<f64>,
    pub rest_series: Vec<f64>,
    /// Present when the reduced two-point recurrence is well defined.
    pub check: Option<AggregationCheck>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AggregationCheck {
    /// Common weight `c_vk` on every edge at `v`.
    pub edge_weight: f64,
    pub self_weight: f64,
    /// Largest residual of the reduced two-point recurrence.
    pub residual: f64,
}

/// Splits the trace into `v` and `H = G - v`. When `v` is adjacent to all of
/// `H` and `c_vk = w` for every `k` in `H`, the pair `(f_v, f_H)` follows a
/// two-point wave recurrence with `c_vH = w` and `c_Hv = 1 - c_vv`; the
/// check reports how closely it does.
pub fn aggregate_reduction(trace: &Trace, v: usize) -> Result<Aggregation, AnalysisError> {
    let g = trace.graph();
    if v >= g.n_points() {
        return Err(AnalysisError::UnknownPoint(v));
    }
    let point_series = trace.series(v);
    let rest_series: Vec<f64> = trace
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|&(p, _)| p != v)
                .map(|(_, x)| x)
                .sum()
        })
        .collect();

    let s = trace.scheme();
    let others: Vec<usize> = g.points().filter(|&p| p != v).collect();
    let w = others.first().map(|&k| s.coeff(v, k));
    let uniform = match w {
        Some(w) => {
            g.degree(v) == others.len()
                && others.iter().all(|&k| s.coeff(v, k) == w)
                && trace.kind() == crate::solver::ProblemKind::InitialValue
        }
        None => false,
    };
    let check = uniform.then(|| {
        let w = w.expect("uniform implies a neighbor");
        let cvv = s.coeff(v, v);
        let (c_hv, c_hh) = (1.0 - cvv, 1.0 - w);
        let mut residual: f64 = 0.0;
        for n in 1..point_series.len().saturating_sub(1) {
            let (x0, x1, x2) = (point_series[n - 1], point_series[n], point_series[n + 1]);
            let (h0, h1, h2) = (rest_series[n - 1], rest_series[n], rest_series[n + 1]);
            let px = cvv * x1 + w * h1 + x1 - x0;
            let ph = c_hv * x1 + c_hh * h1 + h1 - h0;
            residual = residual.max((px - x2).abs()).max((ph - h2).abs());
        }
        AggregationCheck {
            edge_weight: w,
            self_weight: cvv,
            residual,
        }
    });
    Ok(Aggregation {
        point_series,
        rest_series,
        check,
    })
}

/// Behavior of `S^n = sum_p f^n_p` over a trace.
#[derive(Clone, Debug, PartialEq)]
pub struct ConservationReport {
    /// `S^0`.
    pub a: f64,
    /// Whether `S^0 = S^1`, i.e. the sum should stay constant.
    pub conserved: bool,
    /// `max_n |S^n - S^0|`.
    pub max_dev: f64,
    /// Least-squares slope of `S^n` against `n`.
    pub drift_slope: f64,
    /// `max_n |S^n - (S^0 + n (S^1 - S^0))|`.
    pub law_dev: f64,
}

pub fn conservation_report(trace: &Trace) -> ConservationReport {
    let sums = trace.sums();
    let s0 = sums[0];
    let s1 = sums.get(1).copied().unwrap_or(s0);
    let conserved = (s1 - s0).abs() <= 1e-12 * s0.abs().max(1.0);
    let max_dev = sums.iter().fold(0.0, |m: f64, s| m.max((s - s0).abs()));
    let law_dev = sums.iter().enumerate().fold(0.0, |m: f64, (n, s)| {
        m.max((s - (s0 + n as f64 * (s1 - s0))).abs())
    });
    ConservationReport {
        a: s0,
        conserved,
        max_dev,
        drift_slope: slope(&sums),
        law_dev,
    }
}

fn slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    if ys.len() < 2 {
        return 0.0;
    }
    let mean_x = (n - 1.0) / 2.0;
    let mean_y = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 - mean_x;
        sxy += dx * (y - mean_y);
        sxx += dx * dx;
    }
    sxy / sxx
}

impl fmt::Display for ConservationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "A={}", self.a)?;
        writeln!(f, "conserved={}", self.conserved)?;
        writeln!(f, "max_dev={:e}", self.max_dev)?;
        writeln!(f, "drift_slope={}", self.drift_slope)?;
        writeln!(f, "law_dev={:e}", self.law_dev)
    }
}

impl fmt::Display for PeriodEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "period={}", self.period)?;
        writeln!(f, "residual={}", self.residual)?;
        writeln!(
            f,
            "method={}",
            match self.method {
                PeriodMethod::ClosedForm => "closed_form",
                PeriodMethod::Autocorrelation => "autocorrelation",
            }
        )
    }
}

/// `(lag, autocorrelation)` rows for plotting.
pub fn autocorrelation_csv(series: &[f64], max_lag: usize) -> String {
    let mut out = String::from("lag,acf\n");
    for (lag, r) in autocorrelation(series, max_lag).iter().enumerate() {
        out.push_str(&format!("{lag},{r}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::{Graph, PointFunction};
    use crate::solver::{run_ivp, uniform_scheme, validate_scheme, ProblemSpec, SchemeClass};

    fn two_point_trace(c: [[f64; 2]; 2], f0: [f64; 2], f1: [f64; 2], steps: usize) -> Trace {
        let g = Arc::new(Graph::from_edges(2, &[(0, 1)]).unwrap());
        let s = validate_scheme(g, &[c[0].to_vec(), c[1].to_vec()], SchemeClass::Wave).unwrap();
        let p =
            ProblemSpec::initial_value(Arc::new(s), f0.to_vec().into(), f1.to_vec().into(), steps)
                .unwrap();
        run_ivp(&p).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let t = closed_form_period(0.8, 0.3).unwrap();
        assert!((t.period - 2.0 * PI / 0.75f64.acos()).abs() < 1e-12);
        assert!((t.period - 8.69363).abs() < 1e-5);
        assert!((closed_form_period(0.4, 0.4).unwrap().period - 6.0).abs() < 1e-12);
        assert!((closed_form_period(0.0, 1.0).unwrap().period - 4.0).abs() < 1e-12);
        assert!(matches!(
            closed_form_period(1.0, 0.0),
            Err(AnalysisError::Degenerate { .. })
        ));
    }

    #[test]
    fn fit_reproduces_two_point_preset() {
        let t = two_point_trace([[0.8, 0.3], [0.2, 0.7]], [2.0, 0.0], [2.0, 0.0], 1000);
        for p in 0..2 {
            let fit = fit_two_point(&t, p).unwrap();
            let err = (0..=1000)
                .map(|n| (fit.predict(n) - t.row(n).unwrap()[p]).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-9, "point {p}: {err}");
        }
    }

    #[test]
    fn fit_equilibrium_data() {
        let t = two_point_trace([[0.8, 0.3], [0.2, 0.7]], [1.0, 1.0], [1.0, 1.0], 200);
        let fit = fit_two_point(&t, 0).unwrap();
        for n in 0..=200 {
            assert!((fit.predict(n) - t.row(n).unwrap()[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn fit_errors() {
        let t = two_point_trace([[1.0, 0.0], [0.0, 1.0]], [2.0, 0.0], [2.0, 0.0], 10);
        assert!(matches!(
            fit_two_point(&t, 0),
            Err(AnalysisError::Degenerate { .. })
        ));
        let t = two_point_trace([[0.8, 0.3], [0.2, 0.7]], [2.0, 0.0], [3.0, 0.0], 10);
        assert!(matches!(
            fit_two_point(&t, 0),
            Err(AnalysisError::UnequalSums { .. })
        ));
        assert!(matches!(
            fit_two_point(&t, 2),
            Err(AnalysisError::UnknownPoint(2))
        ));
    }

    #[test]
    fn period_of_synthetic_cosine() {
        let xs: Vec<f64> = (0..600)
            .map(|n| (2.0 * PI * n as f64 / 6.0).cos())
            .collect();
        let est = estimate_period(&xs, 3).unwrap();
        assert!((est.period - 6.0).abs() < 0.01, "{est:?}");
        assert!(est.residual.is_finite());
    }

    #[test]
    fn period_of_two_point_trace() {
        let t = two_point_trace([[0.8, 0.3], [0.2, 0.7]], [2.0, 0.0], [2.0, 0.0], 1000);
        let est = estimate_period(&t.series(0), 3).unwrap();
        let exact = closed_form_period(0.8, 0.3).unwrap().period;
        assert!((est.period - exact).abs() / exact < 0.01, "{est:?}");
    }

    #[test]
    fn constant_series_is_aperiodic() {
        assert_eq!(
            estimate_period(&[3.0; 100], 3),
            Err(AnalysisError::Aperiodic)
        );
        assert!(matches!(
            estimate_period(&[1.0, 2.0], 3),
            Err(AnalysisError::TooShort { .. })
        ));
    }

    #[test]
    fn aggregation_on_star_center() {
        let star = Arc::new(Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap());
        let s = uniform_scheme(star, 0.2).unwrap();
        let p = ProblemSpec::initial_value(
            Arc::new(s),
            PointFunction::new(vec![0.0, 3.0, 0.0, 1.0]),
            PointFunction::new(vec![1.0, 1.0, 1.0, 1.0]),
            300,
        )
        .unwrap();
        let t = run_ivp(&p).unwrap();
        let agg = aggregate_reduction(&t, 0).unwrap();
        let check = agg.check.expect("center sees every point");
        assert!(check.residual < 1e-9, "{check:?}");
        assert_eq!(check.edge_weight, 0.2);
        // A leaf is not adjacent to the other leaves.
        assert!(aggregate_reduction(&t, 1).unwrap().check.is_none());
        assert!(matches!(
            aggregate_reduction(&t, 4),
            Err(AnalysisError::UnknownPoint(4))
        ));
    }

    #[test]
    fn aggregation_on_two_points() {
        let t = two_point_trace([[0.8, 0.3], [0.2, 0.7]], [2.0, 0.0], [2.0, 0.0], 50);
        let agg = aggregate_reduction(&t, 0).unwrap();
        assert_eq!(agg.rest_series, t.series(1));
        assert!(agg.check.unwrap().residual < 1e-12);
    }

    #[test]
    fn conservation_examples() {
        let t = two_point_trace([[0.8, 0.3], [0.2, 0.7]], [0.0, 0.0], [0.0, 0.0], 10);
        let r = conservation_report(&t);
        assert_eq!((r.a, r.max_dev), (0.0, 0.0));
        assert!(r.conserved);

        let t = two_point_trace([[0.8, 0.3], [0.2, 0.7]], [1.0, 0.0], [1.5, 0.5], 100);
        let r = conservation_report(&t);
        assert!(!r.conserved);
        assert!((r.drift_slope - 1.0).abs() < 1e-12);
        assert!(r.law_dev < 1e-9, "{}", r.law_dev);
        let text = r.to_string();
        assert!(text.starts_with("A=1\n"));
        assert!(text.contains("max_dev="));
    }
}
