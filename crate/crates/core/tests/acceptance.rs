//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::sync::Arc;
use std::time::Instant;

use digiwave::analysis::{closed_form_period, estimate_period, fit_two_point};
use digiwave::catalog::{catalog, CatalogName};
use digiwave::experiments::{ExperimentPreset, Override, PresetName};
use digiwave::graph::{Graph, PointFunction};
use digiwave::solver::{run, ProblemSpec};
use digiwave::topology::{self, minimal_sphere};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const LONG: usize = 10_000;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn graph(name: CatalogName) -> Result<Graph, String> {
    catalog(name).map(|e| e.graph).map_err(|e| e.to_string())
}

fn preset(name: PresetName, steps: usize) -> Result<ExperimentPreset, String> {
    ExperimentPreset::with_overrides(name, &[Override::Steps(steps)]).map_err(|e| e.to_string())
}

fn conservation() -> Outcome {
    let mut worst = 0.0f64;
    for (name, a) in [
        (PresetName::TwoPoint, 2.0),
        (PresetName::Klein, 16.0),
        (PresetName::Projective, 11.0),
        (PresetName::Sphere4, 10.0),
    ] {
        let p = preset(name, LONG)?;
        let start = Instant::now();
        let trace = p.run().map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        let dev = trace
            .sums()
            .iter()
            .fold(0.0f64, |m, s| m.max((s - a).abs()));
        ensure(dev < 1e-9, format!("{name}: max |S^n - {a}| = {dev:e}"))?;
        ensure(
            elapsed.as_secs_f64() < 1.0,
            format!("{name}: took {elapsed:?}"),
        )?;
        worst = worst.max(dev);
    }
    Ok(format!("max deviation {worst:.2e} over {LONG} steps"))
}

fn two_point_period() -> Outcome {
    let exact = closed_form_period(0.8, 0.3)
        .map_err(|e| e.to_string())?
        .period;
    let reference = 2.0 * std::f64::consts::PI / 0.75f64.acos();
    ensure(
        (exact - reference).abs() < 1e-12,
        "closed form disagrees with 2pi/arccos(0.75)",
    )?;

    let p = preset(PresetName::TwoPoint, 1000)?;
    let trace = p.run().map_err(|e| e.to_string())?;
    let est = estimate_period(&trace.series(0), 2).map_err(|e| e.to_string())?;
    let rel = (est.period - exact).abs() / exact;
    ensure(rel < 0.01, format!("estimate {} vs {exact}", est.period))?;

    let fit = fit_two_point(&trace, 0).map_err(|e| e.to_string())?;
    let series = trace.series(0);
    let err = (0..=1000).fold(0.0f64, |m, n| m.max((fit.predict(n) - series[n]).abs()));
    ensure(err < 1e-9, format!("closed-form trace error {err:e}"))?;
    Ok(format!(
        "T = {exact:.6}, simulated {:.6} ({rel:.1e}), trace error {err:.1e}",
        est.period
    ))
}

fn sum_drift() -> Outcome {
    let mut worst = 0.0f64;
    for name in CatalogName::representatives() {
        let g = Arc::new(graph(name)?);
        let n = g.n_points();
        let scheme = Arc::new(
            digiwave::solver::uniform_scheme(Arc::clone(&g), 0.5 / n as f64)
                .map_err(|e| e.to_string())?,
        );
        let f0 = PointFunction::from_sparse(n, &[(0, 3.0)]).map_err(|e| e.to_string())?;
        let f1 =
            PointFunction::from_sparse(n, &[(0, 3.0), (n - 1, 1.0)]).map_err(|e| e.to_string())?;
        let problem =
            ProblemSpec::initial_value(scheme, f0, f1, LONG).map_err(|e| e.to_string())?;
        let trace = run(&problem).map_err(|e| e.to_string())?;
        let s0: f64 = trace.row(0).unwrap().iter().sum();
        for step in 1..=LONG {
            let direct: f64 = trace.row(step).unwrap().iter().sum();
            let dev = (direct - s0 - step as f64).abs();
            ensure(
                dev < 1e-9 * step as f64,
                format!("{name} n={step}: deviation {dev:e}"),
            )?;
            worst = worst.max(dev / step as f64);
        }
    }
    Ok(format!("max |S^n - S^0 - n| / n = {worst:.2e}"))
}

fn recognizers() -> Outcome {
    let start = Instant::now();
    for (n, points) in [(0, 2), (1, 4), (2, 6), (3, 8), (4, 10)] {
        let s = minimal_sphere(n);
        ensure(
            s.n_points() == points,
            format!("minimal_sphere({n}) has {} points", s.n_points()),
        )?;
        ensure(
            topology::is_n_sphere(&s, n).map_err(|e| e.to_string())?,
            format!("minimal_sphere({n}) rejected"),
        )?;
    }
    for name in [
        CatalogName::Torus16,
        CatalogName::Klein16,
        CatalogName::Projective11,
    ] {
        let g = graph(name)?;
        ensure(
            topology::is_n_manifold(&g, 2).map_err(|e| e.to_string())?,
            format!("{name} not a 2-manifold"),
        )?;
        ensure(
            !topology::is_n_sphere(&g, 2).map_err(|e| e.to_string())?,
            format!("{name} accepted as a 2-sphere"),
        )?;
    }
    for (name, dim, size) in [
        (CatalogName::Klein16, 1, 6),
        (CatalogName::Sphere4Min, 3, 8),
    ] {
        let g = graph(name)?;
        for v in g.points() {
            let rim = g.rim(v).map_err(|e| e.to_string())?;
            ensure(
                rim.n_points() == size,
                format!("{name}: rim of {v} has {} points", rim.n_points()),
            )?;
            ensure(
                topology::is_n_sphere(&rim, dim).map_err(|e| e.to_string())?,
                format!("{name}: rim of {v} is not a {dim}-sphere"),
            )?;
        }
    }
    Ok(format!("all recognizer checks in {:?}", start.elapsed()))
}

/// Counts every clique by testing all subsets.
fn brute_force_euler(g: &Graph) -> i64 {
    let n = g.n_points();
    let mut chi = 0i64;
    for mask in 1u64..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let clique = members
            .iter()
            .enumerate()
            .all(|(i, &u)| members[i + 1..].iter().all(|&v| g.has_edge(u, v)));
        if clique {
            chi += if members.len() % 2 == 1 { 1 } else { -1 };
        }
    }
    chi
}

fn euler() -> Outcome {
    let cases = [
        ("S2", graph(CatalogName::Sphere2Min)?, 2),
        ("S4", graph(CatalogName::Sphere4Min)?, 2),
        ("S1", graph(CatalogName::Cycle(4))?, 0),
        ("S3", graph(CatalogName::Sphere3Min)?, 0),
        ("torus16", graph(CatalogName::Torus16)?, 0),
        ("klein16", graph(CatalogName::Klein16)?, 0),
        ("projective11", graph(CatalogName::Projective11)?, 1),
        ("point", Graph::isolated(1), 1),
    ];
    for (label, g, chi) in &cases {
        let got = g.euler_characteristic();
        ensure(got == *chi, format!("{label}: chi = {got}, expected {chi}"))?;
        if g.n_points() <= 16 {
            let oracle = brute_force_euler(g);
            ensure(
                oracle == got,
                format!("{label}: subset oracle gives {oracle}"),
            )?;
        }
    }
    Ok(format!(
        "{} spaces agree with the subset oracle",
        cases.len()
    ))
}

fn orientability() -> Outcome {
    let o = |name| topology::is_orientable(&graph(name)?).map_err(|e| e.to_string());
    ensure(o(CatalogName::Torus16)?, "torus16 non-orientable")?;
    ensure(!o(CatalogName::Klein16)?, "klein16 orientable")?;
    ensure(!o(CatalogName::Projective11)?, "projective11 orientable")?;
    Ok("torus16 orientable; klein16, projective11 not".into())
}

fn projective_deletion() -> Outcome {
    let p = graph(CatalogName::Projective11)?;
    let mut lengths = Vec::new();
    for v in p.points() {
        let residual =
            topology::simple_point_reduction(&p.remove_point(v).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        let m = residual.n_points();
        let chordless =
            residual.n_edges() == m && residual.points().all(|u| residual.degree(u) == 2);
        ensure(
            m >= 4 && chordless,
            format!("P-{v} reduces to {m} points, {} edges", residual.n_edges()),
        )?;
        ensure(
            topology::is_n_sphere(&residual, 1).map_err(|e| e.to_string())?,
            format!("P-{v}: residual is not a 1-sphere"),
        )?;
        lengths.push(m);
    }
    Ok(format!("residual cycle lengths {lengths:?}"))
}

fn join_law() -> Outcome {
    let sphere = |d: usize| -> Result<Graph, String> {
        match d {
            0 => Ok(Graph::isolated(2)),
            1 => graph(CatalogName::Cycle(4)),
            2 => graph(CatalogName::Sphere2Min),
            3 => graph(CatalogName::Sphere3Min),
            _ => graph(CatalogName::Sphere4Min),
        }
    };
    for (a, b) in [(0, 0), (0, 1), (1, 1), (0, 2), (0, 3)] {
        let j = sphere(a)?.join(&sphere(b)?);
        let dim = a + b + 1;
        ensure(
            topology::is_n_sphere(&j, dim).map_err(|e| e.to_string())?,
            format!("S{a} * S{b} is not a {dim}-sphere"),
        )?;
    }
    Ok("S0*S0, S0*S1, S1*S1, S0*S2, S0*S3 are spheres".into())
}

fn clamping() -> Outcome {
    let p = preset(PresetName::String, LONG)?;
    let trace = p.run().map_err(|e| e.to_string())?;
    for end in [0, 9] {
        ensure(
            trace.series(end).iter().all(|x| x.to_bits() == 0),
            format!("point {end} left zero"),
        )?;
    }
    let moved = (2..=trace.steps()).any(|n| trace.row(n).unwrap()[1..9].iter().any(|&x| x != 0.0));
    ensure(moved, "interior never moves")?;
    Ok(format!("ends identically +0.0 over {LONG} steps"))
}

fn qualitative() -> Outcome {
    let mut summary = Vec::new();
    for name in PresetName::ALL {
        let p = preset(name, LONG)?;
        let trace = p.run().map_err(|e| e.to_string())?;
        let initial = p
            .problem
            .f0
            .values()
            .iter()
            .chain(p.problem.f1.values())
            .fold(0.0f64, |m, x| m.max(x.abs()));
        let peak = trace.max_abs();
        ensure(
            peak <= 10.0 * initial,
            format!("{name}: max |f| = {peak}, initial max {initial}"),
        )?;
        let est =
            estimate_period(&trace.series(p.observe[0]), 2).map_err(|e| format!("{name}: {e}"))?;
        ensure(
            est.period > 2.0 && est.residual.is_finite(),
            format!("{name}: period {} residual {}", est.period, est.residual),
        )?;
        summary.push(format!(
            "{name} T={:.2} peak={:.1}x",
            est.period,
            peak / initial
        ));
    }
    Ok(summary.join(", "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 conservation", conservation),
        ("2 two-point period", two_point_period),
        ("3 sum drift", sum_drift),
        ("4 topology recognizers", recognizers),
        ("5 euler characteristics", euler),
        ("6 orientability", orientability),
        ("7 projective deletion", projective_deletion),
        ("8 join-sphere law", join_law),
        ("9 bvp clamping", clamping),
        ("10 bounded oscillation", qualitative),
    ];
    let mut failed = 0;
    for (label, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {label}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {label}: {why}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
