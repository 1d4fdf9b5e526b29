// The two-point space: exact period against the simulated one.

use std::sync::Arc;

use digiwave::analysis::{closed_form_period, estimate_period, fit_two_point};
use digiwave::catalog::{catalog, CatalogName};
use digiwave::graph::PointFunction;
use digiwave::solver::{run, validate_scheme, ProblemSpec, SchemeClass};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = Arc::new(catalog(CatalogName::TwoPoint)?.graph);
    let scheme = Arc::new(validate_scheme(
        g,
        &[vec![0.8, 0.3], vec![0.2, 0.7]],
        SchemeClass::Wave,
    )?);
    let f = PointFunction::new(vec![2.0, 0.0]);
    let problem = ProblemSpec::initial_value(Arc::clone(&scheme), f.clone(), f, 1000)?;
    let trace = run(&problem)?;

    let exact = closed_form_period(0.8, 0.3)?;
    let est = estimate_period(&trace.series(0), 2)?;
    let fit = fit_two_point(&trace, 0)?;
    println!("closed form  T = {:.6}", exact.period);
    println!(
        "estimated    T = {:.6} (residual {:.2e})",
        est.period, est.residual
    );
    println!(
        "fit: {:.4} + {:.4} cos(wn) + {:.4} sin(wn)",
        fit.mean, fit.cos_coeff, fit.sin_coeff
    );
    let worst = (0..=trace.steps())
        .map(|n| (fit.predict(n) - trace.series(0)[n]).abs())
        .fold(0.0, f64::max);
    println!(
        "max fit error {worst:.2e}, sum at the end {}",
        trace.total_sum(trace.steps())?
    );
    assert!((est.period - exact.period).abs() / exact.period < 0.01);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
