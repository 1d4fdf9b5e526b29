// Slow exchange on the minimal 4-sphere.

use digiwave::analysis::aggregate_reduction;
use digiwave::experiments::{ExperimentPreset, PresetName};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let preset = ExperimentPreset::new(PresetName::Sphere4)?;
    let trace = preset.run()?;
    for n in (0..=trace.steps()).step_by(40) {
        let r = trace.row(n).unwrap();
        println!(
            "n={n:>3} f0={:8.4} f1={:8.4} f5={:8.4} f6={:8.4}",
            r[0], r[1], r[5], r[6]
        );
    }
    for check in &preset.checks {
        println!("{}", check.evaluate(&trace, &preset.problem));
    }
    // Point 0 sees everything but its antipode, so no two-point reduction.
    let agg = aggregate_reduction(&trace, 0)?;
    println!("two-point reduction applies: {}", agg.check.is_some());
    Ok(())
}

fn main() {
    run_example().unwrap();
}
