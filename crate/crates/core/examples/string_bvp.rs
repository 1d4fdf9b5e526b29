// A ten-point string clamped at both ends.

use digiwave::experiments::{ExperimentPreset, PresetName};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let preset = ExperimentPreset::new(PresetName::String)?;
    let trace = preset.run()?;
    for n in (0..=trace.steps()).step_by(5) {
        let row: Vec<String> = trace
            .row(n)
            .unwrap()
            .iter()
            .map(|x| format!("{x:6.2}"))
            .collect();
        println!("n={n:>3} {}", row.join(" "));
    }
    for check in &preset.checks {
        println!("{}", check.evaluate(&trace, &preset.problem));
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
