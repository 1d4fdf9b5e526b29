// Initial value problem on the 16-point Klein bottle.

use digiwave::analysis::conservation_report;
use digiwave::experiments::{ExperimentPreset, PresetName};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let preset = ExperimentPreset::new(PresetName::Klein)?;
    let trace = preset.run()?;
    print!("{}", conservation_report(&trace));
    for p in &preset.observe {
        let s = trace.series(*p);
        println!("point {p}: first values {:?}", &s[..6]);
    }
    for check in &preset.checks {
        println!("{}", check.evaluate(&trace, &preset.problem));
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
