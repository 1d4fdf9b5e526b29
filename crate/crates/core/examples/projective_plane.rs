// Waves on an 11-point projective plane.

use digiwave::analysis::{conservation_report, estimate_period};
use digiwave::experiments::{ExperimentPreset, PresetName};
use digiwave::topology;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let preset = ExperimentPreset::new(PresetName::Projective)?;
    let g = preset.problem.scheme.graph();
    println!(
        "chi = {}, orientable = {}",
        g.euler_characteristic(),
        topology::is_orientable(g)?
    );
    let trace = preset.run()?;
    print!("{}", conservation_report(&trace));
    for p in &preset.observe {
        match estimate_period(&trace.series(*p), 2) {
            Ok(est) => println!("point {p}: period {:.3}", est.period),
            Err(e) => println!("point {p}: {e}"),
        }
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
