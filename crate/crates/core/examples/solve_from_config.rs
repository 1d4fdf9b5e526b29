// Build and run a problem from a JSON description.

use digiwave::analysis::conservation_report;
use digiwave::config::ProblemConfig;
use digiwave::solver::run;

const CONFIG: &str = r#"{
    "graph": { "points": 5, "edges": [[0,1],[1,2],[2,3],[3,4],[4,0]] },
    "coefficients": { "uniform": 0.2 },
    "initial": { "f0": { "0": 1 }, "f1": { "0": 1 } },
    "steps": 40
}"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let problem = ProblemConfig::from_json(CONFIG)?.build_problem()?;
    let trace = run(&problem)?;
    print!("{}", conservation_report(&trace));
    let csv = trace.to_csv_string();
    for line in csv.lines().take(4) {
        println!("{line}");
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
