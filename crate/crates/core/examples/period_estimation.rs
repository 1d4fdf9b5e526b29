// Period from the autocorrelation of a sampled signal.

use digiwave::analysis::{autocorrelation, estimate_period};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let period = 7.3;
    let series: Vec<f64> = (0..300)
        .map(|n| {
            3.0 + (2.0 * std::f64::consts::PI * n as f64 / period).cos()
                + 0.3 * (0.9 * n as f64).sin()
        })
        .collect();
    let r = autocorrelation(&series, 12);
    for (lag, v) in r.iter().enumerate() {
        println!("lag {lag:>2}: {v:+.3}");
    }
    let est = estimate_period(&series, 2)?;
    print!("{est}");
    assert!((est.period - period).abs() / period < 0.01);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
