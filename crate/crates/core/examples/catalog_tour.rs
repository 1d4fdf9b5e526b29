// Built-in spaces with their verified invariants.

use digiwave::catalog::{catalog, CatalogName};
use digiwave::topology;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for name in CatalogName::representatives() {
        let entry = catalog(name)?;
        let g = &entry.graph;
        let orientable = if g.n_points() > 3 {
            topology::is_orientable(g)
                .map(|o| o.to_string())
                .unwrap_or_else(|_| "-".into())
        } else {
            "-".into()
        };
        println!(
            "{:<16} points={:<3} edges={:<3} chi={:<2} orientable={orientable}",
            name.to_string(),
            g.n_points(),
            g.n_edges(),
            g.euler_characteristic()
        );
    }
    let klein = catalog(CatalogName::Klein16)?.graph;
    assert!(topology::is_n_manifold(&klein, 2)?);
    assert!(!topology::is_orientable(&klein)?);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
