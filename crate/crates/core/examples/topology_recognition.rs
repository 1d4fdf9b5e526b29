// Contractibility, spheres and manifolds by recursive rim checks.

use digiwave::graph::Graph;
use digiwave::topology::{self, minimal_sphere, Recognizer};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for n in 0..=4 {
        let s = minimal_sphere(n);
        let ok = topology::is_n_sphere(&s, n)?;
        println!(
            "minimal {n}-sphere: {} points, chi = {}, sphere = {ok}",
            s.n_points(),
            s.euler_characteristic()
        );
        assert!(ok);
    }

    let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)])?;
    let cycle = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])?;
    println!("path contractible: {}", topology::is_contractible(&path)?);
    println!("C4 contractible: {}", topology::is_contractible(&cycle)?);
    assert!(!topology::is_contractible(&cycle)?);

    // A cone is contractible; greedy deletion shows it.
    let cone = cycle.join(&Graph::isolated(1));
    let reduction = Recognizer::default().simple_point_reduction(&cone)?;
    println!(
        "cone reduces to {} point(s) via {:?}",
        reduction.residual.n_points(),
        reduction.deleted
    );

    let verdict = Recognizer::default().classify(&minimal_sphere(2))?;
    println!("octahedron classified as {:?}", verdict.kind);
    println!(
        "octahedron is a 2-manifold: {}",
        topology::is_n_manifold(&minimal_sphere(2), 2)?
    );
    Ok(())
}

fn main() {
    run_example().unwrap();
}
