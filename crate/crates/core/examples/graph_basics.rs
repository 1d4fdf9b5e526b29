// Rims, balls, joins and clique counts on small graphs.

use digiwave::graph::Graph;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])?;
    println!(
        "C4: {} points, {} edges, chi = {}",
        c4.n_points(),
        c4.n_edges(),
        c4.euler_characteristic()
    );
    println!("rim of 0: {:?}", c4.rim(0)?);
    println!("ball of 0: {} points", c4.ball(0)?.n_points());

    // Join with two points gives the octahedron.
    let s0 = Graph::isolated(2);
    let oct = c4.join(&s0);
    let counts = oct.clique_counts();
    println!(
        "C4 + S0: cliques {counts:?}, chi = {}",
        oct.euler_characteristic()
    );
    assert_eq!(counts, vec![6, 12, 8]);
    assert_eq!(oct.euler_characteristic(), 2);

    let text = oct.to_text();
    let back: Graph = text.parse()?;
    assert_eq!(back, oct);
    print!("{text}");
    Ok(())
}

fn main() {
    run_example().unwrap();
}
