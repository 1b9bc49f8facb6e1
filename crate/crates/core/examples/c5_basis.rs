//! The homomorphism basis of the 5-cycle and what it computes.
//!
//! Prints every basis graph with its exact coefficient, then counts
//! 5-cycles in the Petersen graph twice: through the basis and by brute
//! force.

use homspasm::graph::Graph;
use homspasm::homcount::{evaluate, hom_count, HostGraph};
use homspasm::oracle::brute_sub;
use homspasm::spasm::spasm_of;

fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::new(10, outer.chain(spokes).chain(inner)).unwrap()
}

fn main() {
    let c5 = Graph::cycle(5);
    let basis = spasm_of(&c5).unwrap();
    let host = HostGraph::from(&petersen());

    println!("Sub(C5, H) = sum of coefficient * Hom(F, H) over:");
    for t in basis.terms() {
        let g = t.graph();
        println!(
            "  {:>5}  {:<6} ({} vertices, {} edges)  Hom(F, Petersen) = {}",
            t.coefficient().to_string(),
            t.key().to_string(),
            g.vertex_count(),
            g.edge_count(),
            hom_count(g, &host).unwrap()
        );
    }

    let via_basis = evaluate(&basis, &host).unwrap();
    let direct = brute_sub(&c5, &petersen()).unwrap();
    println!("5-cycles in the Petersen graph: {via_basis} (brute force {direct})");
}
