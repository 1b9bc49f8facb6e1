//! Node-level counts through anchored bases.
//!
//! First the anchored basis of the 4-cycle, then the star example showing
//! why the anchor matters: the middle-anchored and end-anchored 3-vertex
//! paths give different per-vertex homomorphism counts.

use homspasm::graph::{AnchoredGraph, Graph};
use homspasm::homcount::{evaluate_node, hom_count_node, HostGraph};
use homspasm::spasm::anchored_spasm_of;

fn main() {
    let c4 = AnchoredGraph::new(Graph::cycle(4), 0).unwrap();
    let basis = anchored_spasm_of(&c4).unwrap();
    println!("anchored basis of C4 ({} terms):", basis.len());
    for t in basis.terms() {
        println!("  {:>5}  {}", t.coefficient().to_string(), t.key());
    }

    // Two triangles sharing vertex 0, and a 4-cycle 3-4-5-6 through the second.
    let host = HostGraph::new(
        7,
        &[
            (0, 1),
            (1, 2),
            (2, 0),
            (0, 3),
            (3, 4),
            (4, 0),
            (4, 5),
            (5, 6),
            (6, 3),
        ],
    )
    .unwrap();
    let per_vertex = evaluate_node(&basis, &host).unwrap();
    println!("4-cycles through each host vertex:");
    for (v, c) in per_vertex.iter().enumerate() {
        println!("  vertex {v}: {c}");
    }

    let star = HostGraph::from(&Graph::star(9));
    let middle = AnchoredGraph::new(Graph::path(3), 1).unwrap();
    let end = AnchoredGraph::new(Graph::path(3), 0).unwrap();
    let m = hom_count_node(&middle, &star).unwrap();
    let e = hom_count_node(&end, &star).unwrap();
    println!("star with 9 leaves, centre vertex 0:");
    println!(
        "  P3 anchored in the middle: centre {}, leaf {}",
        m.counts[0], m.counts[1]
    );
    println!(
        "  P3 anchored at an end:     centre {}, leaf {}",
        e.counts[0], e.counts[1]
    );
}
