//! Graphlet counts as a graph motif parameter.
//!
//! The number of connected induced 4-vertex subgraphs is expanded into
//! homomorphism counts once, then evaluated on random hosts and compared
//! with brute-force induced counts summed over the six connected 4-vertex
//! graphs.

use homspasm::graph::enumerate_connected_graphs;
use homspasm::graph::Graph;
use homspasm::homcount::{evaluate, HostGraph};
use homspasm::oracle::brute_indsub;
use homspasm::spasm::{indsub_property_param, predicates};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let param = indsub_property_param(4, &predicates::connected).unwrap();
    println!("connected 4-graphlets: {} basis graphs", param.len());
    for t in param.terms() {
        println!("  {:>4}  {}", t.coefficient().to_string(), t.key());
    }

    let shapes = enumerate_connected_graphs(4, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..5 {
        let n = rng.gen_range(6..=9);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(0.4))
            .collect();
        let g = Graph::new(n, edges).unwrap();
        let via_basis = evaluate(&param, &HostGraph::from(&g)).unwrap();
        let brute: BigUint = shapes.iter().map(|s| brute_indsub(s, &g).unwrap()).sum();
        println!("{g}: {via_basis} connected 4-vertex induced subgraphs (brute force {brute})");
    }
}
