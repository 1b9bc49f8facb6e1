//! Treewidth across the spasms of C7 and C8, and one nice decomposition.
//!
//! The counting cost of a basis is governed by its widest graph, so this
//! is the number that decides how large a host is affordable.

use std::collections::BTreeMap;

use homspasm::decomp::{to_nice, treewidth_exact, validate_nice};
use homspasm::graph::Graph;
use homspasm::spasm::spasm_of;

fn main() {
    for n in [5, 6, 7, 8] {
        let basis = spasm_of(&Graph::cycle(n)).unwrap();
        let mut histogram: BTreeMap<i64, usize> = BTreeMap::new();
        for t in basis.terms() {
            let (w, _) = treewidth_exact(t.graph()).unwrap();
            *histogram.entry(w).or_default() += 1;
        }
        println!(
            "C{n}: {} basis graphs, treewidth histogram {histogram:?}",
            basis.len()
        );
    }

    let c6 = Graph::cycle(6);
    let (w, td) = treewidth_exact(&c6).unwrap();
    let nice = to_nice(&td, Some(0)).unwrap();
    validate_nice(&nice, &c6).unwrap();
    println!(
        "C6 has treewidth {w}; its nice decomposition rooted at vertex 0 has {} nodes",
        nice.nodes.len()
    );
    println!("{}", serde_json::to_string_pretty(&td.to_json()).unwrap());
}
