use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::canon::canonical_form;
use super::Graph;

/// Default vertex cap for graph enumeration (1044 graphs on 7 vertices).
pub const CONNECTED_GRAPH_VERTEX_LIMIT: usize = 7;

/// One canonical representative per isomorphism class of graphs on exactly
/// `n` vertices, ordered by (edge count, canonical key).
pub fn enumerate_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > CONNECTED_GRAPH_VERTEX_LIMIT {
        return Err(Error::LimitExceeded {
            what: "graph enumeration vertex count",
            value: n,
            limit: CONNECTED_GRAPH_VERTEX_LIMIT,
        });
    }
    let mut out = Vec::new();
    let mut layer: BTreeMap<String, Graph> = BTreeMap::new();
    let empty = canonical_form(&Graph::empty(n));
    layer.insert(empty.key.graph6, empty.graph);
    while !layer.is_empty() {
        let mut next = BTreeMap::new();
        for g in layer.values() {
            for (u, v) in g.non_edges() {
                let cf = canonical_form(&g.with_edges(&[(u, v)]).expect("non-edge"));
                next.entry(cf.key.graph6).or_insert(cf.graph);
            }
        }
        out.extend(std::mem::replace(&mut layer, next).into_values());
    }
    Ok(out)
}

/// Connected graphs with `min..=max` vertices, one per isomorphism class,
/// ordered by (vertex count, edge count, canonical key).
pub fn enumerate_connected_graphs(min_vertices: usize, max_vertices: usize) -> Result<Vec<Graph>> {
    enumerate_connected_graphs_with_limit(min_vertices, max_vertices, CONNECTED_GRAPH_VERTEX_LIMIT)
}

pub fn enumerate_connected_graphs_with_limit(
    min_vertices: usize,
    max_vertices: usize,
    limit: usize,
) -> Result<Vec<Graph>> {
    if max_vertices > limit.min(CONNECTED_GRAPH_VERTEX_LIMIT) {
        return Err(Error::LimitExceeded {
            what: "connected graph enumeration vertex count",
            value: max_vertices,
            limit: limit.min(CONNECTED_GRAPH_VERTEX_LIMIT),
        });
    }
    if min_vertices == 0 || min_vertices > max_vertices {
        return Err(Error::InvalidGraph(format!(
            "need 1 <= min <= max, got min={min_vertices} max={max_vertices}"
        )));
    }
    let mut out = Vec::new();
    for n in min_vertices..=max_vertices {
        out.extend(enumerate_graphs(n)?.into_iter().filter(Graph::is_connected));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn known_counts() {
        // OEIS A000088 and A001349.
        let all: Vec<usize> = (0..=6)
            .map(|n| enumerate_graphs(n).unwrap().len())
            .collect();
        assert_eq!(all, vec![1, 1, 2, 4, 11, 34, 156]);
        assert_eq!(enumerate_connected_graphs(2, 5).unwrap().len(), 30);
        assert_eq!(enumerate_connected_graphs(1, 1).unwrap().len(), 1);
        assert_eq!(enumerate_connected_graphs(4, 4).unwrap().len(), 6);
        assert!(enumerate_connected_graphs(2, 8).is_err());
    }

    #[test]
    fn four_vertex_connected_by_brute_force() {
        let pairs: Vec<(usize, usize)> = (0..4)
            .flat_map(|u| (u + 1..4).map(move |v| (u, v)))
            .collect();
        let mut keys = HashSet::new();
        for mask in 0u32..64 {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e);
            let g = Graph::new(4, edges).unwrap();
            if g.is_connected() {
                keys.insert(canonical_form(&g).key);
            }
        }
        let enumerated: HashSet<_> = enumerate_connected_graphs(4, 4)
            .unwrap()
            .iter()
            .map(|g| canonical_form(g).key)
            .collect();
        assert_eq!(keys, enumerated);
    }

    #[test]
    fn order_is_by_size_then_edges() {
        let gs = enumerate_connected_graphs(1, 5).unwrap();
        for w in gs.windows(2) {
            let a = (w[0].vertex_count(), w[0].edge_count());
            let b = (w[1].vertex_count(), w[1].edge_count());
            assert!(a <= b);
        }
    }
}
