//! Simple undirected graphs, anchored graphs and the graph algebra used by
//! the basis computations.
//!
//! Vertices are always `0..n`. A [`Graph`] is immutable once built; every
//! constructor normalizes and validates its edge list.

pub(crate) mod canon;
mod enumerate;
mod graph6;
mod partition;

use std::fmt;

use crate::error::{Error, Result};

pub use canon::{
    anchored_automorphism_count, automorphism_count, canonical_form, canonical_form_anchored,
    is_isomorphic, is_isomorphic_anchored, CanonicalForm, CanonicalKey,
};
pub use enumerate::{
    enumerate_connected_graphs, enumerate_connected_graphs_with_limit, enumerate_graphs,
    CONNECTED_GRAPH_VERTEX_LIMIT,
};
pub use graph6::{format_graph6, named_pattern, parse_graph6, parse_pattern, Pattern};
pub use partition::{
    enumerate_partitions, enumerate_partitions_with_limit, quotient, quotient_anchored, Partition,
    PartitionIter, PARTITION_VERTEX_LIMIT,
};

/// A simple undirected graph on the vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list. Edges may be given in either
    /// orientation; self-loops, duplicates and out-of-range endpoints are
    /// rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({},{})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted_edges(n, normalized))
    }

    /// Builds a graph from edges that may contain duplicates; duplicates are
    /// merged. Self-loops are still rejected.
    pub fn from_edges_merging(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut normalized: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidGraph(format!("bad edge ({u},{v}) for n={n}")));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        normalized.dedup();
        Ok(Self::from_sorted_edges(n, normalized))
    }

    pub(crate) fn from_sorted_edges(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph {
            n,
            edges,
            adjacency,
        }
    }

    /// The graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Self::from_sorted_edges(n, Vec::new())
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn complete(n: usize) -> Self {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid clique")
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("valid star")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.component_labels().1 == 1
    }

    /// Component label per vertex, numbered in order of the smallest vertex,
    /// together with the number of components.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &w in &self.adjacency[u] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Subgraph induced by `vertices`, relabeled `0..k` in the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut position = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            position[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adjacency[v] {
                let j = position[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(vertices.len(), edges).expect("induced subgraph of a valid graph")
    }

    /// The same graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length mismatch");
        Graph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
            .expect("relabeling of a valid graph")
    }

    /// Adds the given edges (which must be new) and returns the result.
    pub fn with_edges(&self, extra: &[(usize, usize)]) -> Result<Graph> {
        Graph::new(
            self.n,
            self.edges.iter().copied().chain(extra.iter().copied()),
        )
    }

    /// Unordered vertex pairs that are not edges.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_graph6(self))
    }
}

/// A graph with one marked vertex.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AnchoredGraph {
    graph: Graph,
    anchor: usize,
}

impl AnchoredGraph {
    pub fn new(graph: Graph, anchor: usize) -> Result<Self> {
        if anchor >= graph.vertex_count() {
            return Err(Error::AnchorOutOfRange {
                anchor,
                n: graph.vertex_count(),
            });
        }
        Ok(AnchoredGraph { graph, anchor })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    pub fn into_parts(self) -> (Graph, usize) {
        (self.graph, self.anchor)
    }
}

impl fmt::Display for AnchoredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", format_graph6(&self.graph), self.anchor)
    }
}

/// `g + h`: the vertices of `h` follow those of `g`.
pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let shift = g.vertex_count();
    let edges = g
        .edges()
        .iter()
        .copied()
        .chain(h.edges().iter().map(|&(u, v)| (u + shift, v + shift)));
    Graph::new(g.vertex_count() + h.vertex_count(), edges).expect("union of valid graphs")
}

/// `g × h`: vertex `(a, u)` is numbered `a * h.n + u`; `(a,u) ~ (b,v)` iff
/// `a ~ b` in `g` and `u ~ v` in `h`.
pub fn categorical_product(g: &Graph, h: &Graph) -> Graph {
    let hn = h.vertex_count();
    let mut edges = Vec::with_capacity(2 * g.edge_count() * h.edge_count());
    for &(a, b) in g.edges() {
        for &(u, v) in h.edges() {
            edges.push((a * hn + u, b * hn + v));
            edges.push((a * hn + v, b * hn + u));
        }
    }
    Graph::new(g.vertex_count() * hn, edges).expect("product of valid graphs")
}

/// Maximal connected components, each relabeled `0..k` preserving the
/// relative vertex order, listed by smallest original vertex.
pub fn connected_components(g: &Graph) -> Vec<Graph> {
    component_vertex_sets(g)
        .iter()
        .map(|vs| g.induced_subgraph(vs))
        .collect()
}

/// Vertex sets of the connected components, each sorted ascending.
pub fn component_vertex_sets(g: &Graph) -> Vec<Vec<usize>> {
    let (label, count) = g.component_labels();
    let mut sets = vec![Vec::new(); count];
    for (v, &c) in label.iter().enumerate() {
        sets[c].push(v);
    }
    sets
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_duplicates_and_range() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
        assert!(Graph::from_edges_merging(3, [(0, 1), (1, 0)]).is_ok());
    }

    #[test]
    fn product_of_two_edges_is_two_edges() {
        let k2 = Graph::complete(2);
        let p = categorical_product(&k2, &k2);
        assert_eq!(p.vertex_count(), 4);
        assert_eq!(p.edge_count(), 2);
        // (0,0)-(1,1) and (0,1)-(1,0)
        assert!(p.has_edge(0, 3));
        assert!(p.has_edge(1, 2));
    }

    #[test]
    fn product_edge_count_matches_hom_identity() {
        // Hom(K2, G×H) = Hom(K2,G)·Hom(K2,H): 2|E| = 6·6.
        let k3 = Graph::complete(3);
        assert_eq!(categorical_product(&k3, &k3).edge_count(), 18);
    }

    #[test]
    fn union_with_empty_graph_is_identity() {
        let g = Graph::cycle(5);
        assert_eq!(disjoint_union(&g, &Graph::empty(0)), g);
        let two = disjoint_union(&g, &Graph::complete(2));
        assert_eq!(two.vertex_count(), 7);
        assert!(two.has_edge(5, 6));
    }

    #[test]
    fn components() {
        let two_triangles = disjoint_union(&Graph::complete(3), &Graph::complete(3));
        let comps = connected_components(&two_triangles);
        assert_eq!(comps, vec![Graph::complete(3), Graph::complete(3)]);
        assert_eq!(
            connected_components(&Graph::cycle(5)),
            vec![Graph::cycle(5)]
        );
        let g = disjoint_union(&Graph::cycle(5), &Graph::complete(2));
        assert_eq!(connected_components(&g).len(), 2);
        let isolated = Graph::empty(3);
        assert_eq!(connected_components(&isolated), vec![Graph::empty(1); 3]);
    }

    #[test]
    fn anchored_range_checked() {
        assert!(AnchoredGraph::new(Graph::path(3), 3).is_err());
        assert_eq!(AnchoredGraph::new(Graph::path(3), 1).unwrap().anchor(), 1);
    }
}
