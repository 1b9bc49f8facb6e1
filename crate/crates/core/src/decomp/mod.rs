//! Exact treewidth, tree decompositions and their nice form.

mod nice;
mod validate;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use nice::{to_nice, NiceNode, NiceTreeDecomposition};
pub use validate::{validate, validate_nice, Violation};

/// Largest graph [`treewidth_exact`] accepts.
pub const TREEWIDTH_VERTEX_LIMIT: usize = 14;

/// Bags of pattern vertices joined by tree edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Largest bag size minus one; -1 when there are no vertices.
    pub fn width(&self) -> i64 {
        self.bags.iter().map(|b| b.len() as i64).max().unwrap_or(0) - 1
    }

    /// JSON debug dump `{bags, edges, width, kind}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "bags": self.bags,
            "edges": self.edges,
            "width": self.width(),
            "kind": "tree",
        })
    }
}

/// Vertices reachable from `v` through `inner` (excluding `inner` and `v`).
fn reach_outside(adj: &[u32], inner: u32, v: usize) -> u32 {
    let mut seen = 1u32 << v;
    let mut frontier = 1u32 << v;
    let mut out = 0u32;
    while frontier != 0 {
        let u = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let nb = adj[u] & !seen;
        seen |= nb;
        out |= nb & !inner;
        frontier |= nb & inner;
    }
    out
}

/// Exact treewidth by dynamic programming over vertex subsets: `tw(S)` is
/// the best width of an elimination ordering that starts with `S`, and
/// eliminating `v` after `S` costs the number of later vertices reachable
/// from `v` through `S`.
pub fn treewidth_exact(g: &Graph) -> Result<(i64, TreeDecomposition)> {
    let n = g.vertex_count();
    if n > TREEWIDTH_VERTEX_LIMIT {
        return Err(Error::LimitExceeded {
            what: "treewidth vertex count",
            value: n,
            limit: TREEWIDTH_VERTEX_LIMIT,
        });
    }
    if n == 0 {
        return Ok((
            -1,
            TreeDecomposition {
                bags: vec![Vec::new()],
                edges: Vec::new(),
            },
        ));
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let full = (1usize << n) - 1;
    let mut best = vec![i64::MAX; 1 << n];
    let mut choice = vec![0u8; 1 << n];
    best[0] = -1;
    for set in 1..=full {
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let before = set & !(1 << v);
            let cost = reach_outside(&adj, before as u32, v).count_ones() as i64;
            let w = best[before].max(cost);
            if w < best[set] {
                best[set] = w;
                choice[set] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut set = full;
    while set != 0 {
        let v = choice[set] as usize;
        order.push(v);
        set &= !(1 << v);
    }
    order.reverse();
    let td = decomposition_from_order(g, &order);
    debug_assert_eq!(td.width(), best[full]);
    Ok((best[full], td))
}

/// Runs the elimination game along `order` and returns the induced tree
/// decomposition: one bag per vertex holding it and its later fill
/// neighbors, hung below the earliest-eliminated later neighbor.
pub fn decomposition_from_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.vertex_count();
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut fill: Vec<Vec<bool>> = vec![vec![false; n]; n];
    for &(u, v) in g.edges() {
        fill[u][v] = true;
        fill[v][u] = true;
    }
    let mut bags = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<usize> = order[i + 1..]
            .iter()
            .copied()
            .filter(|&w| fill[v][w])
            .collect();
        for (a, &x) in later.iter().enumerate() {
            for &y in &later[a + 1..] {
                fill[x][y] = true;
                fill[y][x] = true;
            }
        }
        parent[i] = later.iter().map(|&w| position[w]).min();
        let mut bag = later;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
    }
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, p) in parent.iter().enumerate() {
        match p {
            Some(p) => edges.push((i.min(*p), i.max(*p))),
            None => roots.push(i),
        }
    }
    // One tree per component; chain the component roots together.
    for w in roots.windows(2) {
        edges.push((w[0].min(w[1]), w[0].max(w[1])));
    }
    edges.sort_unstable();
    TreeDecomposition { bags, edges }
}
