//! Canonical labeling by color refinement plus individualization search.
//!
//! Every search node refines its ordered partition to an equitable one and
//! branches on the first non-singleton cell, one child per orbit of the
//! current pointwise stabilizer. Orbits are decided exactly with a
//! backtracking isomorphism test, so symmetric graphs collapse to a handful
//! of leaves. The canonical labeling is the leaf whose adjacency bit string
//! (graph6 bit order) is smallest.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{format_graph6, AnchoredGraph, Graph};

/// Isomorphism-invariant identity of a graph (or anchored graph).
///
/// `graph6` is the graph6 encoding of the graph under its canonical labeling.
/// For anchored graphs `anchor` is the smallest canonical index in the
/// anchor's automorphism orbit, so two anchored graphs share a key iff an
/// anchor-preserving isomorphism exists.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalKey {
    pub graph6: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<usize>,
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.anchor {
            Some(a) => write!(f, "{}@{}", self.graph6, a),
            None => f.write_str(&self.graph6),
        }
    }
}

impl std::str::FromStr for CanonicalKey {
    type Err = crate::error::Error;

    /// Parses `g6` or `g6@a`, checking the graph6 text and anchor range.
    /// Does not check that the text is actually canonical.
    fn from_str(s: &str) -> crate::error::Result<Self> {
        let (text, anchor) = super::graph6::split_anchor(s)?;
        let g = super::parse_graph6(text)?;
        if let Some(a) = anchor {
            AnchoredGraph::new(g, a)?;
        }
        Ok(CanonicalKey {
            graph6: text.to_string(),
            anchor,
        })
    }
}

/// Result of canonicalization.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub key: CanonicalKey,
    /// The input relabeled by `perm`.
    pub graph: Graph,
    /// `perm[v]` is the canonical index of input vertex `v`.
    pub perm: Vec<usize>,
}

impl CanonicalForm {
    /// The canonical anchored graph, when the key carries an anchor.
    pub fn anchored(&self) -> Option<AnchoredGraph> {
        self.key
            .anchor
            .map(|a| AnchoredGraph::new(self.graph.clone(), a).expect("canonical anchor in range"))
    }
}

/// Compact complete invariant used for hashing inside the crate. Equal
/// certificates mean isomorphic (anchor-preserving when built with an
/// anchor).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Certificate {
    n: usize,
    anchored: bool,
    bits: Vec<u64>,
}

type Cells = Vec<Vec<usize>>;

struct Ctx {
    n: usize,
    adj: Vec<bool>,
}

impl Ctx {
    fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut adj = vec![false; n * n];
        for &(u, v) in g.edges() {
            adj[u * n + v] = true;
            adj[v * n + u] = true;
        }
        Ctx { n, adj }
    }

    #[inline]
    fn edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    /// Splits cells by neighbor counts into each splitter until equitable.
    fn refine(&self, cells: &mut Cells) {
        let mut in_splitter = vec![false; self.n];
        loop {
            let mut changed = false;
            let mut s = 0;
            while s < cells.len() {
                for &v in &cells[s] {
                    in_splitter[v] = true;
                }
                let mut next: Cells = Vec::with_capacity(cells.len() + 1);
                let mut new_s = s;
                for (idx, cell) in cells.drain(..).enumerate() {
                    if cell.len() == 1 {
                        next.push(cell);
                        continue;
                    }
                    let mut keyed: Vec<(usize, usize)> = cell
                        .iter()
                        .map(|&v| {
                            let c = (0..self.n)
                                .filter(|&w| in_splitter[w] && self.edge(v, w))
                                .count();
                            (c, v)
                        })
                        .collect();
                    if keyed.iter().all(|&(c, _)| c == keyed[0].0) {
                        next.push(cell);
                        continue;
                    }
                    keyed.sort_unstable();
                    changed = true;
                    let mut group = Vec::new();
                    let mut current = keyed[0].0;
                    let mut pieces = 0;
                    for (c, v) in keyed {
                        if c != current {
                            next.push(std::mem::take(&mut group));
                            pieces += 1;
                            current = c;
                        }
                        group.push(v);
                    }
                    next.push(group);
                    if idx < s {
                        new_s += pieces;
                    }
                }
                for w in in_splitter.iter_mut() {
                    *w = false;
                }
                *cells = next;
                s = new_s + 1;
            }
            if !changed {
                break;
            }
        }
    }

    fn bits_for(&self, inv: &[usize]) -> Vec<u64> {
        let n = self.n;
        let total = n * n.saturating_sub(1) / 2;
        let mut bits = vec![0u64; total.div_ceil(64)];
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if self.edge(inv[i], inv[j]) {
                    bits[k / 64] |= 1u64 << (63 - (k % 64));
                }
                k += 1;
            }
        }
        bits
    }

    /// Searches for an isomorphism between the colored graphs `a` and `b`
    /// (the same underlying graph, different ordered partitions).
    fn exists_iso(&self, mut a: Cells, mut b: Cells) -> bool {
        self.refine(&mut a);
        self.refine(&mut b);
        if a.len() != b.len() || a.iter().zip(&b).any(|(x, y)| x.len() != y.len()) {
            return false;
        }
        match first_nontrivial(&a) {
            None => {
                let mut map = vec![0; self.n];
                for (x, y) in a.iter().zip(&b) {
                    map[x[0]] = y[0];
                }
                (0..self.n)
                    .all(|u| (u + 1..self.n).all(|v| self.edge(u, v) == self.edge(map[u], map[v])))
            }
            Some(t) => {
                let v = a[t][0];
                let targets = b[t].clone();
                targets
                    .into_iter()
                    .any(|w| self.exists_iso(individualize(&a, t, v), individualize(&b, t, w)))
            }
        }
    }

    /// Orbit representatives of the target cell under the stabilizer of the
    /// current (refined) coloring.
    fn orbit_representatives(&self, cells: &Cells, t: usize) -> Vec<(usize, usize)> {
        // (representative, orbit size)
        let mut reps: Vec<(usize, usize)> = Vec::new();
        for &w in &cells[t] {
            let found = reps.iter().position(|&(r, _)| {
                self.exists_iso(individualize(cells, t, r), individualize(cells, t, w))
            });
            match found {
                Some(i) => reps[i].1 += 1,
                None => reps.push((w, 1)),
            }
        }
        reps
    }

    fn search(&self, mut cells: Cells, best: &mut Option<(Vec<u64>, Vec<usize>)>) {
        self.refine(&mut cells);
        match first_nontrivial(&cells) {
            None => {
                let inv: Vec<usize> = cells.iter().map(|c| c[0]).collect();
                let bits = self.bits_for(&inv);
                if best.as_ref().is_none_or(|(b, _)| bits < *b) {
                    *best = Some((bits, inv));
                }
            }
            Some(t) => {
                for (r, _) in self.orbit_representatives(&cells, t) {
                    self.search(individualize(&cells, t, r), best);
                }
            }
        }
    }

    fn automorphisms(&self, mut cells: Cells) -> u128 {
        self.refine(&mut cells);
        match first_nontrivial(&cells) {
            None => 1,
            Some(t) => {
                let v = cells[t][0];
                let orbit = 1 + cells[t][1..]
                    .iter()
                    .filter(|&&w| {
                        self.exists_iso(individualize(&cells, t, v), individualize(&cells, t, w))
                    })
                    .count();
                (orbit as u128)
                    .checked_mul(self.automorphisms(individualize(&cells, t, v)))
                    .expect("automorphism count overflow")
            }
        }
    }
}

fn first_nontrivial(cells: &Cells) -> Option<usize> {
    cells.iter().position(|c| c.len() > 1)
}

fn individualize(cells: &Cells, t: usize, v: usize) -> Cells {
    let mut out = Vec::with_capacity(cells.len() + 1);
    out.extend_from_slice(&cells[..t]);
    out.push(vec![v]);
    out.push(cells[t].iter().copied().filter(|&w| w != v).collect());
    out.extend_from_slice(&cells[t + 1..]);
    out
}

fn initial_cells(n: usize, anchor: Option<usize>) -> Cells {
    match anchor {
        None if n == 0 => Vec::new(),
        None => vec![(0..n).collect()],
        Some(a) => {
            let rest: Vec<usize> = (0..n).filter(|&v| v != a).collect();
            if rest.is_empty() {
                vec![vec![a]]
            } else {
                vec![vec![a], rest]
            }
        }
    }
}

/// Canonical bit string and the vertex at each canonical position.
fn canonical_labeling(g: &Graph, anchor: Option<usize>) -> (Vec<u64>, Vec<usize>) {
    let ctx = Ctx::new(g);
    if g.vertex_count() == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut best = None;
    ctx.search(initial_cells(g.vertex_count(), anchor), &mut best);
    best.expect("search visits at least one leaf")
}

pub(crate) fn certificate(g: &Graph, anchor: Option<usize>) -> Certificate {
    let (bits, _) = canonical_labeling(g, anchor);
    Certificate {
        n: g.vertex_count(),
        anchored: anchor.is_some(),
        bits,
    }
}

fn inverse(inv: &[usize]) -> Vec<usize> {
    let mut perm = vec![0; inv.len()];
    for (pos, &v) in inv.iter().enumerate() {
        perm[v] = pos;
    }
    perm
}

/// Canonical labeling of `g` and its key.
pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let (_, inv) = canonical_labeling(g, None);
    let perm = inverse(&inv);
    let graph = g.relabel(&perm);
    CanonicalForm {
        key: CanonicalKey {
            graph6: format_graph6(&graph),
            anchor: None,
        },
        graph,
        perm,
    }
}

/// Canonical labeling of an anchored graph. The relabeled graph is the
/// canonical form of the underlying graph and the anchor lands on the
/// smallest index of its orbit.
pub fn canonical_form_anchored(ag: &AnchoredGraph) -> CanonicalForm {
    let base = canonical_form(ag.graph());
    let c = &base.graph;
    let a = base.perm[ag.anchor()];
    let (code_a, inv_a) = canonical_labeling(c, Some(a));
    let mut target = a;
    let mut inv_target = None;
    for j in 0..a {
        if c.degree(j) != c.degree(a) {
            continue;
        }
        let (code_j, inv_j) = canonical_labeling(c, Some(j));
        if code_j == code_a {
            target = j;
            inv_target = Some(inv_j);
            break;
        }
    }
    let perm = match inv_target {
        None => base.perm.clone(),
        Some(inv_j) => {
            // gamma: automorphism of c sending a to target.
            let lab_a = inverse(&inv_a);
            let gamma: Vec<usize> = (0..c.vertex_count()).map(|x| inv_j[lab_a[x]]).collect();
            base.perm.iter().map(|&p| gamma[p]).collect()
        }
    };
    CanonicalForm {
        key: CanonicalKey {
            graph6: base.key.graph6,
            anchor: Some(target),
        },
        graph: base.graph,
        perm,
    }
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    g.vertex_count() == h.vertex_count()
        && g.edge_count() == h.edge_count()
        && certificate(g, None) == certificate(h, None)
}

/// Isomorphism test that must map anchor to anchor.
pub fn is_isomorphic_anchored(g: &AnchoredGraph, h: &AnchoredGraph) -> bool {
    g.graph().vertex_count() == h.graph().vertex_count()
        && g.graph().edge_count() == h.graph().edge_count()
        && certificate(g.graph(), Some(g.anchor())) == certificate(h.graph(), Some(h.anchor()))
}

/// Number of automorphisms of `g`.
pub fn automorphism_count(g: &Graph) -> u128 {
    if g.vertex_count() == 0 {
        return 1;
    }
    Ctx::new(g).automorphisms(initial_cells(g.vertex_count(), None))
}

/// Number of automorphisms of the underlying graph that fix the anchor.
pub fn anchored_automorphism_count(g: &AnchoredGraph) -> u128 {
    Ctx::new(g.graph()).automorphisms(initial_cells(g.graph().vertex_count(), Some(g.anchor())))
}
