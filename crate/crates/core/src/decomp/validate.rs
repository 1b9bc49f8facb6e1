use std::fmt;

use super::{NiceNode, NiceTreeDecomposition, TreeDecomposition};
use crate::graph::Graph;

/// The first broken decomposition invariant found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotATree(String),
    VertexOutOfRange {
        bag: usize,
        vertex: usize,
    },
    VertexUncovered(usize),
    EdgeUncovered(usize, usize),
    VertexNotConnected(usize),
    NonEmptyLeaf(usize),
    BadIntroduce(usize),
    BadForget(usize),
    BadJoin(usize),
    ChildAfterParent(usize),
    RootBag {
        expected: Vec<usize>,
        found: Vec<usize>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotATree(why) => write!(f, "not a tree: {why}"),
            Violation::VertexOutOfRange { bag, vertex } => {
                write!(f, "bag {bag} names vertex {vertex} outside the graph")
            }
            Violation::VertexUncovered(v) => write!(f, "vertex {v} uncovered"),
            Violation::EdgeUncovered(u, v) => write!(f, "edge ({u},{v}) uncovered"),
            Violation::VertexNotConnected(v) => write!(f, "vertex {v} not connected"),
            Violation::NonEmptyLeaf(i) => write!(f, "leaf node {i} has a nonempty bag"),
            Violation::BadIntroduce(i) => {
                write!(f, "introduce node {i} does not add exactly its vertex")
            }
            Violation::BadForget(i) => {
                write!(f, "forget node {i} does not drop exactly its vertex")
            }
            Violation::BadJoin(i) => write!(f, "join node {i} children bags differ from its bag"),
            Violation::ChildAfterParent(i) => {
                write!(f, "node {i} refers to a child that does not precede it")
            }
            Violation::RootBag { expected, found } => {
                write!(f, "root bag is {found:?}, expected {expected:?}")
            }
        }
    }
}

impl std::error::Error for Violation {}

/// Checks coverage and connectivity for bags over a tree given by adjacency.
fn check_bags(bags: &[Vec<usize>], adj: &[Vec<usize>], g: &Graph) -> Result<(), Violation> {
    let n = g.vertex_count();
    let mut holders = vec![Vec::new(); n];
    for (i, bag) in bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                return Err(Violation::VertexOutOfRange { bag: i, vertex: v });
            }
            holders[v].push(i);
        }
    }
    if let Some(v) = holders.iter().position(Vec::is_empty) {
        return Err(Violation::VertexUncovered(v));
    }
    for &(u, v) in g.edges() {
        if !bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
            return Err(Violation::EdgeUncovered(u, v));
        }
    }
    let mut mark = vec![false; bags.len()];
    for (v, hs) in holders.iter().enumerate() {
        for &h in hs {
            mark[h] = true;
        }
        let mut seen = vec![false; bags.len()];
        let mut stack = vec![hs[0]];
        seen[hs[0]] = true;
        let mut reached = 1;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if mark[y] && !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    stack.push(y);
                }
            }
        }
        for &h in hs {
            mark[h] = false;
        }
        if reached != hs.len() {
            return Err(Violation::VertexNotConnected(v));
        }
    }
    Ok(())
}

fn tree_adjacency(k: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<usize>>, Violation> {
    if k == 0 {
        return Err(Violation::NotATree("no bags".into()));
    }
    if edges.len() != k - 1 {
        return Err(Violation::NotATree(format!(
            "{} edges for {k} bags",
            edges.len()
        )));
    }
    let mut adj = vec![Vec::new(); k];
    for &(a, b) in edges {
        if a >= k || b >= k || a == b {
            return Err(Violation::NotATree(format!("bad edge ({a},{b})")));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; k];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Violation::NotATree("disconnected".into()));
    }
    Ok(adj)
}

/// Checks every tree decomposition invariant against `g`.
pub fn validate(td: &TreeDecomposition, g: &Graph) -> Result<(), Violation> {
    let adj = tree_adjacency(td.bags.len(), &td.edges)?;
    check_bags(&td.bags, &adj, g)
}

fn without(bag: &[usize], v: usize) -> Vec<usize> {
    bag.iter().copied().filter(|&w| w != v).collect()
}

/// Checks a nice decomposition: tree invariants plus node-kind rules, and a
/// root bag equal to `{anchor}` (or empty without an anchor).
pub fn validate_nice(nice: &NiceTreeDecomposition, g: &Graph) -> Result<(), Violation> {
    let k = nice.nodes.len();
    if nice.bags.len() != k || nice.root >= k.max(1) {
        return Err(Violation::NotATree("node and bag lists disagree".into()));
    }
    let mut edges = Vec::new();
    for (i, node) in nice.nodes.iter().enumerate() {
        let bag = &nice.bags[i];
        let sorted = |b: &[usize]| {
            let mut b = b.to_vec();
            b.sort_unstable();
            b
        };
        match *node {
            NiceNode::Leaf => {
                if !bag.is_empty() {
                    return Err(Violation::NonEmptyLeaf(i));
                }
            }
            NiceNode::Introduce { vertex, child } => {
                if child >= i {
                    return Err(Violation::ChildAfterParent(i));
                }
                let cb = &nice.bags[child];
                if cb.contains(&vertex)
                    || !bag.contains(&vertex)
                    || sorted(&without(bag, vertex)) != sorted(cb)
                {
                    return Err(Violation::BadIntroduce(i));
                }
                edges.push((child, i));
            }
            NiceNode::Forget { vertex, child } => {
                if child >= i {
                    return Err(Violation::ChildAfterParent(i));
                }
                let cb = &nice.bags[child];
                if !cb.contains(&vertex)
                    || bag.contains(&vertex)
                    || sorted(&without(cb, vertex)) != sorted(bag)
                {
                    return Err(Violation::BadForget(i));
                }
                edges.push((child, i));
            }
            NiceNode::Join { left, right } => {
                if left >= i || right >= i {
                    return Err(Violation::ChildAfterParent(i));
                }
                if sorted(&nice.bags[left]) != sorted(bag)
                    || sorted(&nice.bags[right]) != sorted(bag)
                {
                    return Err(Violation::BadJoin(i));
                }
                edges.push((left, i));
                edges.push((right, i));
            }
        }
    }
    let adj = tree_adjacency(k, &edges)?;
    let expected: Vec<usize> = nice.anchor.into_iter().collect();
    if nice.bags[nice.root] != expected {
        return Err(Violation::RootBag {
            expected,
            found: nice.bags[nice.root].clone(),
        });
    }
    check_bags(&nice.bags, &adj, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::treewidth_exact;

    #[test]
    fn valid_c5() {
        let g = Graph::cycle(5);
        let (_, td) = treewidth_exact(&g).unwrap();
        assert_eq!(validate(&td, &g), Ok(()));
    }

    #[test]
    fn missing_edge() {
        let g = Graph::cycle(4);
        let td = TreeDecomposition {
            bags: vec![vec![0, 1, 2], vec![1, 2, 3]],
            edges: vec![(0, 1)],
        };
        let err = validate(&td, &g).unwrap_err();
        assert_eq!(err, Violation::EdgeUncovered(0, 3));
        assert_eq!(err.to_string(), "edge (0,3) uncovered");
    }

    #[test]
    fn disconnected_occurrence() {
        let g = Graph::path(3);
        let td = TreeDecomposition {
            bags: vec![vec![0, 1], vec![1, 2], vec![0]],
            edges: vec![(0, 1), (1, 2)],
        };
        let err = validate(&td, &g).unwrap_err();
        assert_eq!(err, Violation::VertexNotConnected(0));
        assert_eq!(err.to_string(), "vertex 0 not connected");
    }

    #[test]
    fn uncovered_vertex_and_bad_tree() {
        let g = Graph::empty(2);
        let td = TreeDecomposition {
            bags: vec![vec![0]],
            edges: vec![],
        };
        assert_eq!(validate(&td, &g), Err(Violation::VertexUncovered(1)));
        let td = TreeDecomposition {
            bags: vec![vec![0], vec![1]],
            edges: vec![],
        };
        assert!(matches!(validate(&td, &g), Err(Violation::NotATree(_))));
    }
}
