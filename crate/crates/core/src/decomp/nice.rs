use serde::Serialize;

use super::TreeDecomposition;
use crate::error::{Error, Result};

/// One node of a nice tree decomposition. Child indices always precede
/// their parent in [`NiceTreeDecomposition::nodes`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NiceNode {
    Leaf,
    Introduce { vertex: usize, child: usize },
    Forget { vertex: usize, child: usize },
    Join { left: usize, right: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    /// Sorted bag per node.
    pub bags: Vec<Vec<usize>>,
    pub root: usize,
    pub anchor: Option<usize>,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> i64 {
        self.bags.iter().map(|b| b.len() as i64).max().unwrap_or(0) - 1
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "bags": self.bags,
            "nodes": self.nodes,
            "root": self.root,
            "width": self.width(),
            "kind": "nice",
        })
    }

    fn push(&mut self, node: NiceNode, bag: Vec<usize>) -> usize {
        self.nodes.push(node);
        self.bags.push(bag);
        self.nodes.len() - 1
    }

    /// Moves from `child` (with its bag) to `target` by forgetting then
    /// introducing one vertex at a time.
    fn morph(&mut self, mut child: usize, target: &[usize]) -> usize {
        let forget: Vec<usize> = self.bags[child]
            .iter()
            .copied()
            .filter(|v| target.binary_search(v).is_err())
            .collect();
        for v in forget {
            let bag: Vec<usize> = self.bags[child]
                .iter()
                .copied()
                .filter(|&w| w != v)
                .collect();
            child = self.push(NiceNode::Forget { vertex: v, child }, bag);
        }
        let introduce: Vec<usize> = target
            .iter()
            .copied()
            .filter(|v| self.bags[child].binary_search(v).is_err())
            .collect();
        for v in introduce {
            let mut bag = self.bags[child].clone();
            let at = bag.binary_search(&v).unwrap_err();
            bag.insert(at, v);
            child = self.push(NiceNode::Introduce { vertex: v, child }, bag);
        }
        child
    }
}

fn check_tree(td: &TreeDecomposition) -> Result<Vec<Vec<usize>>> {
    let k = td.bags.len();
    if k == 0 {
        return Err(Error::InvalidDecomposition("no bags".into()));
    }
    if td.edges.len() != k - 1 {
        return Err(Error::InvalidDecomposition(format!(
            "{} tree edges for {k} bags",
            td.edges.len()
        )));
    }
    let mut adj = vec![Vec::new(); k];
    for &(a, b) in &td.edges {
        if a >= k || b >= k || a == b {
            return Err(Error::InvalidDecomposition(format!(
                "bad tree edge ({a},{b})"
            )));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; k];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvalidDecomposition(
            "tree edges do not connect all bags".into(),
        ));
    }
    Ok(adj)
}

/// Converts a tree decomposition into nice form.
///
/// Without an anchor the root bag is empty. With an anchor the tree is
/// rooted at a bag containing it and the root bag is exactly `{anchor}`, so
/// the width never grows.
pub fn to_nice(td: &TreeDecomposition, anchor: Option<usize>) -> Result<NiceTreeDecomposition> {
    let adj = check_tree(td)?;
    let bags: Vec<Vec<usize>> = td
        .bags
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b.dedup();
            b
        })
        .collect();
    let root_bag = match anchor {
        None => 0,
        Some(a) => bags
            .iter()
            .position(|b| b.binary_search(&a).is_ok())
            .ok_or_else(|| Error::InvalidDecomposition(format!("anchor {a} is in no bag")))?,
    };

    // Post-order over the rooted tree.
    let mut order = Vec::with_capacity(bags.len());
    let mut parent = vec![usize::MAX; bags.len()];
    let mut stack = vec![(root_bag, false)];
    parent[root_bag] = root_bag;
    while let Some((u, expanded)) = stack.pop() {
        if expanded {
            order.push(u);
            continue;
        }
        stack.push((u, true));
        for &w in adj[u].iter().rev() {
            if parent[w] == usize::MAX {
                parent[w] = u;
                stack.push((w, false));
            }
        }
    }

    let mut nice = NiceTreeDecomposition {
        nodes: Vec::new(),
        bags: Vec::new(),
        root: 0,
        anchor,
    };
    let mut built = vec![usize::MAX; bags.len()];
    for &u in &order {
        let children: Vec<usize> = adj[u]
            .iter()
            .copied()
            .filter(|&w| w != u && parent[w] == u)
            .collect();
        let mut current: Option<usize> = None;
        for c in children {
            let branch = nice.morph(built[c], &bags[u]);
            current = Some(match current {
                None => branch,
                Some(left) => nice.push(
                    NiceNode::Join {
                        left,
                        right: branch,
                    },
                    bags[u].clone(),
                ),
            });
        }
        let node = match current {
            Some(n) => n,
            None => {
                let leaf = nice.push(NiceNode::Leaf, Vec::new());
                nice.morph(leaf, &bags[u])
            }
        };
        built[u] = node;
    }
    let target: Vec<usize> = anchor.into_iter().collect();
    nice.root = nice.morph(built[root_bag], &target);
    Ok(nice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{treewidth_exact, validate_nice};
    use crate::graph::Graph;

    #[test]
    fn path_decomposition_of_p4() {
        let g = Graph::path(4);
        let td = TreeDecomposition {
            bags: vec![vec![0, 1], vec![1, 2], vec![2, 3]],
            edges: vec![(0, 1), (1, 2)],
        };
        let nice = to_nice(&td, None).unwrap();
        assert_eq!(validate_nice(&nice, &g), Ok(()));
        assert_eq!(nice.width(), 1);
        assert!(nice.bags[nice.root].is_empty());
    }

    #[test]
    fn anchored_c5() {
        let g = Graph::cycle(5);
        let (w, td) = treewidth_exact(&g).unwrap();
        for a in 0..5 {
            let nice = to_nice(&td, Some(a)).unwrap();
            assert_eq!(nice.bags[nice.root], vec![a]);
            assert!(nice.width() <= w + 1);
            assert_eq!(validate_nice(&nice, &g), Ok(()));
        }
    }

    #[test]
    fn single_bag_triangle_is_a_chain() {
        let td = TreeDecomposition {
            bags: vec![vec![0, 1, 2]],
            edges: vec![],
        };
        let nice = to_nice(&td, None).unwrap();
        let kinds: Vec<&str> = nice
            .nodes
            .iter()
            .map(|n| match n {
                NiceNode::Leaf => "leaf",
                NiceNode::Introduce { .. } => "introduce",
                NiceNode::Forget { .. } => "forget",
                NiceNode::Join { .. } => "join",
            })
            .collect();
        assert_eq!(
            kinds,
            [
                "leaf",
                "introduce",
                "introduce",
                "introduce",
                "forget",
                "forget",
                "forget"
            ]
        );
        assert_eq!(validate_nice(&nice, &Graph::complete(3)), Ok(()));
    }

    #[test]
    fn rejects_non_tree() {
        let td = TreeDecomposition {
            bags: vec![vec![0], vec![1]],
            edges: vec![],
        };
        assert!(to_nice(&td, None).is_err());
    }
}
