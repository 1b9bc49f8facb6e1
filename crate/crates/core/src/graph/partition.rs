use crate::error::{Error, Result};

use super::{AnchoredGraph, Graph};

/// Default cap on vertex count for full partition enumeration. Bell(12) is
/// about 4.2 million.
pub const PARTITION_VERTEX_LIMIT: usize = 12;

/// A set partition of `0..n` in restricted-growth form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    assignment: Vec<usize>,
    blocks: usize,
}

impl Partition {
    /// Builds a partition from arbitrary block labels, renumbering them into
    /// restricted-growth form.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let assignment: Vec<usize> = labels
            .iter()
            .map(|&l| {
                let next = map.len();
                *map.entry(l).or_insert(next)
            })
            .collect();
        Partition {
            blocks: map.len(),
            assignment,
        }
    }

    /// Every vertex in its own block.
    pub fn singletons(n: usize) -> Self {
        Partition {
            assignment: (0..n).collect(),
            blocks: n,
        }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (v, &b) in self.assignment.iter().enumerate() {
            out[b].push(v);
        }
        out
    }
}

/// Iterator over all partitions of `0..n` in lexicographic order of their
/// restricted-growth strings.
pub struct PartitionIter {
    current: Vec<usize>,
    // max of current[..i] + 1, per position
    prefix_max: Vec<usize>,
    started: bool,
    done: bool,
}

impl PartitionIter {
    fn new(n: usize) -> Self {
        PartitionIter {
            current: vec![0; n],
            prefix_max: vec![1; n],
            started: false,
            done: false,
        }
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let n = self.current.len();
        if !self.started {
            self.started = true;
            if n == 0 {
                self.done = true;
            }
            return Some(Partition {
                assignment: self.current.clone(),
                blocks: usize::from(n > 0),
            });
        }
        // Find the rightmost position that can be incremented.
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.current[i] < self.prefix_max[i] {
                break;
            }
        }
        self.current[i] += 1;
        for j in i + 1..n {
            self.current[j] = 0;
            self.prefix_max[j] = self.prefix_max[j - 1].max(self.current[j - 1] + 1);
        }
        let blocks = self.prefix_max[n - 1].max(self.current[n - 1] + 1);
        Some(Partition {
            assignment: self.current.clone(),
            blocks,
        })
    }
}

/// All Bell(n) partitions of `0..n`, refusing `n > 12`.
pub fn enumerate_partitions(n: usize) -> Result<PartitionIter> {
    enumerate_partitions_with_limit(n, PARTITION_VERTEX_LIMIT)
}

pub fn enumerate_partitions_with_limit(n: usize, limit: usize) -> Result<PartitionIter> {
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "partition enumeration vertex count",
            value: n,
            limit,
        });
    }
    Ok(PartitionIter::new(n))
}

/// Contracts each block of `p` to one vertex. The flag is true when some
/// edge lies inside a block, i.e. the quotient would carry a loop.
pub fn quotient(g: &Graph, p: &Partition) -> Result<(Graph, bool)> {
    if p.len() != g.vertex_count() {
        return Err(Error::PartitionMismatch {
            partition: p.len(),
            graph: g.vertex_count(),
        });
    }
    let mut has_loop = false;
    let mut edges = Vec::with_capacity(g.edge_count());
    for &(u, v) in g.edges() {
        let (a, b) = (p.block_of(u), p.block_of(v));
        if a == b {
            has_loop = true;
        } else {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Ok((Graph::from_sorted_edges(p.block_count(), edges), has_loop))
}

/// Quotient of an anchored graph; the anchor becomes the block containing it.
pub fn quotient_anchored(g: &AnchoredGraph, p: &Partition) -> Result<(AnchoredGraph, bool)> {
    let (q, has_loop) = quotient(g.graph(), p)?;
    let anchor = p.block_of(g.anchor());
    Ok((AnchoredGraph::new(q, anchor)?, has_loop))
}
