//! Compiled counting plans and the tree-decomposition dynamic program.
//!
//! A table maps partial assignments of the current bag to host vertices
//! onto the number of homomorphisms of the already-processed part of the
//! pattern extending them. Bag vertices live in fixed slots of a packed
//! `u128` key; a vertex keeps its slot for its whole lifetime in the tree.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use super::HostGraph;
use crate::decomp::{to_nice, treewidth_exact, NiceNode, NiceTreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{component_vertex_sets, Graph};

/// Hosts above this size refuse plans whose bags exceed
/// [`WIDE_BAG_LIMIT`] vertices unless explicitly allowed.
pub const WIDTH_GUARD_HOST_VERTICES: usize = 100_000;
pub const WIDE_BAG_LIMIT: usize = 5;

#[derive(Clone, Copy, Debug, Default)]
pub struct CountOptions {
    /// Lift the width guard.
    pub allow_wide: bool,
}

/// Arithmetic used by the dynamic program. `None` signals overflow.
trait Counter: Clone + Send + Sync {
    fn zero() -> Self;
    fn from_usize(n: usize) -> Self;
    fn add(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn into_big(self) -> BigUint;
}

impl Counter for u128 {
    #[inline]
    fn zero() -> Self {
        0
    }
    fn from_usize(n: usize) -> Self {
        n as u128
    }
    #[inline]
    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    #[inline]
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Counter for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_usize(n: usize) -> Self {
        BigUint::from(n)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn into_big(self) -> BigUint {
        self
    }
}

#[derive(Clone, Debug)]
enum Step {
    Leaf,
    Introduce {
        child: usize,
        slot: u32,
        /// Slots of the introduced vertex's pattern neighbors already in the bag.
        checks: Vec<u32>,
    },
    Forget {
        child: usize,
        slot: u32,
    },
    Join {
        left: usize,
        right: usize,
    },
}

/// Plan for one connected component with at least two vertices.
#[derive(Clone, Debug)]
struct DpPlan {
    steps: Vec<Step>,
    root: usize,
    slots: u32,
    anchored: bool,
}

#[derive(Clone, Debug)]
enum ComponentPlan {
    SingleVertex,
    Dp(DpPlan),
}

/// A pattern compiled for repeated counting: one plan per connected
/// component, the anchored component (if any) first.
#[derive(Clone, Debug)]
pub struct HomPlan {
    components: Vec<ComponentPlan>,
    anchored: bool,
    max_bag: usize,
    vertex_count: usize,
}

impl DpPlan {
    fn compile(nice: &NiceTreeDecomposition, g: &Graph) -> Self {
        let k = nice.nodes.len();
        // slot maps, filled top-down (parents have larger indices)
        let mut slot_maps: Vec<Vec<(usize, u32)>> = vec![Vec::new(); k];
        let mut slots = 0u32;
        let root_map: Vec<(usize, u32)> = nice.bags[nice.root]
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        slots = slots.max(root_map.len() as u32);
        slot_maps[nice.root] = root_map;
        let mut steps = vec![Step::Leaf; k];
        for i in (0..k).rev() {
            let map = std::mem::take(&mut slot_maps[i]);
            let slot_of = |v: usize| {
                map.iter()
                    .find(|&&(w, _)| w == v)
                    .map(|&(_, s)| s)
                    .expect("vertex has a slot")
            };
            match nice.nodes[i] {
                NiceNode::Leaf => {}
                NiceNode::Introduce { vertex, child } => {
                    let checks = g
                        .neighbors(vertex)
                        .iter()
                        .filter(|&&w| nice.bags[child].binary_search(&w).is_ok())
                        .map(|&w| slot_of(w))
                        .collect();
                    steps[i] = Step::Introduce {
                        child,
                        slot: slot_of(vertex),
                        checks,
                    };
                    slot_maps[child] = map.iter().copied().filter(|&(w, _)| w != vertex).collect();
                }
                NiceNode::Forget { vertex, child } => {
                    let free = (0..).find(|s| map.iter().all(|&(_, t)| t != *s)).unwrap();
                    slots = slots.max(free + 1);
                    let mut child_map = map.clone();
                    child_map.push((vertex, free));
                    steps[i] = Step::Forget { child, slot: free };
                    slot_maps[child] = child_map;
                }
                NiceNode::Join { left, right } => {
                    steps[i] = Step::Join { left, right };
                    slot_maps[left] = map.clone();
                    slot_maps[right] = map.clone();
                }
            }
            slot_maps[i] = map;
        }
        DpPlan {
            steps,
            root: nice.root,
            slots,
            anchored: nice.anchor.is_some(),
        }
    }

    /// Root table; `None` on arithmetic overflow.
    fn run<C: Counter>(&self, host: &HostGraph, bits: u32) -> Option<Vec<(u128, C)>> {
        let n = host.vertex_count();
        let mask = (1u128 << bits) - 1;
        let mut tables: Vec<Option<Vec<(u128, C)>>> = vec![None; self.steps.len()];
        for (i, step) in self.steps.iter().enumerate() {
            let table = match step {
                Step::Leaf => vec![(0u128, C::from_usize(1))],
                Step::Introduce {
                    child,
                    slot,
                    checks,
                } => {
                    let input = tables[*child].take().expect("child computed");
                    let shift = slot * bits;
                    let mut out = Vec::with_capacity(input.len());
                    for (key, value) in input {
                        match checks.split_first() {
                            None => {
                                for y in 0..n {
                                    out.push((key | (y as u128) << shift, value.clone()));
                                }
                            }
                            Some((&first, rest)) => {
                                let anchor = ((key >> (first * bits)) & mask) as usize;
                                'candidates: for &y in host.neighbors(anchor) {
                                    for &c in rest {
                                        let other = ((key >> (c * bits)) & mask) as usize;
                                        if !host.has_edge(y as usize, other) {
                                            continue 'candidates;
                                        }
                                    }
                                    out.push((key | (y as u128) << shift, value.clone()));
                                }
                            }
                        }
                    }
                    out
                }
                Step::Forget { child, slot } => {
                    let input = tables[*child].take().expect("child computed");
                    let clear = !(mask << (slot * bits));
                    let mut merged: FxHashMap<u128, C> = FxHashMap::default();
                    merged.reserve(input.len() / 2);
                    for (key, value) in input {
                        let k = key & clear;
                        match merged.get_mut(&k) {
                            Some(acc) => *acc = acc.add(&value)?,
                            None => {
                                merged.insert(k, value);
                            }
                        }
                    }
                    merged.into_iter().collect()
                }
                Step::Join { left, right } => {
                    let a = tables[*left].take().expect("child computed");
                    let b = tables[*right].take().expect("child computed");
                    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
                    let lookup: FxHashMap<u128, C> = small.into_iter().collect();
                    let mut out = Vec::with_capacity(lookup.len().min(large.len()));
                    for (key, value) in large {
                        if let Some(other) = lookup.get(&key) {
                            out.push((key, value.mul(other)?));
                        }
                    }
                    out
                }
            };
            tables[i] = Some(table);
        }
        tables[self.root].take()
    }
}

fn key_bits(n: usize) -> u32 {
    (usize::BITS - n.saturating_sub(1).leading_zeros()).max(1)
}

impl HomPlan {
    /// Compiles `pattern` (anchored at `anchor` if given) using exact
    /// treewidth decompositions of each component.
    pub fn new(pattern: &Graph, anchor: Option<usize>) -> Result<Self> {
        Self::with_decomposer(pattern, anchor, &|g| Ok(treewidth_exact(g)?.1))
    }

    /// Compiles with a caller-supplied decomposition of each component.
    pub fn with_decomposer(
        pattern: &Graph,
        anchor: Option<usize>,
        decompose: &dyn Fn(&Graph) -> Result<crate::decomp::TreeDecomposition>,
    ) -> Result<Self> {
        if let Some(a) = anchor {
            if a >= pattern.vertex_count() {
                return Err(Error::AnchorOutOfRange {
                    anchor: a,
                    n: pattern.vertex_count(),
                });
            }
        }
        let mut sets = component_vertex_sets(pattern);
        if let Some(a) = anchor {
            let i = sets
                .iter()
                .position(|s| s.contains(&a))
                .expect("anchor in a component");
            let s = sets.remove(i);
            sets.insert(0, s);
        }
        let mut components = Vec::with_capacity(sets.len());
        let mut max_bag = 1;
        for (i, vs) in sets.iter().enumerate() {
            if vs.len() == 1 {
                components.push(ComponentPlan::SingleVertex);
                continue;
            }
            let g = pattern.induced_subgraph(vs);
            let local_anchor = match anchor {
                Some(a) if i == 0 => Some(vs.iter().position(|&v| v == a).unwrap()),
                _ => None,
            };
            let td = decompose(&g)?;
            let nice = to_nice(&td, local_anchor)?;
            max_bag = max_bag.max((nice.width() + 1) as usize);
            components.push(ComponentPlan::Dp(DpPlan::compile(&nice, &g)));
        }
        Ok(HomPlan {
            components,
            anchored: anchor.is_some(),
            max_bag,
            vertex_count: pattern.vertex_count(),
        })
    }

    /// Largest bag of any component plan (width + 1).
    pub fn max_bag(&self) -> usize {
        self.max_bag
    }

    pub fn is_anchored(&self) -> bool {
        self.anchored
    }

    fn check_host(&self, host: &HostGraph, options: CountOptions) -> Result<u32> {
        let n = host.vertex_count();
        if !options.allow_wide && self.max_bag > WIDE_BAG_LIMIT && n > WIDTH_GUARD_HOST_VERTICES {
            return Err(Error::WidthGuard {
                width: self.max_bag - 1,
                host_vertices: n,
            });
        }
        let bits = key_bits(n);
        for c in &self.components {
            if let ComponentPlan::Dp(p) = c {
                if (p.slots * bits) as usize > 128 {
                    return Err(Error::LimitExceeded {
                        what: "packed bag key bits",
                        value: (p.slots * bits) as usize,
                        limit: 128,
                    });
                }
            }
        }
        Ok(bits)
    }

    fn graph_level<C: Counter>(&self, host: &HostGraph, bits: u32) -> Option<C> {
        let n = host.vertex_count();
        let mut total = C::from_usize(1);
        for c in &self.components {
            let factor = match c {
                ComponentPlan::SingleVertex => C::from_usize(n),
                ComponentPlan::Dp(p) => {
                    let root = p.run::<C>(host, bits)?;
                    match root.into_iter().next() {
                        Some((_, v)) => v,
                        None => C::zero(),
                    }
                }
            };
            total = total.mul(&factor)?;
        }
        Some(total)
    }

    fn node_level<C: Counter>(&self, host: &HostGraph, bits: u32) -> Option<Vec<C>> {
        let n = host.vertex_count();
        let mask = (1u128 << bits) - 1;
        let mut per_vertex = vec![C::zero(); n];
        match &self.components[0] {
            ComponentPlan::SingleVertex => per_vertex = vec![C::from_usize(1); n],
            ComponentPlan::Dp(p) => {
                debug_assert!(p.anchored);
                for (key, v) in p.run::<C>(host, bits)? {
                    per_vertex[(key & mask) as usize] = v;
                }
            }
        }
        let mut rest = C::from_usize(1);
        for c in &self.components[1..] {
            let factor = match c {
                ComponentPlan::SingleVertex => C::from_usize(n),
                ComponentPlan::Dp(p) => p
                    .run::<C>(host, bits)?
                    .into_iter()
                    .next()
                    .map_or_else(C::zero, |(_, v)| v),
            };
            rest = rest.mul(&factor)?;
        }
        per_vertex.into_iter().map(|v| v.mul(&rest)).collect()
    }

    /// Number of homomorphisms into `host`. Anchored plans return the sum
    /// over anchor images.
    pub fn count(&self, host: &HostGraph, options: CountOptions) -> Result<BigUint> {
        if self.vertex_count == 0 {
            return Ok(BigUint::one());
        }
        if self.anchored {
            return Ok(self.count_node(host, options)?.into_iter().sum());
        }
        let bits = self.check_host(host, options)?;
        Ok(match self.graph_level::<u128>(host, bits) {
            Some(v) => v.into_big(),
            None => self
                .graph_level::<BigUint>(host, bits)
                .expect("big integers do not overflow"),
        })
    }

    /// Per host vertex `v`, the number of homomorphisms sending the anchor
    /// to `v`.
    pub fn count_node(&self, host: &HostGraph, options: CountOptions) -> Result<Vec<BigUint>> {
        if !self.anchored {
            return Err(Error::BasisMismatch {
                expected: "an anchored pattern".into(),
                found: "a plain one".into(),
            });
        }
        let bits = self.check_host(host, options)?;
        Ok(match self.node_level::<u128>(host, bits) {
            Some(v) => v.into_iter().map(Counter::into_big).collect(),
            None => self
                .node_level::<BigUint>(host, bits)
                .expect("big integers do not overflow"),
        })
    }
}
