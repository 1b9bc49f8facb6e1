//! Hom-basis expansions of Sub, Inj and IndSub.
//!
//! All three go through the partition lattice: `Inj(G, ·)` is the Möbius
//! inverse of the zeta transform `Hom(G, ·) = Σ_ρ Inj(G/ρ, ·)`, which gives
//! each loop-free partition ρ the weight `Π_B (-1)^{|B|-1} (|B|-1)!`.
//! Sub divides by the automorphism count; IndSub first runs
//! inclusion–exclusion over the non-edges at the Inj level.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use super::{BasisKind, BasisTerm, Level, LinearCombination, Rational};
use crate::error::{Error, Result};
use crate::graph::{
    anchored_automorphism_count, automorphism_count, canon::certificate, canon::Certificate,
    enumerate_graphs, AnchoredGraph, Graph, Pattern, PARTITION_VERTEX_LIMIT,
};

/// Largest pattern accepted by [`indsub_expansion`].
pub const INDSUB_VERTEX_LIMIT: usize = 10;
/// Largest number of non-edges accepted by [`indsub_expansion`]; the
/// inclusion–exclusion visits `2^non_edges` supergraphs.
pub const INDSUB_NON_EDGE_LIMIT: usize = 21;

fn check_partition_limit(n: usize) -> Result<()> {
    if n > PARTITION_VERTEX_LIMIT {
        return Err(Error::LimitExceeded {
            what: "pattern vertex count",
            value: n,
            limit: PARTITION_VERTEX_LIMIT,
        });
    }
    Ok(())
}

/// A quotient before canonicalization: block count, edge bitmask over block
/// pairs, anchor block.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct LabeledQuotient {
    blocks: u8,
    edges: u128,
    anchor: u8,
}

const NO_ANCHOR: u8 = u8::MAX;

#[inline]
fn pair_bit(a: usize, b: usize) -> u32 {
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    (j * (j - 1) / 2 + i) as u32
}

impl LabeledQuotient {
    fn graph(&self) -> Graph {
        let n = self.blocks as usize;
        let mut edges = Vec::new();
        for j in 1..n {
            for i in 0..j {
                if self.edges >> pair_bit(i, j) & 1 == 1 {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(n, edges).expect("quotient edges are valid")
    }

    fn anchor(&self) -> Option<usize> {
        (self.anchor != NO_ANCHOR).then_some(self.anchor as usize)
    }
}

/// Depth-first walk over all loop-free partitions (no edge inside a block)
/// in restricted-growth order, accumulating Möbius weights per labeled
/// quotient.
struct QuotientWalk<'a> {
    g: &'a Graph,
    anchor: Option<usize>,
    assignment: Vec<usize>,
    block_sizes: Vec<usize>,
    weights: FxHashMap<LabeledQuotient, i128>,
}

impl QuotientWalk<'_> {
    fn visit(&mut self, v: usize) {
        let n = self.g.vertex_count();
        if v == n {
            self.leaf();
            return;
        }
        let open = self.block_sizes.len();
        for b in 0..=open {
            if b < open
                && self
                    .g
                    .neighbors(v)
                    .iter()
                    .any(|&w| w < v && self.assignment[w] == b)
            {
                continue;
            }
            self.assignment[v] = b;
            if b == open {
                self.block_sizes.push(1);
            } else {
                self.block_sizes[b] += 1;
            }
            self.visit(v + 1);
            if b == open {
                self.block_sizes.pop();
            } else {
                self.block_sizes[b] -= 1;
            }
        }
    }

    fn leaf(&mut self) {
        let mut weight: i128 = 1;
        for &size in &self.block_sizes {
            // (-1)^{|B|-1} (|B|-1)!
            for k in 1..size {
                weight *= -(k as i128);
            }
        }
        let mut edges = 0u128;
        for &(u, v) in self.g.edges() {
            edges |= 1u128 << pair_bit(self.assignment[u], self.assignment[v]);
        }
        let key = LabeledQuotient {
            blocks: self.block_sizes.len() as u8,
            edges,
            anchor: self.anchor.map_or(NO_ANCHOR, |a| self.assignment[a] as u8),
        };
        *self.weights.entry(key).or_insert(0) += weight;
    }
}

/// `Σ_ρ weight(ρ) · Hom(G/ρ, ·)` grouped by isomorphism class, divided by
/// `norm`.
fn mobius_expansion(g: &Graph, anchor: Option<usize>, norm: u128) -> Result<LinearCombination> {
    check_partition_limit(g.vertex_count())?;
    let mut walk = QuotientWalk {
        g,
        anchor,
        assignment: vec![0; g.vertex_count()],
        block_sizes: Vec::new(),
        weights: FxHashMap::default(),
    };
    walk.visit(0);

    let mut classes: HashMap<Certificate, (LabeledQuotient, i128)> = HashMap::new();
    for (q, w) in walk.weights {
        let cert = certificate(&q.graph(), q.anchor());
        classes.entry(cert).or_insert((q, 0)).1 += w;
    }
    let norm = BigInt::from(norm);
    let mut terms = Vec::with_capacity(classes.len());
    for (q, w) in classes.into_values() {
        if w == 0 {
            continue;
        }
        let coefficient = Rational::new(BigInt::from(w), norm.clone());
        terms.push(BasisTerm::new(&q.graph(), q.anchor(), coefficient)?);
    }
    let level = if anchor.is_some() {
        Level::Node
    } else {
        Level::Graph
    };
    LinearCombination::new(BasisKind::Hom, level, terms)
}

/// Hom-basis expansion of `Sub(pattern, ·)`: the spasm of `pattern` with
/// coefficients `(1/Aut) Σ_{ρ: pattern/ρ ≅ F} Π_B (-1)^{|B|-1}(|B|-1)!`.
pub fn spasm_of(pattern: &Graph) -> Result<LinearCombination> {
    check_partition_limit(pattern.vertex_count())?;
    mobius_expansion(pattern, None, automorphism_count(pattern))
}

/// Node-level expansion of `Sub(pattern, ·, v)` over anchored quotients;
/// the quotient's anchor is the block containing the pattern's anchor.
pub fn anchored_spasm_of(pattern: &AnchoredGraph) -> Result<LinearCombination> {
    check_partition_limit(pattern.graph().vertex_count())?;
    mobius_expansion(
        pattern.graph(),
        Some(pattern.anchor()),
        anchored_automorphism_count(pattern),
    )
}

/// Hom-basis expansion of `Inj(pattern, ·)` (graph level) or
/// `Inj(pattern, ·)[⊛ ↦ v]` (anchored).
pub fn inj_expansion(pattern: &Pattern) -> Result<LinearCombination> {
    mobius_expansion(pattern.graph(), pattern.anchor(), 1)
}

/// Maps labeled graphs (as edge bitmasks over a fixed vertex count) to
/// isomorphism classes, remembering one representative per class.
struct ClassCache {
    n: usize,
    by_mask: FxHashMap<u128, usize>,
    by_cert: HashMap<Certificate, usize>,
    representatives: Vec<Graph>,
}

impl ClassCache {
    fn new(n: usize) -> Self {
        ClassCache {
            n,
            by_mask: FxHashMap::default(),
            by_cert: HashMap::new(),
            representatives: Vec::new(),
        }
    }

    fn class_of(&mut self, mask: u128) -> usize {
        if let Some(&c) = self.by_mask.get(&mask) {
            return c;
        }
        let mut edges = Vec::new();
        for j in 1..self.n {
            for i in 0..j {
                if mask >> pair_bit(i, j) & 1 == 1 {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::new(self.n, edges).expect("mask edges are valid");
        let cert = certificate(&g, None);
        let next = self.representatives.len();
        let c = *self.by_cert.entry(cert).or_insert(next);
        if c == next {
            self.representatives.push(g);
        }
        self.by_mask.insert(mask, c);
        c
    }
}

fn edge_mask(g: &Graph) -> u128 {
    g.edges()
        .iter()
        .fold(0u128, |m, &(u, v)| m | 1u128 << pair_bit(u, v))
}

/// Adds `(1/Aut(F)) Σ_{S ⊆ non-edges} (-1)^{|S|} Inj(F+S)` into `weights`
/// (indexed by class in `cache`).
fn accumulate_induced(
    pattern: &Graph,
    cache: &mut ClassCache,
    weights: &mut Vec<Rational>,
) -> Result<()> {
    let non_edges = pattern.non_edges();
    if non_edges.len() > INDSUB_NON_EDGE_LIMIT {
        return Err(Error::LimitExceeded {
            what: "induced-subgraph expansion non-edge count",
            value: non_edges.len(),
            limit: INDSUB_NON_EDGE_LIMIT,
        });
    }
    let bits: Vec<u128> = non_edges
        .iter()
        .map(|&(u, v)| 1u128 << pair_bit(u, v))
        .collect();
    let base = edge_mask(pattern);
    let mut signed: FxHashMap<usize, i64> = FxHashMap::default();
    for subset in 0u64..(1u64 << bits.len()) {
        let mut mask = base;
        for (i, b) in bits.iter().enumerate() {
            if subset >> i & 1 == 1 {
                mask |= b;
            }
        }
        let sign = if subset.count_ones() % 2 == 0 { 1 } else { -1 };
        *signed.entry(cache.class_of(mask)).or_insert(0) += sign;
    }
    let aut = BigInt::from(automorphism_count(pattern));
    if weights.len() < cache.representatives.len() {
        weights.resize(cache.representatives.len(), Rational::zero());
    }
    for (class, count) in signed {
        if count != 0 {
            weights[class] += Rational::new(BigInt::from(count), aut.clone());
        }
    }
    Ok(())
}

fn inj_weights_to_hom(cache: &ClassCache, weights: &[Rational]) -> Result<LinearCombination> {
    let mut total = LinearCombination::empty(BasisKind::Hom, Level::Graph);
    for (class, w) in weights.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let inj = inj_expansion(&Pattern::Plain(cache.representatives[class].clone()))?;
        total = total.sum(&inj.scaled(w))?;
    }
    Ok(total)
}

/// Hom-basis expansion of `IndSub(pattern, ·)`.
pub fn indsub_expansion(pattern: &Graph) -> Result<LinearCombination> {
    if pattern.vertex_count() > INDSUB_VERTEX_LIMIT {
        return Err(Error::LimitExceeded {
            what: "induced-subgraph pattern vertex count",
            value: pattern.vertex_count(),
            limit: INDSUB_VERTEX_LIMIT,
        });
    }
    let mut cache = ClassCache::new(pattern.vertex_count());
    let mut weights = Vec::new();
    accumulate_induced(pattern, &mut cache, &mut weights)?;
    inj_weights_to_hom(&cache, &weights)
}

/// Largest `k` accepted by [`indsub_property_param`].
pub const PROPERTY_PARAM_LIMIT: usize = 7;

/// Hom-basis expansion of the number of `k`-vertex induced subgraphs whose
/// isomorphism class satisfies `property`. `property` is evaluated once per
/// class on a canonical representative and must be isomorphism invariant.
pub fn indsub_property_param(
    k: usize,
    property: &dyn Fn(&Graph) -> bool,
) -> Result<LinearCombination> {
    if k > PROPERTY_PARAM_LIMIT {
        return Err(Error::LimitExceeded {
            what: "induced-subgraph property size",
            value: k,
            limit: PROPERTY_PARAM_LIMIT,
        });
    }
    let mut cache = ClassCache::new(k);
    let mut weights = Vec::new();
    for f in enumerate_graphs(k)? {
        if property(&f) {
            accumulate_induced(&f, &mut cache, &mut weights)?;
        }
    }
    inj_weights_to_hom(&cache, &weights)
}

impl LinearCombination {
    /// True when every coefficient equals one (a pure Hom feature list).
    pub fn is_unit_hom(&self) -> bool {
        self.kind == BasisKind::Hom && self.terms.iter().all(|t| t.coefficient.is_one())
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::graph::{
        canonical_form, canonical_form_anchored, named_pattern, parse_pattern, CanonicalKey,
    };

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn key(name: &str) -> crate::graph::CanonicalKey {
        match parse_pattern(name).unwrap() {
            Pattern::Plain(g) => canonical_form(&g).key,
            Pattern::Anchored(a) => canonical_form_anchored(&a).key,
        }
    }

    fn paw() -> Graph {
        Graph::new(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn c5_coefficients() {
        let c = spasm_of(&Graph::cycle(5)).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.coefficient_of(&key("C5")), Some(&r(1, 10)));
        assert_eq!(
            c.coefficient_of(&canonical_form(&paw()).key),
            Some(&r(-1, 2))
        );
        assert_eq!(c.coefficient_of(&key("K3")), Some(&r(1, 2)));
        // term order: K3 (3 vertices), paw (4), C5 (5)
        let sizes: Vec<usize> = c.terms().iter().map(|t| t.graph().vertex_count()).collect();
        assert_eq!(sizes, vec![3, 4, 5]);
    }

    #[test]
    fn cycle_and_path_basis_sizes() {
        assert_eq!(spasm_of(&Graph::cycle(7)).unwrap().len(), 12);
        assert_eq!(spasm_of(&Graph::cycle(8)).unwrap().len(), 35);
        assert_eq!(spasm_of(&Graph::path(4)).unwrap().len(), 4);
        assert_eq!(spasm_of(&Graph::path(5)).unwrap().len(), 8);
        assert_eq!(spasm_of(&Graph::path(6)).unwrap().len(), 15);
    }

    #[test]
    fn cliques_are_their_own_spasm() {
        for n in 3..=5 {
            let c = spasm_of(&Graph::complete(n)).unwrap();
            assert_eq!(c.len(), 1);
        }
        let k4 = spasm_of(&Graph::complete(4)).unwrap();
        assert_eq!(k4.terms()[0].coefficient(), &r(1, 24));
    }

    #[test]
    fn anchored_examples() {
        let c4 = named_pattern("C4@0").unwrap().into_anchored().unwrap();
        let s = anchored_spasm_of(&c4).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.coefficient_of(&key("P3@0")).is_some());
        assert!(s.coefficient_of(&key("P3@1")).is_some());

        let k3 = named_pattern("K3@0").unwrap().into_anchored().unwrap();
        let s = anchored_spasm_of(&k3).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.terms()[0].coefficient(), &r(1, 2));
    }

    #[test]
    fn inj_examples() {
        let k2 = inj_expansion(&named_pattern("K2").unwrap()).unwrap();
        assert_eq!(k2.len(), 1);
        assert_eq!(k2.terms()[0].coefficient(), &r(1, 1));

        let p3 = inj_expansion(&named_pattern("P3").unwrap()).unwrap();
        assert_eq!(p3.coefficient_of(&key("P3")), Some(&r(1, 1)));
        assert_eq!(p3.coefficient_of(&key("K2")), Some(&r(-1, 1)));
        assert_eq!(p3.len(), 2);

        let c5 = inj_expansion(&named_pattern("C5").unwrap()).unwrap();
        let sub = spasm_of(&Graph::cycle(5)).unwrap();
        assert_eq!(c5, sub.scaled(&r(10, 1)));
    }

    #[test]
    fn indsub_of_clique_has_no_non_edges() {
        let k4 = Graph::complete(4);
        let ind = indsub_expansion(&k4).unwrap();
        let inj = inj_expansion(&Pattern::Plain(k4)).unwrap();
        assert_eq!(ind, inj.scaled(&r(1, 24)));
    }

    #[test]
    fn limits() {
        assert!(spasm_of(&Graph::cycle(13)).is_err());
        assert!(indsub_expansion(&Graph::empty(11)).is_err());
        assert!(indsub_expansion(&Graph::empty(8)).is_err()); // 28 non-edges
        assert!(indsub_property_param(8, &|_| true).is_err());
    }

    #[test]
    fn spasm_contains_pattern_with_inverse_automorphisms() {
        for name in ["C6", "P5", "S3", "K4", "C4"] {
            let p = named_pattern(name).unwrap();
            let c = spasm_of(p.graph()).unwrap();
            let aut = automorphism_count(p.graph()) as i64;
            assert_eq!(c.coefficient_of(&key(name)), Some(&r(1, aut)), "{name}");
        }
        for name in ["C6@0", "P5@1", "S3@0", "S3@2"] {
            let a = named_pattern(name).unwrap().into_anchored().unwrap();
            let c = anchored_spasm_of(&a).unwrap();
            let aut = anchored_automorphism_count(&a) as i64;
            assert_eq!(c.coefficient_of(&key(name)), Some(&r(1, aut)), "{name}");
        }
    }

    /// Reference: every partition, looped quotients dropped afterwards.
    fn full_enumeration(g: &Graph, anchor: Option<usize>) -> BTreeMap<CanonicalKey, Rational> {
        let mut acc: BTreeMap<CanonicalKey, Rational> = BTreeMap::new();
        for p in crate::graph::enumerate_partitions(g.vertex_count()).unwrap() {
            let weight: i64 = p
                .blocks()
                .iter()
                .map(|b| {
                    let k = b.len() as i64;
                    let fact: i64 = (1..k).product();
                    if k % 2 == 0 {
                        -fact
                    } else {
                        fact
                    }
                })
                .product();
            let key = match anchor {
                None => {
                    let (q, looped) = crate::graph::quotient(g, &p).unwrap();
                    if looped {
                        continue;
                    }
                    canonical_form(&q).key
                }
                Some(a) => {
                    let ag = AnchoredGraph::new(g.clone(), a).unwrap();
                    let (q, looped) = crate::graph::quotient_anchored(&ag, &p).unwrap();
                    if looped {
                        continue;
                    }
                    canonical_form_anchored(&q).key
                }
            };
            *acc.entry(key).or_insert_with(|| r(0, 1)) += r(weight, 1);
        }
        let aut = match anchor {
            None => automorphism_count(g),
            Some(a) => anchored_automorphism_count(&AnchoredGraph::new(g.clone(), a).unwrap()),
        } as i64;
        acc.into_iter()
            .filter(|(_, c)| *c != r(0, 1))
            .map(|(k, c)| (k, c / r(aut, 1)))
            .collect()
    }

    #[test]
    fn pruned_enumeration_matches_full_enumeration() {
        for n in 1..=5 {
            for g in crate::graph::enumerate_graphs(n).unwrap() {
                let as_map = |c: &LinearCombination| -> BTreeMap<CanonicalKey, Rational> {
                    c.terms()
                        .iter()
                        .map(|t| (t.key().clone(), t.coefficient().clone()))
                        .collect()
                };
                assert_eq!(
                    as_map(&spasm_of(&g).unwrap()),
                    full_enumeration(&g, None),
                    "{g}"
                );
                for a in 0..n {
                    let ag = AnchoredGraph::new(g.clone(), a).unwrap();
                    assert_eq!(
                        as_map(&anchored_spasm_of(&ag).unwrap()),
                        full_enumeration(&g, Some(a)),
                        "{g}@{a}"
                    );
                }
            }
        }
    }
}
