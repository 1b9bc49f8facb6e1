//! Linear combinations of homomorphism counts and the expansions that
//! produce them.
//!
//! Every parameter is stored as a [`LinearCombination`]: exact rational
//! coefficients over canonical basis graphs, kept in a fixed order
//! (vertex count, edge count, canonical key). That order becomes the column
//! order of every feature file downstream.

mod expand;
mod filter;
pub mod predicates;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    canonical_form, canonical_form_anchored, parse_graph6, AnchoredGraph, CanonicalKey, Graph,
    Pattern,
};

pub use expand::{
    anchored_spasm_of, indsub_expansion, indsub_property_param, inj_expansion, spasm_of,
    INDSUB_NON_EDGE_LIMIT, INDSUB_VERTEX_LIMIT,
};
pub use filter::{connected_component_support, filter_min_treewidth};

/// Exact rational coefficient.
pub type Rational = BigRational;

/// Which counting function the combination's basis graphs stand for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Hom,
    Inj,
    Sub,
    IndSub,
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisKind::Hom => "hom",
            BasisKind::Inj => "inj",
            BasisKind::Sub => "sub",
            BasisKind::IndSub => "indsub",
        })
    }
}

/// Graph-level combinations use plain graphs; node-level ones use anchored
/// graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Graph,
    Node,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Graph => "graph",
            Level::Node => "node",
        })
    }
}

/// One basis graph with its (nonzero) coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisTerm {
    key: CanonicalKey,
    graph: Graph,
    coefficient: Rational,
}

impl BasisTerm {
    /// Canonicalizes `graph` (anchored when `anchor` is set).
    pub fn new(graph: &Graph, anchor: Option<usize>, coefficient: Rational) -> Result<Self> {
        let cf = match anchor {
            None => canonical_form(graph),
            Some(a) => canonical_form_anchored(&AnchoredGraph::new(graph.clone(), a)?),
        };
        Ok(BasisTerm {
            key: cf.key,
            graph: cf.graph,
            coefficient,
        })
    }

    pub fn key(&self) -> &CanonicalKey {
        &self.key
    }

    /// The basis graph under its canonical labeling.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn anchor(&self) -> Option<usize> {
        self.key.anchor
    }

    pub fn anchored(&self) -> Option<AnchoredGraph> {
        self.key
            .anchor
            .map(|a| AnchoredGraph::new(self.graph.clone(), a).expect("canonical anchor in range"))
    }

    pub fn coefficient(&self) -> &Rational {
        &self.coefficient
    }

    fn sort_key(&self) -> (usize, usize, &CanonicalKey) {
        (
            self.graph.vertex_count(),
            self.graph.edge_count(),
            &self.key,
        )
    }
}

/// A finite rational combination of counts over canonical basis graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCombination {
    kind: BasisKind,
    level: Level,
    terms: Vec<BasisTerm>,
}

impl LinearCombination {
    /// Builds a combination; terms are simplified (merged, zero-dropped,
    /// sorted). Fails if an anchored term appears at graph level or vice
    /// versa.
    pub fn new(kind: BasisKind, level: Level, terms: Vec<BasisTerm>) -> Result<Self> {
        for t in &terms {
            if t.anchor().is_some() != (level == Level::Node) {
                return Err(Error::BasisMismatch {
                    expected: format!("a {level}-level term"),
                    found: t.key.to_string(),
                });
            }
        }
        Ok(simplify(&LinearCombination { kind, level, terms }))
    }

    pub fn empty(kind: BasisKind, level: Level) -> Self {
        LinearCombination {
            kind,
            level,
            terms: Vec::new(),
        }
    }

    /// The single-term combination `1 · Hom(pattern, ·)`.
    pub fn hom(pattern: &Pattern) -> Self {
        let (level, anchor) = match pattern.anchor() {
            Some(a) => (Level::Node, Some(a)),
            None => (Level::Graph, None),
        };
        let term = BasisTerm::new(pattern.graph(), anchor, Rational::one())
            .expect("anchor checked by Pattern");
        LinearCombination {
            kind: BasisKind::Hom,
            level,
            terms: vec![term],
        }
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn terms(&self) -> &[BasisTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient_of(&self, key: &CanonicalKey) -> Option<&Rational> {
        self.terms
            .iter()
            .find(|t| &t.key == key)
            .map(|t| &t.coefficient)
    }

    /// Basis graphs in term order.
    pub fn support(&self) -> Vec<Graph> {
        self.terms.iter().map(|t| t.graph.clone()).collect()
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| BasisTerm {
                coefficient: &t.coefficient * factor,
                ..t.clone()
            })
            .collect();
        simplify(&LinearCombination {
            kind: self.kind,
            level: self.level,
            terms,
        })
    }

    /// Sum of two combinations over the same basis kind and level.
    pub fn sum(&self, other: &LinearCombination) -> Result<Self> {
        if self.kind != other.kind || self.level != other.level {
            return Err(Error::BasisMismatch {
                expected: format!("a {} {}-level combination", self.kind, self.level),
                found: format!("a {} {}-level one", other.kind, other.level),
            });
        }
        let terms = self.terms.iter().chain(&other.terms).cloned().collect();
        Ok(simplify(&LinearCombination {
            kind: self.kind,
            level: self.level,
            terms,
        }))
    }

    pub fn to_document(&self) -> BasisDocument {
        BasisDocument {
            basis_kind: self.kind,
            level: self.level,
            terms: self
                .terms
                .iter()
                .map(|t| TermRecord {
                    graph6: t.key.graph6.clone(),
                    anchor: t.key.anchor,
                    num: t.coefficient.numer().to_string(),
                    den: t.coefficient.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &BasisDocument) -> Result<Self> {
        let mut terms = Vec::with_capacity(doc.terms.len());
        for rec in &doc.terms {
            let g = parse_graph6(&rec.graph6)?;
            let parse = |s: &str| {
                s.parse::<BigInt>()
                    .map_err(|e| Error::Encoding(format!("bad coefficient {s:?}: {e}")))
            };
            let den = parse(&rec.den)?;
            if den.is_zero() {
                return Err(Error::Encoding("zero denominator".into()));
            }
            terms.push(BasisTerm::new(
                &g,
                rec.anchor,
                Rational::new(parse(&rec.num)?, den),
            )?);
        }
        LinearCombination::new(doc.basis_kind, doc.level, terms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("basis documents serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(text)?)
    }
}

impl fmt::Display for LinearCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}-level):", self.kind, self.level)?;
        for t in &self.terms {
            write!(f, " {}·{}", t.coefficient, t.key)?;
        }
        Ok(())
    }
}

/// Serialized form `{basis_kind, level, terms: [{graph6, anchor?, num, den}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDocument {
    pub basis_kind: BasisKind,
    pub level: Level,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub graph6: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<usize>,
    pub num: String,
    pub den: String,
}

/// Merges terms with the same canonical key, drops zero coefficients and
/// restores the canonical order.
pub fn simplify(c: &LinearCombination) -> LinearCombination {
    let mut merged: BTreeMap<CanonicalKey, BasisTerm> = BTreeMap::new();
    for t in &c.terms {
        merged
            .entry(t.key.clone())
            .and_modify(|e| e.coefficient += &t.coefficient)
            .or_insert_with(|| t.clone());
    }
    let mut terms: Vec<BasisTerm> = merged
        .into_values()
        .filter(|t| !t.coefficient.is_zero())
        .collect();
    terms.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    LinearCombination {
        kind: c.kind,
        level: c.level,
        terms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named_pattern;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn term(name: &str, c: Rational) -> BasisTerm {
        let p = named_pattern(name).unwrap();
        BasisTerm::new(p.graph(), p.anchor(), c).unwrap()
    }

    #[test]
    fn cancelling_terms_vanish() {
        let c = LinearCombination::new(
            BasisKind::Hom,
            Level::Graph,
            vec![term("K3", r(1, 2)), term("K3", r(-1, 2))],
        )
        .unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn relabeled_terms_merge() {
        let relabeled = Graph::cycle(5).relabel(&[2, 4, 1, 0, 3]);
        let c = LinearCombination::new(
            BasisKind::Hom,
            Level::Graph,
            vec![
                term("C5", r(1, 10)),
                BasisTerm::new(&relabeled, None, r(1, 10)).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.terms()[0].coefficient(), &r(1, 5));
    }

    #[test]
    fn level_mismatch_rejected() {
        assert!(
            LinearCombination::new(BasisKind::Hom, Level::Graph, vec![term("P3@1", r(1, 1))])
                .is_err()
        );
        assert!(
            LinearCombination::new(BasisKind::Hom, Level::Node, vec![term("P3", r(1, 1))]).is_err()
        );
    }

    #[test]
    fn json_round_trip() {
        let c = LinearCombination::new(
            BasisKind::Hom,
            Level::Node,
            vec![term("C4@0", r(1, 2)), term("P3@1", r(-3, 7))],
        )
        .unwrap();
        let text = c.to_json();
        assert!(text.contains("\"basis_kind\":\"hom\""));
        assert_eq!(LinearCombination::from_json(&text).unwrap(), c);
    }

    const NAMES: &[&str] = &["K2", "P3", "K3", "C4", "P4", "C5", "S3", "K4"];

    proptest! {
        #[test]
        fn simplify_is_idempotent_and_order_independent(
            picks in proptest::collection::vec((0usize..NAMES.len(), -5i64..5, 1i64..6), 0..12),
            seed in any::<u64>(),
        ) {
            let terms: Vec<BasisTerm> = picks.iter().map(|&(i, n, d)| term(NAMES[i], r(n, d))).collect();
            let base = LinearCombination { kind: BasisKind::Hom, level: Level::Graph, terms: terms.clone() };
            let once = simplify(&base);
            prop_assert_eq!(&simplify(&once), &once);
            let mut shuffled = terms;
            // deterministic shuffle from the seed
            let mut s = seed;
            for i in (1..shuffled.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (s >> 33) as usize % (i + 1));
            }
            let other = simplify(&LinearCombination { kind: BasisKind::Hom, level: Level::Graph, terms: shuffled });
            prop_assert_eq!(other, once);
        }
    }
}
