//! Exact homomorphism counting and evaluation of Hom-basis combinations.

mod batch;
mod host;
mod plan;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{canonical_form_anchored, AnchoredGraph, CanonicalKey, Graph};
use crate::spasm::{BasisKind, Level, LinearCombination, Rational};

pub use batch::{batch_evaluate, BatchEvaluator, BatchPlan, Column, HostRow};
pub use host::HostGraph;
pub use plan::{CountOptions, HomPlan, WIDE_BAG_LIMIT, WIDTH_GUARD_HOST_VERTICES};

/// Exact homomorphism count.
pub type Count = BigUint;

/// Per-host-vertex counts of an anchored pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountVector {
    pub key: CanonicalKey,
    pub counts: Vec<Count>,
}

impl CountVector {
    pub fn total(&self) -> Count {
        self.counts.iter().sum()
    }
}

/// `Hom(pattern, host)`. Disconnected patterns are the product over their
/// components; the empty pattern has exactly one homomorphism.
pub fn hom_count(pattern: &Graph, host: &HostGraph) -> Result<Count> {
    HomPlan::new(pattern, None)?.count(host, CountOptions::default())
}

/// `Hom(pattern, host)[⊛ ↦ v]` for every host vertex `v`.
pub fn hom_count_node(pattern: &AnchoredGraph, host: &HostGraph) -> Result<CountVector> {
    let plan = HomPlan::new(pattern.graph(), Some(pattern.anchor()))?;
    Ok(CountVector {
        key: canonical_form_anchored(pattern).key,
        counts: plan.count_node(host, CountOptions::default())?,
    })
}

fn require_hom(c: &LinearCombination, level: Level) -> Result<()> {
    if c.kind() != BasisKind::Hom || c.level() != level {
        return Err(Error::BasisMismatch {
            expected: format!("a hom {level}-level combination"),
            found: format!("a {} {}-level one", c.kind(), c.level()),
        });
    }
    Ok(())
}

pub(crate) fn weighted(coefficient: &Rational, count: &Count) -> Rational {
    coefficient * Rational::from_integer(BigInt::from(count.clone()))
}

/// `Σ α_F · Hom(F, host)` for a graph-level Hom-basis combination.
pub fn evaluate(c: &LinearCombination, host: &HostGraph) -> Result<Rational> {
    require_hom(c, Level::Graph)?;
    let mut total = Rational::zero();
    for t in c.terms() {
        total += weighted(t.coefficient(), &hom_count(t.graph(), host)?);
    }
    Ok(total)
}

/// Per-vertex `Σ α_F · Hom(F, host)[⊛ ↦ v]` for a node-level combination.
pub fn evaluate_node(c: &LinearCombination, host: &HostGraph) -> Result<Vec<Rational>> {
    require_hom(c, Level::Node)?;
    let mut out = vec![Rational::zero(); host.vertex_count()];
    for t in c.terms() {
        let anchored = t.anchored().expect("node-level terms are anchored");
        let counts = HomPlan::new(anchored.graph(), Some(anchored.anchor()))?
            .count_node(host, CountOptions::default())?;
        for (acc, n) in out.iter_mut().zip(&counts) {
            *acc += weighted(t.coefficient(), n);
        }
    }
    Ok(out)
}
