use std::collections::BTreeMap;

use super::LinearCombination;
use crate::decomp::treewidth_exact;
use crate::error::Result;
use crate::graph::{canonical_form, connected_components, CanonicalKey, Graph};

/// Keeps the terms whose basis graph has treewidth strictly greater than `k`.
pub fn filter_min_treewidth(c: &LinearCombination, k: i64) -> Result<LinearCombination> {
    let mut out = c.clone();
    let mut keep = Vec::with_capacity(c.terms.len());
    for t in &c.terms {
        let (width, _) = treewidth_exact(t.graph())?;
        if width > k {
            keep.push(t.clone());
        }
    }
    out.terms = keep;
    Ok(out)
}

/// All maximal connected components of the inputs, one per isomorphism
/// class, in (vertex count, edge count, key) order.
pub fn connected_component_support(graphs: &[Graph]) -> Vec<Graph> {
    let mut seen: BTreeMap<(usize, usize, CanonicalKey), Graph> = BTreeMap::new();
    for g in graphs {
        for comp in connected_components(g) {
            let cf = canonical_form(&comp);
            seen.entry((comp.vertex_count(), comp.edge_count(), cf.key))
                .or_insert(cf.graph);
        }
    }
    seen.into_values().collect()
}
