//! Brute-force reference counts, written straight from the definitions.
//!
//! Nothing here touches the basis expansions or the counting engine; the
//! only shared code is the graph type. Every function enumerates vertex maps
//! by backtracking, checking edges as vertices are placed.

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::graph::{canonical_form_anchored, AnchoredGraph, Graph};
use crate::homcount::CountVector;

pub const ORACLE_PATTERN_LIMIT: usize = 7;
pub const ORACLE_MAP_LIMIT: u128 = 1_000_000_000;

fn check_size(pattern: &Graph, host: &Graph) -> Result<()> {
    let k = pattern.vertex_count();
    if k > ORACLE_PATTERN_LIMIT {
        return Err(Error::LimitExceeded {
            what: "oracle pattern vertices",
            value: k,
            limit: ORACLE_PATTERN_LIMIT,
        });
    }
    let maps = (host.vertex_count() as u128).pow(k as u32);
    if maps > ORACLE_MAP_LIMIT {
        return Err(Error::LimitExceeded {
            what: "oracle vertex maps",
            value: maps.min(usize::MAX as u128) as usize,
            limit: ORACLE_MAP_LIMIT as usize,
        });
    }
    Ok(())
}

/// Calls `visit` with every edge-preserving map (as `map[pattern vertex]`),
/// optionally restricted to injective maps.
fn for_each_map(pattern: &Graph, host: &Graph, injective: bool, visit: &mut dyn FnMut(&[usize])) {
    fn go(
        i: usize,
        pattern: &Graph,
        host: &Graph,
        injective: bool,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if i == pattern.vertex_count() {
            visit(map);
            return;
        }
        for y in 0..host.vertex_count() {
            if injective && used[y] {
                continue;
            }
            let ok = pattern
                .neighbors(i)
                .iter()
                .all(|&w| w >= i || host.has_edge(map[w], y));
            if !ok {
                continue;
            }
            map.push(y);
            used[y] = true;
            go(i + 1, pattern, host, injective, map, used, visit);
            used[y] = false;
            map.pop();
        }
    }
    let mut map = Vec::with_capacity(pattern.vertex_count());
    let mut used = vec![false; host.vertex_count()];
    go(0, pattern, host, injective, &mut map, &mut used, visit);
}

fn node_vector(pattern: &AnchoredGraph, counts: Vec<u64>) -> CountVector {
    CountVector {
        key: canonical_form_anchored(pattern).key,
        counts: counts.into_iter().map(BigUint::from).collect(),
    }
}

/// Number of homomorphisms from `pattern` to `host`.
pub fn brute_hom(pattern: &Graph, host: &Graph) -> Result<BigUint> {
    check_size(pattern, host)?;
    let mut count = 0u64;
    for_each_map(pattern, host, false, &mut |_| count += 1);
    Ok(count.into())
}

/// Homomorphisms bucketed by the image of the anchor.
pub fn brute_hom_node(pattern: &AnchoredGraph, host: &Graph) -> Result<CountVector> {
    check_size(pattern.graph(), host)?;
    let mut counts = vec![0u64; host.vertex_count()];
    for_each_map(pattern.graph(), host, false, &mut |m| {
        counts[m[pattern.anchor()]] += 1
    });
    Ok(node_vector(pattern, counts))
}

/// Number of injective homomorphisms.
pub fn brute_inj(pattern: &Graph, host: &Graph) -> Result<BigUint> {
    check_size(pattern, host)?;
    let mut count = 0u64;
    for_each_map(pattern, host, true, &mut |_| count += 1);
    Ok(count.into())
}

/// Automorphisms as injective edge-preserving self-maps (a bijection that
/// preserves edges also reflects them, by counting); `fixed` pins one vertex.
fn brute_automorphisms(pattern: &Graph, fixed: Option<usize>) -> u64 {
    let mut count = 0u64;
    for_each_map(pattern, pattern, true, &mut |m| {
        if fixed.is_none_or(|a| m[a] == a) {
            count += 1;
        }
    });
    count
}

type Image = (Vec<usize>, Vec<(usize, usize)>);

fn image_of(pattern: &Graph, m: &[usize]) -> Image {
    let mut vertices = m.to_vec();
    vertices.sort_unstable();
    let mut edges: Vec<(usize, usize)> = pattern
        .edges()
        .iter()
        .map(|&(u, v)| (m[u].min(m[v]), m[u].max(m[v])))
        .collect();
    edges.sort_unstable();
    (vertices, edges)
}

/// Number of subgraphs of `host` isomorphic to `pattern`, as distinct
/// (vertex set, edge set) images of injective homomorphisms.
pub fn brute_sub(pattern: &Graph, host: &Graph) -> Result<BigUint> {
    check_size(pattern, host)?;
    let mut images: HashSet<Image> = HashSet::new();
    let mut inj = 0u64;
    for_each_map(pattern, host, true, &mut |m| {
        inj += 1;
        images.insert(image_of(pattern, m));
    });
    let sub = images.len() as u64;
    assert_eq!(
        inj,
        brute_automorphisms(pattern, None) * sub,
        "Inj = Aut · Sub"
    );
    Ok(sub.into())
}

/// Per host vertex `v`, the number of subgraph copies of the pattern with
/// the anchor placed at `v`.
pub fn brute_sub_node(pattern: &AnchoredGraph, host: &Graph) -> Result<CountVector> {
    let g = pattern.graph();
    check_size(g, host)?;
    let a = pattern.anchor();
    let mut images: HashSet<(usize, Image)> = HashSet::new();
    let mut inj = vec![0u64; host.vertex_count()];
    for_each_map(g, host, true, &mut |m| {
        inj[m[a]] += 1;
        images.insert((m[a], image_of(g, m)));
    });
    let mut counts = vec![0u64; host.vertex_count()];
    for (v, _) in &images {
        counts[*v] += 1;
    }
    let aut = brute_automorphisms(g, Some(a));
    for v in 0..host.vertex_count() {
        assert_eq!(inj[v], aut * counts[v], "anchored Inj = Aut · Sub");
    }
    Ok(node_vector(pattern, counts))
}

/// Number of vertex subsets of `host` whose induced subgraph is isomorphic
/// to `pattern`.
pub fn brute_indsub(pattern: &Graph, host: &Graph) -> Result<BigUint> {
    check_size(pattern, host)?;
    let k = pattern.vertex_count();
    let mut subsets: HashSet<Vec<usize>> = HashSet::new();
    for_each_map(pattern, host, true, &mut |m| {
        // edge-preserving and injective; induced means non-edges map to non-edges too
        let induced = (0..k)
            .all(|u| (u + 1..k).all(|v| pattern.has_edge(u, v) || !host.has_edge(m[u], m[v])));
        if induced {
            let mut s = m.to_vec();
            s.sort_unstable();
            subsets.insert(s);
        }
    });
    Ok(BigUint::from(subsets.len()))
}
