use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{enumerate_graphs, format_graph6, AnchoredGraph, Graph};
use crate::homcount::{evaluate, evaluate_node, hom_count, hom_count_node, HostGraph};
use crate::oracle::{self, ORACLE_MAP_LIMIT, ORACLE_PATTERN_LIMIT};
use crate::spasm::{anchored_spasm_of, indsub_expansion, spasm_of, LinearCombination, Rational};

/// The counting side of an engine-versus-oracle comparison. Tests swap in a
/// faulty implementation to exercise the mismatch path.
pub trait Engine: Sync {
    fn hom(&self, pattern: &Graph, host: &Graph) -> Result<Rational>;
    fn sub(&self, pattern: &Graph, host: &Graph) -> Result<Rational>;
    fn indsub(&self, pattern: &Graph, host: &Graph) -> Result<Rational>;
    fn hom_node(&self, pattern: &AnchoredGraph, host: &Graph) -> Result<Vec<Rational>>;
    fn sub_node(&self, pattern: &AnchoredGraph, host: &Graph) -> Result<Vec<Rational>>;
}

fn int(n: BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Basis expansion followed by tree-decomposition counting.
#[derive(Default)]
pub struct DefaultEngine {
    bases: std::sync::Mutex<HashMap<(String, String), LinearCombination>>,
}

impl DefaultEngine {
    fn basis(
        &self,
        kind: &str,
        label: String,
        make: impl FnOnce() -> Result<LinearCombination>,
    ) -> Result<LinearCombination> {
        let key = (kind.to_string(), label);
        if let Some(c) = self.bases.lock().expect("basis memo poisoned").get(&key) {
            return Ok(c.clone());
        }
        let c = make()?;
        self.bases
            .lock()
            .expect("basis memo poisoned")
            .insert(key, c.clone());
        Ok(c)
    }
}

impl Engine for DefaultEngine {
    fn hom(&self, pattern: &Graph, host: &Graph) -> Result<Rational> {
        Ok(int(hom_count(pattern, &HostGraph::from(host))?))
    }

    fn sub(&self, pattern: &Graph, host: &Graph) -> Result<Rational> {
        let c = self.basis("sub", pattern.to_string(), || spasm_of(pattern))?;
        evaluate(&c, &HostGraph::from(host))
    }

    fn indsub(&self, pattern: &Graph, host: &Graph) -> Result<Rational> {
        let c = self.basis("indsub", pattern.to_string(), || indsub_expansion(pattern))?;
        evaluate(&c, &HostGraph::from(host))
    }

    fn hom_node(&self, pattern: &AnchoredGraph, host: &Graph) -> Result<Vec<Rational>> {
        Ok(hom_count_node(pattern, &HostGraph::from(host))?
            .counts
            .into_iter()
            .map(int)
            .collect())
    }

    fn sub_node(&self, pattern: &AnchoredGraph, host: &Graph) -> Result<Vec<Rational>> {
        let c = self.basis("sub-node", pattern.to_string(), || {
            anchored_spasm_of(pattern)
        })?;
        evaluate_node(&c, &HostGraph::from(host))
    }
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    /// Largest pattern, in vertices.
    pub max_pattern: usize,
    /// Every host up to this size is paired with every pattern.
    pub exhaustive_host: usize,
    /// Largest host in the random part.
    pub max_host: usize,
    /// Number of random (pattern, host) pairs.
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            max_pattern: 5,
            exhaustive_host: 4,
            max_host: 6,
            samples: 500,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub quantity: &'static str,
    /// graph6, with `@anchor` for node-level quantities.
    pub pattern: String,
    pub host: String,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} mismatch: pattern {} host {} oracle {} engine {}",
            self.quantity, self.pattern, self.host, self.expected, self.found
        )
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport {
    pub pairs: usize,
    pub comparisons: usize,
    pub passed: usize,
    pub mismatches: Vec<Mismatch>,
    /// graph6 of every (pattern, host) pair, in the order checked.
    #[serde(skip)]
    pub instances: Vec<(String, String)>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let p: f64 = rng.gen_range(0.2..0.9);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("simple by construction")
}

/// The instance family: every pattern on 1..=max_pattern vertices (up to
/// isomorphism) against every host on 0..=exhaustive_host vertices, then
/// `samples` seeded random pairs.
pub fn instance_family(cfg: &CheckConfig) -> Result<Vec<(Graph, Graph)>> {
    if cfg.max_pattern > ORACLE_PATTERN_LIMIT {
        return Err(Error::LimitExceeded {
            what: "check pattern vertices",
            value: cfg.max_pattern,
            limit: ORACLE_PATTERN_LIMIT,
        });
    }
    let largest_host = cfg.max_host.max(cfg.exhaustive_host) as u128;
    if largest_host.pow(cfg.max_pattern as u32) > ORACLE_MAP_LIMIT {
        return Err(Error::LimitExceeded {
            what: "check host vertices",
            value: largest_host as usize,
            limit: (ORACLE_MAP_LIMIT as f64).powf(1.0 / cfg.max_pattern.max(1) as f64) as usize,
        });
    }
    let mut patterns = Vec::new();
    for n in 1..=cfg.max_pattern {
        patterns.extend(enumerate_graphs(n)?);
    }
    let mut hosts = Vec::new();
    for n in 0..=cfg.exhaustive_host {
        hosts.extend(enumerate_graphs(n)?);
    }
    let mut family: Vec<(Graph, Graph)> =
        Vec::with_capacity(patterns.len() * hosts.len() + cfg.samples);
    for p in &patterns {
        for h in &hosts {
            family.push((p.clone(), h.clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.samples {
        let k = rng.gen_range(1..=cfg.max_pattern);
        let n = rng.gen_range(1..=cfg.max_host);
        family.push((random_graph(&mut rng, k), random_graph(&mut rng, n)));
    }
    Ok(family)
}

fn text<T: fmt::Display>(values: &[T]) -> String {
    let parts: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// Compares the engine with the oracle on the whole instance family:
/// Hom, Sub and IndSub at graph level, Hom and Sub at node level for every
/// anchor position.
pub fn run_check(engine: &dyn Engine, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    for (pattern, host) in instance_family(cfg)? {
        report.pairs += 1;
        let (p6, h6) = (format_graph6(&pattern), format_graph6(&host));
        report.instances.push((p6.clone(), h6.clone()));
        let mut compare =
            |quantity: &'static str, label: String, expected: String, found: String| {
                report.comparisons += 1;
                if expected == found {
                    report.passed += 1;
                } else {
                    report.mismatches.push(Mismatch {
                        quantity,
                        pattern: label,
                        host: h6.clone(),
                        expected,
                        found,
                    });
                }
            };
        let one = |n: BigUint| int(n).to_string();
        compare(
            "hom",
            p6.clone(),
            one(oracle::brute_hom(&pattern, &host)?),
            engine.hom(&pattern, &host)?.to_string(),
        );
        compare(
            "sub",
            p6.clone(),
            one(oracle::brute_sub(&pattern, &host)?),
            engine.sub(&pattern, &host)?.to_string(),
        );
        compare(
            "indsub",
            p6.clone(),
            one(oracle::brute_indsub(&pattern, &host)?),
            engine.indsub(&pattern, &host)?.to_string(),
        );
        for a in 0..pattern.vertex_count() {
            let anchored = AnchoredGraph::new(pattern.clone(), a)?;
            let label = format!("{p6}@{a}");
            let hom: Vec<Rational> = oracle::brute_hom_node(&anchored, &host)?
                .counts
                .into_iter()
                .map(int)
                .collect();
            compare(
                "hom-node",
                label.clone(),
                text(&hom),
                text(&engine.hom_node(&anchored, &host)?),
            );
            let sub: Vec<Rational> = oracle::brute_sub_node(&anchored, &host)?
                .counts
                .into_iter()
                .map(int)
                .collect();
            compare(
                "sub-node",
                label,
                text(&sub),
                text(&engine.sub_node(&anchored, &host)?),
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_is_seeded() {
        let cfg = CheckConfig {
            max_pattern: 3,
            exhaustive_host: 2,
            samples: 20,
            seed: 11,
            ..Default::default()
        };
        let a = instance_family(&cfg).unwrap();
        let b = instance_family(&cfg).unwrap();
        assert_eq!(a, b);
        // 7 patterns on 1..=3 vertices, 4 hosts on 0..=2 vertices
        assert_eq!(a.len(), 7 * 4 + 20);
        let other = instance_family(&CheckConfig { seed: 12, ..cfg }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn limits_are_enforced() {
        let cfg = CheckConfig {
            max_pattern: 8,
            ..Default::default()
        };
        assert!(instance_family(&cfg).unwrap_err().is_resource_limit());
        let cfg = CheckConfig {
            max_pattern: 7,
            max_host: 30,
            ..Default::default()
        };
        assert!(instance_family(&cfg).unwrap_err().is_resource_limit());
    }

    #[test]
    fn small_default_engine_run_passes() {
        let cfg = CheckConfig {
            max_pattern: 3,
            exhaustive_host: 3,
            max_host: 5,
            samples: 30,
            seed: 1,
        };
        let report = run_check(&DefaultEngine::default(), &cfg).unwrap();
        assert!(report.ok(), "{:?}", report.mismatches);
        assert!(report.comparisons > report.pairs * 3);
    }
}
