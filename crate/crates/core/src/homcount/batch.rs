use std::collections::{BTreeMap, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::Zero;
use rayon::prelude::*;

use super::{weighted, Count, CountOptions, HomPlan, HostGraph};
use crate::error::{Error, Result};
use crate::graph::{CanonicalKey, Graph};
use crate::spasm::{BasisKind, BasisTerm, Level, LinearCombination, Rational};

/// A deduplicated basis graph; one column of the output.
#[derive(Clone, Debug)]
pub struct Column {
    pub key: CanonicalKey,
    /// Canonically labeled basis graph; the anchor (if any) is `key.anchor`.
    pub graph: Graph,
}

/// Evaluation result for one host.
#[derive(Clone, Debug, PartialEq)]
pub enum HostRow {
    Graph {
        /// One count per column.
        counts: Vec<Count>,
        /// One value per input parameter.
        derived: Vec<Rational>,
    },
    Node {
        vertices: usize,
        /// `counts[column][vertex]`.
        counts: Vec<Vec<Count>>,
        /// `derived[param][vertex]`.
        derived: Vec<Vec<Rational>>,
    },
}

/// Several Hom-basis parameters compiled together, with their basis graphs
/// merged by canonical key so a shared graph is counted once per host.
#[derive(Debug)]
pub struct BatchPlan {
    level: Level,
    columns: Vec<Column>,
    plans: Vec<HomPlan>,
    params: Vec<Vec<(usize, Rational)>>,
    options: CountOptions,
    dp_runs: AtomicU64,
}

enum Cell {
    Graph(Count),
    Node(Vec<Count>),
}

fn anchor_at_zero(c: &LinearCombination) -> Result<LinearCombination> {
    let terms = c
        .terms()
        .iter()
        .map(|t| BasisTerm::new(t.graph(), Some(0), t.coefficient().clone()))
        .collect::<Result<Vec<_>>>()?;
    LinearCombination::new(c.kind(), Level::Node, terms)
}

impl BatchPlan {
    /// Compiles `params` for evaluation at `level`.
    ///
    /// With `auto_anchor`, graph-level parameters requested at node level
    /// have every basis graph anchored at its canonical vertex 0, so the
    /// per-vertex values sum to the graph-level value.
    pub fn new(
        params: &[LinearCombination],
        level: Level,
        auto_anchor: bool,
        options: CountOptions,
    ) -> Result<Self> {
        let mut resolved = Vec::with_capacity(params.len());
        for p in params {
            if p.kind() != BasisKind::Hom {
                return Err(Error::BasisMismatch {
                    expected: "a hom combination".into(),
                    found: format!("a {} combination", p.kind()),
                });
            }
            let p = match (p.level(), level) {
                (a, b) if a == b => p.clone(),
                (Level::Graph, Level::Node) if auto_anchor => anchor_at_zero(p)?,
                (found, _) => {
                    return Err(Error::BasisMismatch {
                        expected: format!("a {level}-level combination"),
                        found: format!(
                            "a {found}-level one (anchor the pattern or enable auto-anchoring)"
                        ),
                    })
                }
            };
            resolved.push(p);
        }

        let mut by_key: BTreeMap<(usize, usize, CanonicalKey), Graph> = BTreeMap::new();
        for p in &resolved {
            for t in p.terms() {
                by_key
                    .entry((
                        t.graph().vertex_count(),
                        t.graph().edge_count(),
                        t.key().clone(),
                    ))
                    .or_insert_with(|| t.graph().clone());
            }
        }
        let columns: Vec<Column> = by_key
            .into_iter()
            .map(|((_, _, key), graph)| Column { key, graph })
            .collect();
        let index: BTreeMap<&CanonicalKey, usize> = columns
            .iter()
            .enumerate()
            .map(|(i, c)| (&c.key, i))
            .collect();
        let params = resolved
            .iter()
            .map(|p| {
                p.terms()
                    .iter()
                    .map(|t| (index[t.key()], t.coefficient().clone()))
                    .collect()
            })
            .collect();
        let plans = columns
            .iter()
            .map(|c| HomPlan::new(&c.graph, c.key.anchor))
            .collect::<Result<Vec<_>>>()?;
        Ok(BatchPlan {
            level,
            columns,
            plans,
            params,
            options,
            dp_runs: AtomicU64::new(0),
        })
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    /// Column indices and coefficients of the `i`-th parameter.
    pub fn param_terms(&self, i: usize) -> &[(usize, Rational)] {
        &self.params[i]
    }

    /// Number of single-pattern counts performed so far.
    pub fn dp_runs(&self) -> u64 {
        self.dp_runs.load(Ordering::Relaxed)
    }

    fn cell(&self, column: usize, host: &HostGraph) -> Result<Cell> {
        self.dp_runs.fetch_add(1, Ordering::Relaxed);
        let plan = &self.plans[column];
        Ok(match self.level {
            Level::Graph => Cell::Graph(plan.count(host, self.options)?),
            Level::Node => Cell::Node(plan.count_node(host, self.options)?),
        })
    }

    fn assemble(
        &self,
        host: &HostGraph,
        cells: impl Iterator<Item = Result<Cell>>,
    ) -> Result<HostRow> {
        match self.level {
            Level::Graph => {
                let counts = cells
                    .map(|c| match c? {
                        Cell::Graph(n) => Ok(n),
                        Cell::Node(_) => unreachable!("graph-level plan"),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let derived = self
                    .params
                    .iter()
                    .map(|terms| {
                        terms.iter().fold(Rational::zero(), |acc, (col, coef)| {
                            acc + weighted(coef, &counts[*col])
                        })
                    })
                    .collect();
                Ok(HostRow::Graph { counts, derived })
            }
            Level::Node => {
                let n = host.vertex_count();
                let counts = cells
                    .map(|c| match c? {
                        Cell::Node(v) => Ok(v),
                        Cell::Graph(_) => unreachable!("node-level plan"),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let derived = self
                    .params
                    .iter()
                    .map(|terms| {
                        let mut values = vec![Rational::zero(); n];
                        for (col, coef) in terms {
                            for (acc, c) in values.iter_mut().zip(&counts[*col]) {
                                *acc += weighted(coef, c);
                            }
                        }
                        values
                    })
                    .collect();
                Ok(HostRow::Node {
                    vertices: n,
                    counts,
                    derived,
                })
            }
        }
    }

    /// Evaluates every column and parameter on one host, sequentially.
    pub fn evaluate_host(&self, host: &HostGraph) -> Result<HostRow> {
        let cells = (0..self.columns.len()).map(|c| self.cell(c, host));
        self.assemble(host, cells)
    }
}

/// Ordered iterator over per-host results; see [`batch_evaluate`].
pub struct BatchEvaluator<'a, I> {
    plan: &'a BatchPlan,
    hosts: I,
    pool: rayon::ThreadPool,
    chunk: usize,
    ready: VecDeque<Result<HostRow>>,
}

/// Evaluates `plan` on each host using `jobs` worker threads.
///
/// Work items are (host, column) pairs; results come back one row per host
/// in input order and do not depend on `jobs`. A failing host yields an
/// `Err` row and the stream continues.
pub fn batch_evaluate<I>(
    plan: &BatchPlan,
    hosts: I,
    jobs: usize,
) -> Result<BatchEvaluator<'_, I::IntoIter>>
where
    I: IntoIterator<Item = HostGraph>,
{
    if jobs == 0 {
        return Err(Error::Config("jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(BatchEvaluator {
        plan,
        hosts: hosts.into_iter(),
        pool,
        chunk: (jobs * 16).max(64),
        ready: VecDeque::new(),
    })
}

impl<I: Iterator<Item = HostGraph>> BatchEvaluator<'_, I> {
    fn refill(&mut self) {
        let hosts: Vec<HostGraph> = self.hosts.by_ref().take(self.chunk).collect();
        if hosts.is_empty() {
            return;
        }
        let plan = self.plan;
        let width = plan.columns.len();
        let mut cells: Vec<Result<Cell>> = self.pool.install(|| {
            (0..hosts.len() * width)
                .into_par_iter()
                .map(|i| plan.cell(i % width, &hosts[i / width]))
                .collect()
        });
        let mut drain = cells.drain(..);
        for host in &hosts {
            let row = plan.assemble(host, drain.by_ref().take(width));
            self.ready.push_back(row);
        }
    }
}

impl<I: Iterator<Item = HostGraph>> Iterator for BatchEvaluator<'_, I> {
    type Item = Result<HostRow>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.ready.is_empty() {
            self.refill();
        }
        self.ready.pop_front()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{named_pattern, Pattern};
    use crate::spasm::{anchored_spasm_of, spasm_of};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_host(rng: &mut ChaCha8Rng, n: usize, p: f64) -> HostGraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        HostGraph::new(n, &edges).unwrap()
    }

    #[test]
    fn shared_terms_counted_once_per_host() {
        // K3 is in the support of all three.
        let params = vec![
            spasm_of(&Graph::cycle(4)).unwrap(),
            spasm_of(&Graph::cycle(5)).unwrap(),
            LinearCombination::hom(&Pattern::Plain(Graph::complete(3))),
        ];
        let plan = BatchPlan::new(&params, Level::Graph, false, CountOptions::default()).unwrap();
        let k3 = plan
            .columns()
            .iter()
            .filter(|c| c.graph == Graph::complete(3))
            .count();
        assert_eq!(k3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let hosts: Vec<HostGraph> = (0..100).map(|_| random_host(&mut rng, 8, 0.4)).collect();
        let rows: Vec<_> = batch_evaluate(&plan, hosts, 2).unwrap().collect();
        assert_eq!(rows.len(), 100);
        assert_eq!(plan.dp_runs(), 100 * plan.columns().len() as u64);
        // C4, C5 and K3 supports: {C4, P3, K2}, {C5, paw, K3}, {K3}
        assert_eq!(plan.columns().len(), 6);
    }

    #[test]
    fn results_do_not_depend_on_jobs() {
        let params =
            vec![
                anchored_spasm_of(&named_pattern("C5@0").unwrap().into_anchored().unwrap())
                    .unwrap(),
            ];
        let plan = BatchPlan::new(&params, Level::Node, false, CountOptions::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let hosts: Vec<HostGraph> = (0..150).map(|_| random_host(&mut rng, 9, 0.35)).collect();
        let one: Vec<HostRow> = batch_evaluate(&plan, hosts.clone(), 1)
            .unwrap()
            .map(Result::unwrap)
            .collect();
        let four: Vec<HostRow> = batch_evaluate(&plan, hosts.clone(), 4)
            .unwrap()
            .map(Result::unwrap)
            .collect();
        assert_eq!(one, four);
        for (h, row) in hosts.iter().zip(&one) {
            assert_eq!(row, &plan.evaluate_host(h).unwrap());
        }
    }

    #[test]
    fn failing_host_does_not_stop_the_stream() {
        let params = vec![LinearCombination::hom(&Pattern::Plain(Graph::complete(6)))];
        let plan = BatchPlan::new(&params, Level::Graph, false, CountOptions::default()).unwrap();
        let hosts = vec![
            HostGraph::from(&Graph::complete(6)),
            HostGraph::new(100_001, &[]).unwrap(),
            HostGraph::from(&Graph::complete(7)),
        ];
        let rows: Vec<_> = batch_evaluate(&plan, hosts, 2).unwrap().collect();
        assert_eq!(rows.len(), 3);
        assert!(rows[0].is_ok());
        assert!(matches!(rows[1], Err(Error::WidthGuard { .. })));
        assert!(
            matches!(&rows[2], Ok(HostRow::Graph { counts, .. }) if counts[0] == Count::from(5040u32))
        );
    }

    #[test]
    fn level_and_kind_checks() {
        let c4 = spasm_of(&Graph::cycle(4)).unwrap();
        assert!(BatchPlan::new(
            std::slice::from_ref(&c4),
            Level::Node,
            false,
            CountOptions::default()
        )
        .is_err());
        let plan = BatchPlan::new(
            std::slice::from_ref(&c4),
            Level::Node,
            true,
            CountOptions::default(),
        )
        .unwrap();
        assert!(plan.columns().iter().all(|c| c.key.anchor.is_some()));
        // auto-anchored values sum to the graph-level value
        let host = HostGraph::from(&Graph::complete(4));
        let HostRow::Node { derived, .. } = plan.evaluate_host(&host).unwrap() else {
            panic!("node row")
        };
        let total: Rational = derived[0].iter().sum();
        assert_eq!(total, Rational::from_integer(3.into()));
        let inj = crate::spasm::inj_expansion(&Pattern::Plain(Graph::cycle(4))).unwrap();
        let sub_kind =
            LinearCombination::new(BasisKind::Sub, Level::Graph, inj.terms().to_vec()).unwrap();
        assert!(BatchPlan::new(&[sub_kind], Level::Graph, false, CountOptions::default()).is_err());
        assert!(batch_evaluate(&plan, Vec::new(), 0).is_err());
    }
}
