//! Streams random hosts through a compiled batch plan and reports timings.
//!
//! Two workloads run on the same hosts: the anchored spasm of C8 at node
//! level, and homomorphism counts of every connected graph on at most five
//! vertices at graph level.
//!
//! ```text
//! cargo run --release --example batch_throughput -- [hosts] [jobs]
//! ```

use std::time::Instant;

use homspasm::graph::{enumerate_connected_graphs, AnchoredGraph, Graph, Pattern};
use homspasm::homcount::{batch_evaluate, BatchPlan, CountOptions, HostGraph};
use homspasm::spasm::{anchored_spasm_of, Level, LinearCombination};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_host(rng: &mut ChaCha8Rng, n: usize, m: usize) -> HostGraph {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    pairs.shuffle(rng);
    pairs.truncate(m);
    HostGraph::new(n, &pairs).unwrap()
}

fn run(label: &str, params: &[LinearCombination], level: Level, hosts: &[HostGraph], jobs: usize) {
    let plan = BatchPlan::new(params, level, false, CountOptions::default()).unwrap();
    let start = Instant::now();
    let mut rows = 0;
    for row in batch_evaluate(&plan, hosts.iter().cloned(), jobs).unwrap() {
        row.unwrap();
        rows += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    println!(
        "{label}: {rows} hosts x {} columns in {secs:.2}s ({:.0} hosts/s, {} DP runs)",
        plan.columns().len(),
        rows as f64 / secs,
        plan.dp_runs()
    );
}

fn main() {
    let mut args = std::env::args().skip(1);
    let hosts: usize = args.next().map_or(1000, |s| s.parse().unwrap());
    let jobs: usize = args.next().map_or(1, |s| s.parse().unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let hosts: Vec<HostGraph> = (0..hosts).map(|_| random_host(&mut rng, 23, 50)).collect();

    let c8 = AnchoredGraph::new(Graph::cycle(8), 0).unwrap();
    run(
        "node-level anchored spasm of C8",
        &[anchored_spasm_of(&c8).unwrap()],
        Level::Node,
        &hosts,
        jobs,
    );

    let omega: Vec<LinearCombination> = enumerate_connected_graphs(1, 5)
        .unwrap()
        .into_iter()
        .map(|g| LinearCombination::hom(&Pattern::Plain(g)))
        .collect();
    run(
        "graph-level connected graphs on <= 5 vertices",
        &omega,
        Level::Graph,
        &hosts,
        jobs,
    );
}
