//! Acceptance suite: one line per criterion.
//!
//! Runs without the libtest harness. The process fails if any criterion
//! fails, except for the claims listed in `UNATTAINABLE`, which are printed
//! as failures together with the reason they cannot hold.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use homspasm::cli::{expand_specs, run_check, CheckConfig, DefaultEngine, ExpandOptions};
use homspasm::decomp::treewidth_exact;
use homspasm::features::{compute_features, write_csv, Dataset, FeatureConfig};
use homspasm::graph::{
    canonical_form, canonical_form_anchored, categorical_product, disjoint_union,
    enumerate_connected_graphs, enumerate_graphs, format_graph6, AnchoredGraph, CanonicalKey,
    Graph, Pattern,
};
use homspasm::homcount::{
    batch_evaluate, hom_count, hom_count_node, BatchPlan, CountOptions, HostGraph,
};
use homspasm::spasm::{anchored_spasm_of, spasm_of, Level, LinearCombination, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{gnm, gnp, host};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

/// Criteria whose literal statement is false, with the reason.
const UNATTAINABLE: &[(u32, &str)] = &[(
    4,
    "C8 is bipartite, so its spasm contains trees (K2 among them), and folding opposite vertices together gives K4 of width 3; only the C7 half holds",
)];

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn anchored(g: Graph, a: usize) -> AnchoredGraph {
    AnchoredGraph::new(g, a).unwrap()
}

fn anchored_union() -> BTreeSet<CanonicalKey> {
    [7, 8]
        .into_iter()
        .flat_map(|n| {
            anchored_spasm_of(&anchored(Graph::cycle(n), 0))
                .unwrap()
                .terms()
                .iter()
                .map(|t| t.key().clone())
                .collect::<Vec<_>>()
        })
        .collect()
}

fn basis_sizes() -> Outcome {
    let expect = |name: &str, got: usize, want: usize| {
        ensure(got == want, || {
            format!("{name}: {got} terms, expected {want}")
        })
    };
    for (n, want) in [(7, 12), (8, 35)] {
        expect(
            &format!("C{n}"),
            spasm_of(&Graph::cycle(n)).unwrap().len(),
            want,
        )?;
    }
    for (n, want) in [(4, 4), (5, 8), (6, 15)] {
        expect(
            &format!("P{n}"),
            spasm_of(&Graph::path(n)).unwrap().len(),
            want,
        )?;
    }
    expect("anchored C7 and C8", anchored_union().len(), 118)?;
    expect(
        "connected graphs on 2..=5 vertices",
        enumerate_connected_graphs(2, 5).unwrap().len(),
        30,
    )?;
    for n in 3..=5 {
        expect(
            &format!("K{n}"),
            spasm_of(&Graph::complete(n)).unwrap().len(),
            1,
        )?;
    }
    Ok("C7 12, C8 35, P4 4, P5 8, P6 15, anchored union 118, connected 30, K3-K5 1".into())
}

fn c5_coefficients() -> Outcome {
    let basis = spasm_of(&Graph::cycle(5)).unwrap();
    let paw = Graph::new(4, [(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
    let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
    let want = [
        ("C5", Graph::cycle(5), r(1, 10)),
        ("paw", paw, r(-1, 2)),
        ("K3", Graph::complete(3), r(1, 2)),
    ];
    ensure(basis.len() == 3, || format!("{} terms", basis.len()))?;
    for (name, g, c) in &want {
        let got = basis.coefficient_of(&canonical_form(g).key);
        ensure(got == Some(c), || format!("{name}: {got:?}, expected {c}"))?;
    }
    Ok("1/10 C5, -1/2 paw, 1/2 K3".into())
}

fn anchored_c4() -> Outcome {
    let basis = anchored_spasm_of(&anchored(Graph::cycle(4), 0)).unwrap();
    ensure(basis.len() == 4, || format!("{} terms", basis.len()))?;
    for a in [0, 1] {
        let key = canonical_form_anchored(&anchored(Graph::path(3), a)).key;
        ensure(basis.coefficient_of(&key).is_some(), || {
            format!("P3 anchored at {a} missing")
        })?;
    }
    Ok("4 terms, both anchorings of P3 present".into())
}

fn spasm_treewidths() -> Outcome {
    let mut report = Vec::new();
    let mut all_two = true;
    for n in [7, 8] {
        let mut by_width: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        for t in spasm_of(&Graph::cycle(n)).unwrap().terms() {
            let (w, _) = treewidth_exact(t.graph()).unwrap();
            by_width.entry(w).or_default().push(t.key().to_string());
        }
        let widths: Vec<_> = by_width.iter().map(|(w, ks)| (*w, ks.len())).collect();
        all_two &= widths.len() == 1 && widths[0].0 == 2;
        report.push(format!("C{n} widths {widths:?}"));
        for (w, keys) in &by_width {
            if *w != 2 {
                report.push(format!("C{n} width-{w} terms {keys:?}"));
            }
        }
    }
    let text = report.join("; ");
    if all_two {
        Ok(text)
    } else {
        Err(text)
    }
}

fn oracle_suite() -> Outcome {
    let report =
        run_check(&DefaultEngine::default(), &CheckConfig::default()).map_err(|e| e.to_string())?;
    let summary = format!(
        "{} pairs, {} comparisons, {} mismatches",
        report.pairs,
        report.comparisons,
        report.mismatches.len()
    );
    match report.mismatches.first() {
        None => Ok(summary),
        Some(m) => Err(format!("{summary}; first: {m}")),
    }
}

fn lovasz_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let connected = enumerate_connected_graphs(1, 5).unwrap();
    let small = |rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(1..=5);
        gnp(rng, n, 0.5)
    };
    for i in 0..200 {
        let f = connected[rng.gen_range(0..connected.len())].clone();
        let (g, h) = (small(&mut rng), small(&mut rng));
        let hom = |p: &Graph, t: &Graph| hom_count(p, &host(t)).unwrap();
        let case = || {
            format!(
                "triple {i}: F={} G={} H={}",
                format_graph6(&f),
                format_graph6(&g),
                format_graph6(&h)
            )
        };
        ensure(
            hom(&f, &disjoint_union(&g, &h)) == hom(&f, &g) + hom(&f, &h),
            || format!("sum over hosts fails, {}", case()),
        )?;
        ensure(
            hom(&f, &categorical_product(&g, &h)) == hom(&f, &g) * hom(&f, &h),
            || format!("product fails, {}", case()),
        )?;
        ensure(
            hom(&disjoint_union(&f, &g), &h) == hom(&f, &h) * hom(&g, &h),
            || format!("disjoint pattern fails, {}", case()),
        )?;
    }
    Ok("200 triples, 600 identities".into())
}

fn node_sum_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let hosts: Vec<HostGraph> = (0..50).map(|_| host(&gnp(&mut rng, 20, 0.2))).collect();

    let mut terms: Vec<AnchoredGraph> = Vec::new();
    for n in [7, 8] {
        for t in anchored_spasm_of(&anchored(Graph::cycle(n), 0))
            .unwrap()
            .terms()
        {
            terms.push(t.anchored().unwrap());
        }
    }
    let mut plain: Vec<Graph> = Vec::new();
    for g in [7, 8]
        .map(Graph::cycle)
        .into_iter()
        .chain([4, 5, 6].map(Graph::path))
    {
        plain.extend(spasm_of(&g).unwrap().support());
    }
    plain.extend(enumerate_connected_graphs(2, 5).unwrap());
    plain.extend((3..=5).map(Graph::complete));
    terms.extend(plain.iter().map(|g| anchored(canonical_form(g).graph, 0)));

    let mut checked = 0;
    for (i, h) in hosts.iter().enumerate() {
        for t in &terms {
            let node = hom_count_node(t, h).unwrap();
            let graph = hom_count(t.graph(), h).unwrap();
            ensure(node.total() == graph, || {
                format!("host {i}, {}: {} vs {graph}", node.key, node.total())
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{} anchored terms x 50 hosts, {checked} sums",
        terms.len()
    ))
}

fn star_counterexample() -> Outcome {
    let star = host(&Graph::star(9));
    let center = (0..10).find(|&v| star.degree(v) == 9).unwrap();
    let middle = hom_count_node(&anchored(Graph::path(3), 1), &star).unwrap();
    let end = hom_count_node(&anchored(Graph::path(3), 0), &star).unwrap();
    let (m, e) = (&middle.counts[center], &end.counts[center]);
    ensure(*m == 81u32.into() && *e == 9u32.into(), || {
        format!("center entries {m} (middle) and {e} (end)")
    })?;
    Ok(format!("center: middle-anchored {m}, end-anchored {e}"))
}

fn spasm_closure() -> Outcome {
    let mut memo: HashMap<CanonicalKey, BTreeSet<CanonicalKey>> = HashMap::new();
    let mut support = |g: &Graph| -> BTreeSet<CanonicalKey> {
        let key = canonical_form(g).key;
        memo.entry(key)
            .or_insert_with(|| {
                spasm_of(g)
                    .unwrap()
                    .terms()
                    .iter()
                    .map(|t| t.key().clone())
                    .collect()
            })
            .clone()
    };
    let mut graphs = 0;
    for n in 1..=6 {
        for g in enumerate_graphs(n).unwrap() {
            let sg = support(&g);
            let lc = spasm_of(&g).unwrap();
            for f in lc.support() {
                let sf = support(&f);
                ensure(sf.is_subset(&sg), || {
                    format!("{} in spasm of {}", format_graph6(&f), format_graph6(&g))
                })?;
            }
            graphs += 1;
        }
    }
    Ok(format!("{graphs} graphs on 1..=6 vertices"))
}

fn determinism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let graphs = (0..1000)
        .map(|i| {
            let n = rng.gen_range(6..=14);
            (format!("g{i:04}"), host(&gnp(&mut rng, n, 0.3)))
        })
        .collect();
    let ds = Dataset::new("synthetic", graphs).unwrap();
    let specs: Vec<String> = ["omega-con-4", "C5", "C6@0", "graphlets-4"]
        .map(String::from)
        .into();
    let params = expand_specs(&specs, &ExpandOptions::default()).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for jobs in [1, 4, 8] {
        for level in [Level::Graph, Level::Node] {
            let params: Vec<_> = params
                .iter()
                .filter(|p| level == Level::Node || p.combination.level() == Level::Graph)
                .cloned()
                .collect();
            let cfg = FeatureConfig {
                level,
                include_derived: true,
                auto_anchor: true,
                jobs,
                ..Default::default()
            };
            let m = compute_features(&ds, &params, &cfg).map_err(|e| e.to_string())?;
            let mut buf = Vec::new();
            write_csv(&m, &mut buf).map_err(|e| e.to_string())?;
            outputs.push(((jobs, level), buf));
        }
    }
    for ((jobs, level), bytes) in &outputs[2..] {
        let reference = &outputs[if *level == Level::Graph { 0 } else { 1 }].1;
        ensure(bytes == reference, || {
            format!("jobs={jobs} at {level} level differs from jobs=1")
        })?;
    }
    Ok(format!(
        "graph CSV {} bytes, node CSV {} bytes, identical for jobs 1, 4, 8",
        outputs[0].1.len(),
        outputs[1].1.len()
    ))
}

fn timed_batch(params: &[LinearCombination], level: Level, hosts: &[HostGraph]) -> Duration {
    let plan = BatchPlan::new(params, level, false, CountOptions::default()).unwrap();
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get().min(8));
    let start = Instant::now();
    for row in batch_evaluate(&plan, hosts.iter().cloned(), jobs).unwrap() {
        row.unwrap();
    }
    start.elapsed()
}

fn performance() -> Outcome {
    let budget = Duration::from_secs(30 * 60);
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let hosts: Vec<HostGraph> = (0..12_000).map(|_| host(&gnm(&mut rng, 23, 50))).collect();

    let c8 = anchored_spasm_of(&anchored(Graph::cycle(8), 0)).unwrap();
    let node = timed_batch(&[c8], Level::Node, &hosts);
    let omega: Vec<_> = enumerate_connected_graphs(1, 5)
        .unwrap()
        .into_iter()
        .map(|g| LinearCombination::hom(&Pattern::Plain(g)))
        .collect();
    let graph = timed_batch(&omega, Level::Graph, &hosts);
    let text = format!(
        "12000 hosts on {cores} core(s): node-level anchored C8 {:.1}s, graph-level connected <= 5 {:.1}s (budget 1800s each)",
        node.as_secs_f64(),
        graph.as_secs_f64()
    );
    if node <= budget && graph <= budget {
        Ok(text)
    } else {
        Err(text)
    }
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "basis sizes", basis_sizes),
        (2, "C5 coefficients", c5_coefficients),
        (3, "anchored C4 basis", anchored_c4),
        (
            4,
            "treewidth 2 across spasms of C7 and C8",
            spasm_treewidths,
        ),
        (5, "oracle equivalence", oracle_suite),
        (6, "Lovasz identities", lovasz_identities),
        (7, "node sums equal graph counts", node_sum_identity),
        (8, "star counterexample", star_counterexample),
        (9, "spasm closure", spasm_closure),
        (10, "determinism across job counts", determinism),
        (11, "performance (soft)", performance),
    ];
    let mut unexpected = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                let known = UNATTAINABLE.iter().find(|(k, _)| *k == id);
                let soft = id == 11;
                let tag = match (known, soft) {
                    (Some(_), _) => "FAIL (unattainable)",
                    (None, true) => "FAIL (soft)",
                    (None, false) => {
                        unexpected += 1;
                        "FAIL"
                    }
                };
                println!("criterion {id:>2} {tag} {name} [{secs:.1}s]: {detail}");
                if let Some((_, why)) = known {
                    println!("             reason: {why}");
                }
            }
        }
    }
    println!(
        "criterion 12 NOT REPRODUCIBLE model accuracy figures: training is out of scope; \
         criteria 1-11 cover the preprocessing those experiments consumed"
    );
    if unexpected > 0 {
        println!("{unexpected} criterion(s) failed");
        std::process::exit(1);
    }
}
