//! Command-line frontend.
//!
//! Exit codes: 0 success, 1 global failure (including oracle mismatches),
//! 2 usage or parse error, 3 size or resource limit.

mod check;
mod config;
mod patterns;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

pub use check::{
    instance_family, run_check, CheckConfig, CheckReport, DefaultEngine, Engine, Mismatch,
};
pub use config::{RunArgs, RunConfig, CACHE_DIR_ENV};
pub use patterns::{expand_spec, expand_specs, parse_param_spec, ExpandOptions, ParamSpec};

use crate::decomp::treewidth_exact;
use crate::error::{Error, Result};
use crate::features::{compute_features, encode, load_dataset, EncodingSpec, FeatureConfig};
use crate::graph::{enumerate_connected_graphs, enumerate_graphs, parse_pattern, Pattern};
use crate::spasm::{
    anchored_spasm_of, filter_min_treewidth, indsub_expansion, inj_expansion, spasm_of,
    LinearCombination,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "homspasm",
    version,
    about = "Homomorphism bases and exact homomorphism-count features"
)]
pub struct Cli {
    /// Print machine-readable JSON on standard output.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the homomorphism basis of a pattern with exact coefficients.
    Spasm(SpasmArgs),
    /// Count basis graphs on a dataset and write the raw count matrix.
    Count(RunArgs),
    /// Like `count`, then apply an encoding.
    Features(RunArgs),
    /// Compare the engine with brute force on small instances.
    Check(CheckArgs),
    /// Exact treewidth of one or more patterns.
    Treewidth(TreewidthArgs),
    /// List graphs up to isomorphism in graph6.
    Enumerate(EnumerateArgs),
}

#[derive(Args, Debug)]
pub struct SpasmArgs {
    /// Pattern name (C5, P4@1, K4, S3) or graph6, optional `@anchor`.
    #[arg(long)]
    pub pattern: String,
    /// Node-level basis; anchors at vertex 0 unless the pattern names one.
    #[arg(long)]
    pub anchored: bool,
    /// sub, inj or indsub.
    #[arg(long, default_value = "sub")]
    pub kind: String,
    /// Keep only basis graphs of treewidth greater than this.
    #[arg(long)]
    pub min_treewidth: Option<i64>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long, default_value_t = 5)]
    pub max_pattern: usize,
    /// Every host up to this many vertices is checked against every pattern.
    #[arg(long, default_value_t = 4)]
    pub exhaustive_host: usize,
    /// Largest host in the random sample.
    #[arg(long, default_value_t = 6)]
    pub max_host: usize,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct TreewidthArgs {
    /// Patterns; `-` reads one per line from standard input.
    #[arg(long = "pattern", required = true, num_args = 1..)]
    pub patterns: Vec<String>,
    /// Also print the decomposition.
    #[arg(long)]
    pub decomposition: bool,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long, default_value_t = 1)]
    pub min: usize,
    #[arg(long)]
    pub max: usize,
    #[arg(long)]
    pub connected: bool,
}

/// Maps a library error to the documented exit code.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_resource_limit() {
        return EXIT_LIMIT;
    }
    match e {
        Error::Graph6 { .. }
        | Error::UnknownPattern(_)
        | Error::AnchorOutOfRange { .. }
        | Error::Config(_)
        | Error::Dataset { .. }
        | Error::DuplicateId(_)
        | Error::BasisMismatch { .. }
        | Error::InvalidGraph(_)
        | Error::Json(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_engine(args, out, err, &DefaultEngine::default())
}

/// As [`run`], with a replaceable engine for `check`.
pub fn run_with_engine<I, T>(
    args: I,
    out: &mut dyn Write,
    err: &mut dyn Write,
    engine: &dyn Engine,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, out, err, engine) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(
    cli: &Cli,
    out: &mut dyn Write,
    err: &mut dyn Write,
    engine: &dyn Engine,
) -> Result<i32> {
    match &cli.command {
        Command::Spasm(a) => cmd_spasm(a, cli.json, out),
        Command::Count(a) => cmd_features(&RunConfig::resolve(a, false)?, cli.json, out, err),
        Command::Features(a) => cmd_features(&RunConfig::resolve(a, true)?, cli.json, out, err),
        Command::Check(a) => cmd_check(a, cli.json, out, engine),
        Command::Treewidth(a) => cmd_treewidth(a, cli.json, out),
        Command::Enumerate(a) => cmd_enumerate(a, cli.json, out),
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

/// Basis of `kind` for `pattern`.
pub fn basis_for(pattern: &Pattern, kind: &str) -> Result<LinearCombination> {
    match (kind, pattern) {
        ("sub", Pattern::Plain(g)) => spasm_of(g),
        ("sub", Pattern::Anchored(a)) => anchored_spasm_of(a),
        ("inj", p) => inj_expansion(p),
        ("indsub", Pattern::Plain(g)) => indsub_expansion(g),
        ("indsub", Pattern::Anchored(_)) => {
            Err(Error::Config("induced counts are graph-level only".into()))
        }
        (other, _) => Err(Error::Config(format!("unknown basis kind {other:?}"))),
    }
}

fn cmd_spasm(a: &SpasmArgs, as_json: bool, out: &mut dyn Write) -> Result<i32> {
    let mut pattern = parse_pattern(&a.pattern)?;
    if a.anchored {
        if let Pattern::Plain(g) = pattern {
            pattern = Pattern::Anchored(crate::graph::AnchoredGraph::new(g, 0)?);
        }
    }
    let mut basis = basis_for(&pattern, &a.kind)?;
    if let Some(k) = a.min_treewidth {
        basis = filter_min_treewidth(&basis, k)?;
    }
    let mut rows = Vec::with_capacity(basis.len());
    for t in basis.terms() {
        let (tw, _) = treewidth_exact(t.graph())?;
        rows.push((t, tw));
    }
    if as_json {
        let terms: Vec<_> = rows
            .iter()
            .map(|(t, tw)| {
                json!({
                    "graph6": t.key().graph6,
                    "anchor": t.anchor(),
                    "vertices": t.graph().vertex_count(),
                    "edges": t.graph().edge_count(),
                    "treewidth": tw,
                    "coefficient": t.coefficient().to_string(),
                })
            })
            .collect();
        let doc = json!({
            "pattern": a.pattern,
            "kind": a.kind,
            "level": basis.level(),
            "size": basis.len(),
            "terms": terms,
        });
        writeln!(out, "{doc}").map_err(io_err)?;
        return Ok(EXIT_OK);
    }
    writeln!(
        out,
        "{} basis of {}: {} terms",
        a.kind,
        a.pattern,
        basis.len()
    )
    .map_err(io_err)?;
    writeln!(
        out,
        "{:<14} {:>8} {:>6} {:>9}  coefficient",
        "graph6", "vertices", "edges", "treewidth"
    )
    .map_err(io_err)?;
    for (t, tw) in rows {
        writeln!(
            out,
            "{:<14} {:>8} {:>6} {:>9}  {}",
            t.key().to_string(),
            t.graph().vertex_count(),
            t.graph().edge_count(),
            tw,
            t.coefficient()
        )
        .map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn cmd_features(
    cfg: &RunConfig,
    as_json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let started = Instant::now();
    let cache = cfg.cache_dir.as_ref().map(crate::features::BasisCache::new);
    let opts = ExpandOptions {
        include_singleton: cfg.include_singleton,
        min_treewidth: cfg.min_treewidth,
        cache: cache.as_ref(),
    };
    let params = expand_specs(&cfg.patterns, &opts)?;
    let ds = load_dataset(&cfg.dataset, cfg.format)?;
    let fc = FeatureConfig {
        level: cfg.level,
        include_derived: cfg.include_derived,
        auto_anchor: cfg.auto_anchor,
        jobs: cfg.jobs,
        count_options: crate::homcount::CountOptions {
            allow_wide: cfg.allow_wide,
        },
    };
    let raw = compute_features(&ds, &params, &fc)?;
    let m = match cfg.encoding {
        EncodingSpec::Raw => raw,
        spec => encode(&raw, spec)?,
    };
    match &cfg.output {
        Some(path) => cfg.output_format.write_file(&m, path)?,
        None => cfg.output_format.write(&m, &mut *out)?,
    }
    let elapsed = started.elapsed().as_secs_f64();
    for f in &m.failures {
        writeln!(err, "failed {}: {}", f.graph_id, f.message).map_err(io_err)?;
    }
    let summary = json!({
        "graphs": ds.len(),
        "rows": m.row_count(),
        "columns": m.column_count(),
        "failures": m.failures.len(),
        "seconds": elapsed,
        "output": cfg.output.as_ref().map(|p| p.display().to_string()),
    });
    // The matrix goes to stdout when there is no output file, so the
    // summary moves to stderr.
    let sink: &mut dyn Write = if cfg.output.is_some() { out } else { err };
    if as_json {
        writeln!(sink, "{summary}").map_err(io_err)?;
    } else {
        writeln!(
            sink,
            "{} rows, {} columns, {} failed graphs, {:.2}s",
            m.row_count(),
            m.column_count(),
            m.failures.len(),
            elapsed
        )
        .map_err(io_err)?;
    }
    if !ds.is_empty() && m.failures.len() == ds.len() {
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}

fn cmd_check(
    a: &CheckArgs,
    as_json: bool,
    out: &mut dyn Write,
    engine: &dyn Engine,
) -> Result<i32> {
    let cfg = CheckConfig {
        max_pattern: a.max_pattern,
        exhaustive_host: a.exhaustive_host,
        max_host: a.max_host,
        samples: a.samples,
        seed: a.seed,
    };
    let report = run_check(engine, &cfg)?;
    if as_json {
        writeln!(out, "{}", serde_json::to_string(&report)?).map_err(io_err)?;
    } else {
        writeln!(
            out,
            "{} instances, {} comparisons, {} passed, {} mismatches",
            report.pairs,
            report.comparisons,
            report.passed,
            report.mismatches.len()
        )
        .map_err(io_err)?;
        if let Some(first) = report.mismatches.first() {
            writeln!(out, "{first}").map_err(io_err)?;
            writeln!(
                out,
                "reproduce: pattern {} host {}",
                first.pattern, first.host
            )
            .map_err(io_err)?;
        }
    }
    Ok(if report.ok() { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_treewidth(a: &TreewidthArgs, as_json: bool, out: &mut dyn Write) -> Result<i32> {
    let mut texts = Vec::new();
    for p in &a.patterns {
        if p == "-" {
            for line in std::io::stdin().lines() {
                let line = line.map_err(|e| Error::io("<stdin>", e))?;
                if !line.trim().is_empty() {
                    texts.push(line.trim().to_string());
                }
            }
        } else {
            texts.push(p.clone());
        }
    }
    let mut docs = Vec::new();
    for text in &texts {
        let pattern = parse_pattern(text)?;
        let (w, td) = treewidth_exact(pattern.graph())?;
        if as_json {
            let mut doc = json!({"pattern": text, "treewidth": w});
            if a.decomposition {
                doc["decomposition"] = td.to_json();
            }
            docs.push(doc);
        } else {
            writeln!(out, "{text}\t{w}").map_err(io_err)?;
            if a.decomposition {
                writeln!(out, "{}", td.to_json()).map_err(io_err)?;
            }
        }
    }
    if as_json {
        writeln!(out, "{}", serde_json::Value::Array(docs)).map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn cmd_enumerate(a: &EnumerateArgs, as_json: bool, out: &mut dyn Write) -> Result<i32> {
    let graphs = if a.connected {
        enumerate_connected_graphs(a.min, a.max)?
    } else {
        let mut all = Vec::new();
        for n in a.min..=a.max {
            all.extend(enumerate_graphs(n)?);
        }
        all
    };
    let lines: Vec<String> = graphs.iter().map(ToString::to_string).collect();
    if as_json {
        writeln!(out, "{}", serde_json::to_string(&lines)?).map_err(io_err)?;
    } else {
        for l in lines {
            writeln!(out, "{l}").map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}

/// Entry point for the binary.
pub fn main_from_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    code
}
