use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::features::{DatasetFormat, EncodingSpec, ExportFormat};
use crate::spasm::Level;

/// Default cache directory when neither `--cache-dir` nor the config file
/// sets one.
pub const CACHE_DIR_ENV: &str = "HOMSPASM_CACHE_DIR";

/// Flags of `count` and `features`. Every field can also come from the JSON
/// file given by `--config` (same names, snake_case); flags win.
#[derive(Args, Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunArgs {
    /// JSON config file.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Comma-separated: omega-con-<k>, graphlets-<k>, hom:P, sub:P, inj:P,
    /// indsub:P, or a bare pattern (sub).
    #[arg(long, value_delimiter = ',')]
    pub patterns: Vec<String>,
    /// Dataset path.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// jsonl, edgelist-dir or edgelist (inferred when omitted).
    #[arg(long)]
    pub format: Option<String>,
    /// graph or node.
    #[arg(long)]
    pub level: Option<String>,
    /// At node level, anchor graph-level bases at canonical vertex 0.
    #[arg(long)]
    pub auto_anchor: bool,
    /// Append one column per parameter with its evaluated value.
    #[arg(long)]
    pub derived: bool,
    /// Include the single-vertex graph in omega-con-<k>.
    #[arg(long)]
    pub include_singleton: bool,
    /// Keep only basis graphs of treewidth greater than this.
    #[arg(long)]
    pub min_treewidth: Option<i64>,
    /// raw, log1p, zscore or sinusoidal:<dim> (features only).
    #[arg(long)]
    pub encoding: Option<String>,
    /// Worker threads for counting (default 1).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// csv or jsonl (inferred from the output extension when omitted).
    #[arg(long)]
    pub output_format: Option<String>,
    /// Basis cache directory (default: $HOMSPASM_CACHE_DIR, else no cache).
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Run plans wider than the guard allows on very large hosts.
    #[arg(long)]
    pub allow_wide: bool,
}

/// Fully resolved settings for a counting run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub patterns: Vec<String>,
    pub dataset: PathBuf,
    pub format: DatasetFormat,
    pub level: Level,
    pub auto_anchor: bool,
    pub include_derived: bool,
    pub include_singleton: bool,
    pub min_treewidth: Option<i64>,
    pub encoding: EncodingSpec,
    pub jobs: usize,
    pub output: Option<PathBuf>,
    pub output_format: ExportFormat,
    pub cache_dir: Option<PathBuf>,
    pub allow_wide: bool,
}

fn infer_format(path: &Path) -> DatasetFormat {
    if path.is_dir() {
        DatasetFormat::EdgelistDir
    } else if path
        .extension()
        .is_some_and(|e| e == "jsonl" || e == "json")
    {
        DatasetFormat::Jsonl
    } else {
        DatasetFormat::SingleEdgelist
    }
}

impl RunArgs {
    /// Flag values where given, file values otherwise.
    fn overlay(self, file: RunArgs) -> RunArgs {
        RunArgs {
            config: self.config,
            patterns: if self.patterns.is_empty() {
                file.patterns
            } else {
                self.patterns
            },
            dataset: self.dataset.or(file.dataset),
            format: self.format.or(file.format),
            level: self.level.or(file.level),
            auto_anchor: self.auto_anchor || file.auto_anchor,
            derived: self.derived || file.derived,
            include_singleton: self.include_singleton || file.include_singleton,
            min_treewidth: self.min_treewidth.or(file.min_treewidth),
            encoding: self.encoding.or(file.encoding),
            jobs: self.jobs.or(file.jobs),
            output: self.output.or(file.output),
            output_format: self.output_format.or(file.output_format),
            cache_dir: self.cache_dir.or(file.cache_dir),
            allow_wide: self.allow_wide || file.allow_wide,
        }
    }
}

impl RunConfig {
    /// Merges flags over the config file over the environment, then checks
    /// consistency. `encodings` is false for `count`, which always writes
    /// raw counts.
    pub fn resolve(args: &RunArgs, encodings: bool) -> Result<Self> {
        let merged = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                let file: RunArgs = serde_json::from_str(&text)?;
                args.clone().overlay(file)
            }
            None => args.clone(),
        };
        if merged.patterns.is_empty() {
            return Err(Error::Config("no patterns given".into()));
        }
        let dataset = merged
            .dataset
            .ok_or_else(|| Error::Config("no dataset given".into()))?;
        let format = match &merged.format {
            Some(f) => f.parse()?,
            None => infer_format(&dataset),
        };
        let level = match merged.level.as_deref() {
            None | Some("graph") => Level::Graph,
            Some("node") => Level::Node,
            Some(other) => return Err(Error::Config(format!("unknown level {other:?}"))),
        };
        let encoding = match (&merged.encoding, encodings) {
            (None, _) => EncodingSpec::Raw,
            (Some(e), true) => e.parse()?,
            (Some(_), false) => {
                return Err(Error::Config(
                    "count writes raw counts; use features to encode".into(),
                ))
            }
        };
        if let EncodingSpec::Sinusoidal { pe_dim } = encoding {
            if pe_dim == 0 || pe_dim % 2 != 0 {
                return Err(Error::Config(format!(
                    "pe_dim must be a positive even number, got {pe_dim}"
                )));
            }
        }
        let jobs = merged.jobs.unwrap_or(1);
        if jobs == 0 {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        let output_format = match (&merged.output_format, &merged.output) {
            (Some(f), _) => f.parse()?,
            (None, Some(p)) => ExportFormat::from_path(p),
            (None, None) => ExportFormat::Csv,
        };
        let cache_dir = merged
            .cache_dir
            .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from));
        Ok(RunConfig {
            patterns: merged.patterns,
            dataset,
            format,
            level,
            auto_anchor: merged.auto_anchor,
            include_derived: merged.derived,
            include_singleton: merged.include_singleton,
            min_treewidth: merged.min_treewidth,
            encoding,
            jobs,
            output: merged.output,
            output_format,
            cache_dir,
            allow_wide: merged.allow_wide,
        })
    }
}
