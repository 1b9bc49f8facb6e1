//! Feature matrices built from homomorphism counts over a dataset.
//!
//! Columns are the deduplicated basis graphs of all requested parameters in
//! term order, optionally followed by one derived column per parameter
//! holding its evaluated value. Rows are graphs, or `graph_id:vertex` pairs
//! at node level.

mod cache;
mod dataset;
mod encode;
mod export;

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::graph::CanonicalKey;
use crate::homcount::{batch_evaluate, BatchPlan, CountOptions, HostRow};
use crate::spasm::{Level, LinearCombination, Rational};

pub use cache::BasisCache;
pub use dataset::{load_dataset, parse_edgelist, parse_jsonl, Dataset, DatasetFormat};
pub use encode::{encode, EncodingSpec};
pub use export::{read_csv, write_csv, write_jsonl, ExportFormat};

/// A parameter to featurize: a Hom-basis combination and a label for its
/// derived column.
#[derive(Clone, Debug)]
pub struct Parameter {
    pub name: String,
    pub combination: LinearCombination,
}

impl Parameter {
    pub fn new(name: impl Into<String>, combination: LinearCombination) -> Self {
        Parameter {
            name: name.into(),
            combination,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColumnSource {
    /// Homomorphism counts of one basis graph.
    Hom(CanonicalKey),
    /// Evaluated value of the named parameter.
    Derived(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnDescriptor {
    pub source: ColumnSource,
    /// Names of the parameters whose basis contains this graph.
    pub provenance: Vec<String>,
    /// Set by encodings that expand a column into several.
    pub component: Option<String>,
}

impl ColumnDescriptor {
    /// Header text: `hom:<key>` or `value:<name>`, with `#<component>`
    /// appended for expanded encodings.
    pub fn name(&self) -> String {
        let base = match &self.source {
            ColumnSource::Hom(key) => format!("hom:{key}"),
            ColumnSource::Derived(name) => format!("value:{name}"),
        };
        match &self.component {
            Some(c) => format!("{base}#{c}"),
            None => base,
        }
    }

    pub(crate) fn parse(name: &str) -> Result<Self> {
        let encoded = |c: &str| {
            let digits = c.strip_prefix("sin").or_else(|| c.strip_prefix("cos"));
            digits.is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
        };
        let (base, component) = match name.rsplit_once('#') {
            Some((b, c)) if encoded(c) => (b, Some(c.to_string())),
            _ => (name, None),
        };
        let source = if let Some(key) = base.strip_prefix("hom:") {
            ColumnSource::Hom(key.parse()?)
        } else if let Some(n) = base.strip_prefix("value:") {
            ColumnSource::Derived(n.to_string())
        } else {
            return Err(Error::Encoding(format!(
                "unrecognized column descriptor {name:?}"
            )));
        };
        Ok(ColumnDescriptor {
            source,
            provenance: Vec::new(),
            component,
        })
    }
}

impl fmt::Display for ColumnDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Matrix entries: exact for raw counts, real after encoding.
#[derive(Clone, Debug, PartialEq)]
pub enum Entries {
    Exact(Vec<Vec<Rational>>),
    Real(Vec<Vec<f64>>),
}

/// A graph that could not be featurized; its rows are absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub graph_id: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    pub row_ids: Vec<String>,
    pub columns: Vec<ColumnDescriptor>,
    pub entries: Entries,
    pub failures: Vec<Failure>,
}

impl FeatureMatrix {
    pub fn row_count(&self) -> usize {
        self.row_ids.len()
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name() == name)
    }

    /// Entry as it is written to disk: exact values as decimal integers or
    /// `num/den`, reals in shortest round-trip form.
    pub fn format_entry(&self, row: usize, col: usize) -> String {
        match &self.entries {
            Entries::Exact(rows) => format_rational(&rows[row][col]),
            Entries::Real(rows) => format_real(rows[row][col]),
        }
    }

    /// Entries as doubles (round-to-nearest for exact values).
    pub fn to_real(&self) -> Vec<Vec<f64>> {
        match &self.entries {
            Entries::Exact(rows) => rows
                .iter()
                .map(|r| r.iter().map(rational_to_f64).collect())
                .collect(),
            Entries::Real(rows) => rows.clone(),
        }
    }
}

pub(crate) fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if den == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(num, den))
}

pub(crate) fn format_real(x: f64) -> String {
    if x == 0.0 {
        // normalise -0
        "0".to_string()
    } else {
        format!("{x}")
    }
}

pub(crate) fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(if x.numer() < &BigInt::from(0) {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

#[derive(Clone, Copy, Debug)]
pub struct FeatureConfig {
    pub level: Level,
    /// Append one column per parameter with its evaluated value.
    pub include_derived: bool,
    /// At node level, anchor graph-level parameters at canonical vertex 0.
    pub auto_anchor: bool,
    pub jobs: usize,
    pub count_options: CountOptions,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            level: Level::Graph,
            include_derived: false,
            auto_anchor: false,
            jobs: 1,
            count_options: CountOptions::default(),
        }
    }
}

/// Counts every basis graph of `params` on every graph of `ds`.
///
/// Rows follow dataset order. A graph whose counting fails is listed in
/// `failures` and contributes no rows.
pub fn compute_features(
    ds: &Dataset,
    params: &[Parameter],
    config: &FeatureConfig,
) -> Result<FeatureMatrix> {
    let combos: Vec<LinearCombination> = params.iter().map(|p| p.combination.clone()).collect();
    let plan = BatchPlan::new(
        &combos,
        config.level,
        config.auto_anchor,
        config.count_options,
    )?;

    let mut columns: Vec<ColumnDescriptor> = plan
        .columns()
        .iter()
        .map(|c| ColumnDescriptor {
            source: ColumnSource::Hom(c.key.clone()),
            provenance: Vec::new(),
            component: None,
        })
        .collect();
    for (i, p) in params.iter().enumerate() {
        for &(col, _) in plan.param_terms(i) {
            columns[col].provenance.push(p.name.clone());
        }
    }
    if config.include_derived {
        columns.extend(params.iter().map(|p| ColumnDescriptor {
            source: ColumnSource::Derived(p.name.clone()),
            provenance: vec![p.name.clone()],
            component: None,
        }));
    }

    let hosts = ds.graphs().iter().map(|(_, h)| h.clone());
    let mut row_ids = Vec::new();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut failures = Vec::new();
    let int = |c: &num_bigint::BigUint| Rational::from_integer(BigInt::from(c.clone()));
    for ((id, _), result) in ds
        .graphs()
        .iter()
        .zip(batch_evaluate(&plan, hosts, config.jobs)?)
    {
        match result {
            Err(e) => failures.push(Failure {
                graph_id: id.clone(),
                message: e.to_string(),
            }),
            Ok(HostRow::Graph { counts, derived }) => {
                let mut row: Vec<Rational> = counts.iter().map(int).collect();
                if config.include_derived {
                    row.extend(derived);
                }
                row_ids.push(id.clone());
                rows.push(row);
            }
            Ok(HostRow::Node {
                vertices,
                counts,
                derived,
            }) => {
                for v in 0..vertices {
                    let mut row: Vec<Rational> = counts.iter().map(|col| int(&col[v])).collect();
                    if config.include_derived {
                        row.extend(derived.iter().map(|d| d[v].clone()));
                    }
                    row_ids.push(format!("{id}:{v}"));
                    rows.push(row);
                }
            }
        }
    }
    Ok(FeatureMatrix {
        row_ids,
        columns,
        entries: Entries::Exact(rows),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{named_pattern, Graph};
    use crate::homcount::HostGraph;
    use crate::spasm::{anchored_spasm_of, spasm_of};

    fn single(id: &str, g: &Graph) -> Dataset {
        Dataset::new("test", vec![(id.to_string(), HostGraph::from(g))]).unwrap()
    }

    fn value(m: &FeatureMatrix, row: usize, name: &str) -> String {
        m.format_entry(
            row,
            m.column_index(name)
                .unwrap_or_else(|| panic!("no column {name}")),
        )
    }

    #[test]
    fn c5_on_c5() {
        let params = [Parameter::new(
            "sub:C5",
            spasm_of(&Graph::cycle(5)).unwrap(),
        )];
        let config = FeatureConfig {
            include_derived: true,
            ..FeatureConfig::default()
        };
        let m = compute_features(&single("g", &Graph::cycle(5)), &params, &config).unwrap();
        assert_eq!(m.column_count(), 4);
        let counts: Vec<String> = (0..3).map(|c| m.format_entry(0, c)).collect();
        // term order: K3, paw, C5
        assert_eq!(counts, ["0", "0", "10"]);
        assert_eq!(value(&m, 0, "value:sub:C5"), "1");
        assert_eq!(m.columns[2].provenance, ["sub:C5"]);
    }

    #[test]
    fn k4_on_k5() {
        let params = [Parameter::new("k4", spasm_of(&Graph::complete(4)).unwrap())];
        let config = FeatureConfig {
            include_derived: true,
            ..FeatureConfig::default()
        };
        let m = compute_features(&single("k5", &Graph::complete(5)), &params, &config).unwrap();
        assert_eq!(value(&m, 0, "value:k4"), "5");
    }

    #[test]
    fn node_level_c4() {
        let c4 = named_pattern("C4@0").unwrap().into_anchored().unwrap();
        let params = [Parameter::new("c4", anchored_spasm_of(&c4).unwrap())];
        let config = FeatureConfig {
            level: Level::Node,
            include_derived: true,
            ..FeatureConfig::default()
        };
        let m = compute_features(&single("h", &Graph::cycle(4)), &params, &config).unwrap();
        assert_eq!(m.row_ids, ["h:0", "h:1", "h:2", "h:3"]);
        assert_eq!(m.column_count(), 5);
        for r in 0..4 {
            assert_eq!(value(&m, r, "value:c4"), "1");
        }
    }

    #[test]
    fn failures_skip_rows() {
        let params = [Parameter::new("k6", spasm_of(&Graph::complete(6)).unwrap())];
        let ds = Dataset::new(
            "t",
            vec![
                ("big".into(), HostGraph::new(100_001, &[]).unwrap()),
                ("small".into(), HostGraph::from(&Graph::complete(6))),
            ],
        )
        .unwrap();
        let m = compute_features(&ds, &params, &FeatureConfig::default()).unwrap();
        assert_eq!(m.row_ids, ["small"]);
        assert_eq!(m.failures.len(), 1);
        assert_eq!(m.failures[0].graph_id, "big");
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-3", "7/2", "-1/10", "123456789012345678901234567890"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("1.5").is_none());
    }
}
