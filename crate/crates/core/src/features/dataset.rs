use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::homcount::HostGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DatasetFormat {
    /// One `{"id", "num_nodes", "edges"}` object per line.
    Jsonl,
    /// A directory of `<id>.edges` files, read in file-name order.
    EdgelistDir,
    /// One edge-list file holding a single graph named after the file stem.
    SingleEdgelist,
}

impl FromStr for DatasetFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(DatasetFormat::Jsonl),
            "edgelist-dir" | "edgelist_dir" => Ok(DatasetFormat::EdgelistDir),
            "edgelist" | "single-edgelist" | "single_edgelist" => Ok(DatasetFormat::SingleEdgelist),
            other => Err(Error::Config(format!("unknown dataset format {other:?}"))),
        }
    }
}

/// Named host graphs in source order.
#[derive(Clone, Debug)]
pub struct Dataset {
    source: String,
    graphs: Vec<(String, HostGraph)>,
}

impl Dataset {
    pub fn new(source: impl Into<String>, graphs: Vec<(String, HostGraph)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (id, _) in &graphs {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        Ok(Dataset {
            source: source.into(),
            graphs,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn graphs(&self) -> &[(String, HostGraph)] {
        &self.graphs
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.graphs.iter().map(|(id, _)| id.as_str())
    }
}

pub fn load_dataset(path: &Path, format: DatasetFormat) -> Result<Dataset> {
    let source = path.display().to_string();
    let graphs = match format {
        DatasetFormat::Jsonl => parse_jsonl(&source, &read(path)?)?,
        DatasetFormat::SingleEdgelist => {
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| source.clone());
            vec![(id, parse_edgelist(&source, &read(path)?)?)]
        }
        DatasetFormat::EdgelistDir => {
            let mut files: Vec<PathBuf> = fs::read_dir(path)
                .map_err(|e| Error::io(path, e))?
                .map(|entry| entry.map(|e| e.path()).map_err(|e| Error::io(path, e)))
                .collect::<Result<Vec<_>>>()?;
            files.retain(|p| p.extension().is_some_and(|e| e == "edges") && p.is_file());
            files.sort();
            let mut graphs = Vec::with_capacity(files.len());
            for f in files {
                let id = f
                    .file_stem()
                    .expect("filtered by extension")
                    .to_string_lossy()
                    .into_owned();
                graphs.push((id, parse_edgelist(&f.display().to_string(), &read(&f)?)?));
            }
            graphs
        }
    };
    Dataset::new(source, graphs)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn bad(source: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Dataset {
        source_name: source.to_string(),
        line,
        message: message.into(),
    }
}

/// Validates one edge against the vertex count and earlier edges.
fn admit(
    seen: &mut HashSet<(usize, usize)>,
    n: usize,
    u: usize,
    v: usize,
) -> std::result::Result<(), String> {
    if u >= n || v >= n {
        return Err(format!("edge ({u},{v}) references a vertex outside 0..{n}"));
    }
    if u == v {
        return Err(format!("self-loop at vertex {u}"));
    }
    if !seen.insert((u.min(v), u.max(v))) {
        return Err(format!("duplicate edge ({u},{v})"));
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGraph {
    id: String,
    num_nodes: usize,
    edges: Vec<[usize; 2]>,
}

pub fn parse_jsonl(source: &str, text: &str) -> Result<Vec<(String, HostGraph)>> {
    let mut graphs = Vec::new();
    let mut ids = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let g: JsonGraph =
            serde_json::from_str(line).map_err(|e| bad(source, lineno, e.to_string()))?;
        let mut seen = HashSet::new();
        let mut edges = Vec::with_capacity(g.edges.len());
        for [u, v] in g.edges {
            admit(&mut seen, g.num_nodes, u, v).map_err(|m| bad(source, lineno, m))?;
            edges.push((u, v));
        }
        if !ids.insert(g.id.clone()) {
            return Err(bad(
                source,
                lineno,
                format!("duplicate graph id {:?}", g.id),
            ));
        }
        let host =
            HostGraph::new(g.num_nodes, &edges).map_err(|e| bad(source, lineno, e.to_string()))?;
        graphs.push((g.id, host));
    }
    Ok(graphs)
}

/// Whitespace-separated `u v` lines; `#` starts a comment. The vertex count
/// is one more than the largest vertex named.
pub fn parse_edgelist(source: &str, text: &str) -> Result<HostGraph> {
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = fields[..] else {
            return Err(bad(
                source,
                lineno,
                format!("expected two vertex ids, found {:?}", line),
            ));
        };
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| bad(source, lineno, format!("invalid vertex id {s:?}")))
        };
        let (u, v) = (parse(a)?, parse(b)?);
        admit(&mut seen, usize::MAX, u, v).map_err(|m| bad(source, lineno, m))?;
        edges.push((u, v));
    }
    let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    HostGraph::new(n, &edges).map_err(|e| bad(source, 0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn jsonl_path() {
        let gs = parse_jsonl(
            "t",
            "{\"id\":\"g0\",\"num_nodes\":3,\"edges\":[[0,1],[1,2]]}\n",
        )
        .unwrap();
        assert_eq!(gs[0].0, "g0");
        assert_eq!(gs[0].1.to_graph(), Graph::path(3));
    }

    #[test]
    fn edgelist_triangle() {
        let h = parse_edgelist("t", "# a triangle\n0 1\n1 2\n\n2 0 # closing edge\n").unwrap();
        assert_eq!(h.to_graph(), Graph::complete(3));
    }

    #[test]
    fn errors_name_the_line() {
        let text = "{\"id\":\"a\",\"num_nodes\":2,\"edges\":[[0,1]]}\n{\"id\":\"b\",\"num_nodes\":2,\"edges\":[[0,2]]}\n";
        let err = parse_jsonl("data.jsonl", text).unwrap_err();
        assert!(err.to_string().starts_with("data.jsonl:2:"), "{err}");
        let err = parse_edgelist("x.edges", "0 1\n1 1\n").unwrap_err();
        assert!(err.to_string().starts_with("x.edges:2:"), "{err}");
        let err = parse_edgelist("x.edges", "0 1\n1 0\n").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
        assert!(parse_edgelist("x.edges", "0 1 2\n").is_err());
        let dup = "{\"id\":\"a\",\"num_nodes\":1,\"edges\":[]}\n{\"id\":\"a\",\"num_nodes\":1,\"edges\":[]}\n";
        assert!(parse_jsonl("d", dup).is_err());
    }

    #[test]
    fn directory_mode_sorts_by_name() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("b.edges"), "0 1\n").unwrap();
        fs::write(dir.path().join("a.edges"), "0 1\n1 2\n").unwrap();
        fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
        let ds = load_dataset(dir.path(), DatasetFormat::EdgelistDir).unwrap();
        assert_eq!(ds.ids().collect::<Vec<_>>(), ["a", "b"]);
    }
}
