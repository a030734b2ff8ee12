//! Plain-text graph files.
//!
//! A graph named `data/g` consists of
//!
//! * `data/g.edges`: one edge per line, `u v` separated by whitespace, 0-based;
//! * `data/g.attrs.csv`: one row of comma-separated reals per node;
//! * `data/g.labels` (optional): one `0`/`1` per line, `1` = anomaly;
//! * `data/g.types` (optional): one of `normal`, `structural`, `contextual`
//!   per line.
//!
//! Blank lines and lines starting with `#` are ignored in every file.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;

use super::{Adjacency, AnomalyKind, AttributedGraph};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFiles {
    pub edges: PathBuf,
    pub attributes: PathBuf,
    pub labels: Option<PathBuf>,
    pub kinds: Option<PathBuf>,
}

impl GraphFiles {
    /// Paths for `prefix`; the optional files are included only if they exist.
    pub fn from_prefix(prefix: impl AsRef<Path>) -> Self {
        let files = Self::all_for_prefix(prefix);
        Self {
            labels: files.labels.filter(|p| p.exists()),
            kinds: files.kinds.filter(|p| p.exists()),
            ..files
        }
    }

    /// All four paths for `prefix`, whether or not they exist.
    pub fn all_for_prefix(prefix: impl AsRef<Path>) -> Self {
        let with = |suffix: &str| {
            let mut s = prefix.as_ref().as_os_str().to_owned();
            s.push(suffix);
            PathBuf::from(s)
        };
        Self {
            edges: with(".edges"),
            attributes: with(".attrs.csv"),
            labels: Some(with(".labels")),
            kinds: Some(with(".types")),
        }
    }
}

/// What load-time cleanup did to the raw input.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LoadReport {
    pub self_loops_dropped: usize,
    /// Lines repeating an edge already seen (in either direction).
    pub duplicate_edges: usize,
    /// Old node ids that had no incident edge and were removed.
    pub removed_nodes: Vec<usize>,
    /// New id of every old node (`None` if removed).
    pub remap: Vec<Option<usize>>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_attributes(path: &Path) -> Result<Array2<f64>> {
    let text = read(path)?;
    let mut values = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for (line, content) in content_lines(&text) {
        let mut count = 0;
        for field in content.split(',') {
            let field = field.trim();
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                path: path.into(),
                line,
                what: "attribute value",
                text: field.into(),
            })?;
            values.push(v);
            count += 1;
        }
        match width {
            None => width = Some(count),
            Some(w) if w != count => {
                return Err(Error::RaggedAttributes {
                    path: path.into(),
                    line,
                    expected: w,
                    found: count,
                })
            }
            Some(_) => {}
        }
        rows += 1;
    }
    Array2::from_shape_vec((rows, width.unwrap_or(0)), values)
        .map_err(|e| Error::Shape(e.to_string()))
}

fn parse_edges(path: &Path, num_nodes: usize, report: &mut LoadReport) -> Result<Vec<(usize, usize)>> {
    let text = read(path)?;
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for (line, content) in content_lines(&text) {
        let mut fields = content.split_whitespace();
        let mut endpoint = || -> Result<usize> {
            let field = fields.next().unwrap_or("");
            let node: usize = field.parse().map_err(|_| Error::Parse {
                path: path.into(),
                line,
                what: "edge endpoint",
                text: content.into(),
            })?;
            if node >= num_nodes {
                return Err(Error::EndpointOutOfRange {
                    path: path.into(),
                    line,
                    node,
                    num_nodes,
                });
            }
            Ok(node)
        };
        let u = endpoint()?;
        let v = endpoint()?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                path: path.into(),
                line,
                what: "edge (expected two ids)",
                text: content.into(),
            });
        }
        if u == v {
            report.self_loops_dropped += 1;
            continue;
        }
        if !seen.insert((u.min(v), u.max(v))) {
            report.duplicate_edges += 1;
            continue;
        }
        edges.push((u, v));
    }
    Ok(edges)
}

fn parse_per_node<T>(
    path: &Path,
    num_nodes: usize,
    what: &'static str,
    parse: impl Fn(&str) -> Option<T>,
) -> Result<Vec<T>> {
    let text = read(path)?;
    let mut out = Vec::with_capacity(num_nodes);
    for (line, content) in content_lines(&text) {
        out.push(parse(content).ok_or_else(|| Error::Parse {
            path: path.into(),
            line,
            what,
            text: content.into(),
        })?);
    }
    if out.len() != num_nodes {
        return Err(Error::RowCount {
            path: path.into(),
            expected: num_nodes,
            found: out.len(),
        });
    }
    Ok(out)
}

fn parse_kind(s: &str) -> Option<Option<AnomalyKind>> {
    match s {
        "normal" => Some(None),
        "structural" => Some(Some(AnomalyKind::Structural)),
        "contextual" => Some(Some(AnomalyKind::Contextual)),
        _ => None,
    }
}

/// Loads a graph, symmetrizing edges, dropping self-loops and duplicates and
/// removing isolated nodes. The node count comes from the attribute file.
pub fn load_graph(files: &GraphFiles) -> Result<(AttributedGraph, LoadReport)> {
    let attributes = parse_attributes(&files.attributes)?;
    let n = attributes.nrows();
    let mut report = LoadReport::default();
    let edges = parse_edges(&files.edges, n, &mut report)?;
    let mut graph = AttributedGraph::new(attributes, Adjacency::from_edges(n, edges))?;
    if let Some(path) = &files.labels {
        let labels = parse_per_node(path, n, "label (expected 0 or 1)", |s| match s {
            "0" => Some(false),
            "1" => Some(true),
            _ => None,
        })?;
        graph = graph.with_labels(labels)?;
    }
    if let Some(path) = &files.kinds {
        let kinds = parse_per_node(path, n, "anomaly type", parse_kind)?;
        if graph.labels().is_none() {
            let labels = kinds.iter().map(Option::is_some).collect();
            graph = graph.with_labels(labels)?;
        }
        graph = graph.with_kinds(kinds)?;
    }
    let (graph, remap) = graph.remove_isolated();
    report.removed_nodes = (0..n).filter(|&i| remap[i].is_none()).collect();
    report.remap = remap;
    Ok((graph, report))
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_edge_list(adj: &Adjacency, path: impl AsRef<Path>) -> Result<()> {
    let mut text = String::with_capacity(adj.num_edges() * 12);
    for (i, j) in adj.edges() {
        writeln!(text, "{i} {j}").unwrap();
    }
    write(path.as_ref(), &text)
}

/// Writes every file `g` has data for. Output is a deterministic function of
/// the graph.
pub fn save_graph(g: &AttributedGraph, prefix: impl AsRef<Path>) -> Result<GraphFiles> {
    let files = GraphFiles::all_for_prefix(prefix);
    write_edge_list(g.adjacency(), &files.edges)?;

    let mut text = String::new();
    for row in g.attributes().rows() {
        for (c, v) in row.iter().enumerate() {
            if c > 0 {
                text.push(',');
            }
            write!(text, "{v}").unwrap();
        }
        text.push('\n');
    }
    write(&files.attributes, &text)?;

    let labels = match g.labels() {
        Some(labels) => {
            let text: String = labels
                .iter()
                .map(|&l| if l { "1\n" } else { "0\n" })
                .collect();
            let path = files.labels.clone().unwrap();
            write(&path, &text)?;
            Some(path)
        }
        None => None,
    };
    let kinds = match g.kinds() {
        Some(kinds) => {
            let mut text = String::new();
            for k in kinds {
                text.push_str(k.map_or("normal", AnomalyKind::as_str));
                text.push('\n');
            }
            let path = files.kinds.clone().unwrap();
            write(&path, &text)?;
            Some(path)
        }
        None => None,
    };
    Ok(GraphFiles {
        labels,
        kinds,
        ..files
    })
}
