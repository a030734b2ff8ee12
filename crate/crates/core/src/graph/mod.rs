//! Attributed graphs over a symmetric CSR adjacency.

mod distance;
mod io;
mod sparse;
mod stats;

use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use distance::{edge_distances, EdgeDistanceMap};
pub use io::{load_graph, save_graph, write_edge_list, GraphFiles, LoadReport};
pub use stats::{edge_class_counts, homophily_stats, EdgeClassCounts, HomophilyStats};
pub use sparse::{symmetric_normalize, SparseMatrix};

/// Undirected, unweighted adjacency in compressed row form.
///
/// Each undirected edge `{i, j}` is stored twice (in row `i` and row `j`),
/// column indices within a row are strictly increasing and the diagonal is
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adjacency {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

impl Adjacency {
    pub fn empty(num_nodes: usize) -> Self {
        Self {
            offsets: vec![0; num_nodes + 1],
            neighbors: Vec::new(),
        }
    }

    /// Builds from arbitrary (possibly directed, duplicated or self-looped)
    /// pairs. Pairs are symmetrized, duplicates merged and self-loops dropped.
    ///
    /// Panics if an endpoint is `>= num_nodes`.
    pub fn from_edges<I>(num_nodes: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); num_nodes];
        for (u, v) in edges {
            assert!(u < num_nodes && v < num_nodes, "edge ({u}, {v}) out of range");
            if u == v {
                continue;
            }
            rows[u].push(v);
            rows[v].push(u);
        }
        let mut offsets = Vec::with_capacity(num_nodes + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for mut row in rows {
            row.sort_unstable();
            row.dedup();
            neighbors.extend_from_slice(&row);
            offsets.push(neighbors.len());
        }
        Self { offsets, neighbors }
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// Number of stored (directed) entries, `2 * num_edges()`.
    pub fn num_entries(&self) -> usize {
        self.neighbors.len()
    }

    #[inline]
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    #[inline]
    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.num_nodes()).map(|i| self.degree(i)).collect()
    }

    /// Range of entry slots belonging to `node`'s row.
    #[inline]
    pub fn row_slots(&self, node: usize) -> std::ops::Range<usize> {
        self.offsets[node]..self.offsets[node + 1]
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Slot index of the entry `(u, v)`, if stored.
    pub fn slot(&self, u: usize, v: usize) -> Option<usize> {
        self.neighbors(u)
            .binary_search(&v)
            .ok()
            .map(|p| self.offsets[u] + p)
    }

    /// Undirected edges as `(i, j)` with `i < j`, in row-major order. The
    /// position of an edge in this sequence is its edge id.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.num_nodes()).flat_map(move |i| {
            self.neighbors(i)
                .iter()
                .copied()
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    /// Keeps the undirected edges for which `keep(i, j)` (called with `i < j`)
    /// returns true.
    pub fn retain_edges<F>(&self, mut keep: F) -> Self
    where
        F: FnMut(usize, usize) -> bool,
    {
        let kept: Vec<(usize, usize)> = self.edges().filter(|&(i, j)| keep(i, j)).collect();
        Self::from_edges(self.num_nodes(), kept)
    }

    /// True when every edge of `self` is also an edge of `other`.
    pub fn is_subgraph_of(&self, other: &Adjacency) -> bool {
        self.num_nodes() == other.num_nodes() && self.edges().all(|(i, j)| other.contains(i, j))
    }

    /// Checks the structural invariants (used after deserialization).
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Shape(msg));
        if self.offsets.is_empty() || self.offsets[0] != 0 {
            return bad("adjacency offsets must start at 0".into());
        }
        if *self.offsets.last().unwrap() != self.neighbors.len() {
            return bad("adjacency offsets do not cover the neighbor array".into());
        }
        let n = self.num_nodes();
        for i in 0..n {
            if self.offsets[i] > self.offsets[i + 1] {
                return bad(format!("row {i} has negative length"));
            }
            let row = self.neighbors(i);
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("row {i} is not strictly increasing"));
            }
            for &j in row {
                if j >= n || j == i || !self.contains(j, i) {
                    return bad(format!("entry ({i}, {j}) breaks symmetry or range"));
                }
            }
        }
        Ok(())
    }

    /// Relabels nodes: node `i` becomes `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        Self::from_edges(
            self.num_nodes(),
            self.edges().map(|(i, j)| (perm[i], perm[j])),
        )
    }
}

/// Ground-truth tag for an injected anomaly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnomalyKind {
    Structural,
    Contextual,
}

impl AnomalyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AnomalyKind::Structural => "structural",
            AnomalyKind::Contextual => "contextual",
        }
    }
}

/// Node attributes, adjacency and optional ground truth.
///
/// Labels (`true` = anomaly) and anomaly kinds are carried for injection
/// bookkeeping and evaluation only; no detector reads them.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributedGraph {
    attributes: Array2<f64>,
    adjacency: Adjacency,
    labels: Option<Vec<bool>>,
    kinds: Option<Vec<Option<AnomalyKind>>>,
}

impl AttributedGraph {
    pub fn new(attributes: Array2<f64>, adjacency: Adjacency) -> Result<Self> {
        if attributes.nrows() != adjacency.num_nodes() {
            return Err(Error::Shape(format!(
                "{} attribute rows for {} nodes",
                attributes.nrows(),
                adjacency.num_nodes()
            )));
        }
        Ok(Self {
            attributes,
            adjacency,
            labels: None,
            kinds: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<bool>) -> Result<Self> {
        if labels.len() != self.num_nodes() {
            return Err(Error::LengthMismatch {
                left: labels.len(),
                right: self.num_nodes(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Attaches anomaly kinds; every tagged node must already carry label 1.
    pub fn with_kinds(mut self, kinds: Vec<Option<AnomalyKind>>) -> Result<Self> {
        if kinds.len() != self.num_nodes() {
            return Err(Error::LengthMismatch {
                left: kinds.len(),
                right: self.num_nodes(),
            });
        }
        let labels = self.labels.as_ref().ok_or(Error::MissingLabels)?;
        if let Some(node) = (0..kinds.len()).find(|&i| kinds[i].is_some() && !labels[i]) {
            return Err(Error::Config(format!(
                "node {node} has an anomaly kind but is labeled normal"
            )));
        }
        self.kinds = Some(kinds);
        Ok(self)
    }

    pub fn num_nodes(&self) -> usize {
        self.adjacency.num_nodes()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.num_edges()
    }

    pub fn num_attributes(&self) -> usize {
        self.attributes.ncols()
    }

    pub fn attributes(&self) -> &Array2<f64> {
        &self.attributes
    }

    pub fn attribute_row(&self, node: usize) -> ArrayView1<'_, f64> {
        self.attributes.row(node)
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    pub fn labels(&self) -> Option<&[bool]> {
        self.labels.as_deref()
    }

    pub fn kinds(&self) -> Option<&[Option<AnomalyKind>]> {
        self.kinds.as_deref()
    }

    pub fn require_labels(&self) -> Result<&[bool]> {
        self.labels().ok_or(Error::MissingLabels)
    }

    pub(crate) fn from_parts(
        attributes: Array2<f64>,
        adjacency: Adjacency,
        labels: Option<Vec<bool>>,
        kinds: Option<Vec<Option<AnomalyKind>>>,
    ) -> Self {
        debug_assert_eq!(attributes.nrows(), adjacency.num_nodes());
        Self {
            attributes,
            adjacency,
            labels,
            kinds,
        }
    }

    pub fn with_attributes(&self, attributes: Array2<f64>) -> Result<Self> {
        let mut g = Self::new(attributes, self.adjacency.clone())?;
        g.labels = self.labels.clone();
        g.kinds = self.kinds.clone();
        Ok(g)
    }

    pub fn with_adjacency(&self, adjacency: Adjacency) -> Result<Self> {
        let mut g = Self::new(self.attributes.clone(), adjacency)?;
        g.labels = self.labels.clone();
        g.kinds = self.kinds.clone();
        Ok(g)
    }

    /// Removes degree-0 nodes. Returns the cleaned graph and, for every old
    /// node id, its new id (`None` if removed).
    pub fn remove_isolated(&self) -> (Self, Vec<Option<usize>>) {
        let n = self.num_nodes();
        let mut remap = vec![None; n];
        let mut kept = Vec::new();
        for (i, slot) in remap.iter_mut().enumerate() {
            if self.adjacency.degree(i) > 0 {
                *slot = Some(kept.len());
                kept.push(i);
            }
        }
        let attributes = self.attributes.select(ndarray::Axis(0), &kept);
        let adjacency = Adjacency::from_edges(
            kept.len(),
            self.adjacency
                .edges()
                .map(|(i, j)| (remap[i].unwrap(), remap[j].unwrap())),
        );
        let labels = self
            .labels
            .as_ref()
            .map(|l| kept.iter().map(|&i| l[i]).collect());
        let kinds = self
            .kinds
            .as_ref()
            .map(|k| kept.iter().map(|&i| k[i]).collect());
        (
            Self::from_parts(attributes, adjacency, labels, kinds),
            remap,
        )
    }

    /// Relabels nodes: node `i` becomes `perm[i]`. Attributes, adjacency and
    /// ground truth move together.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let n = self.num_nodes();
        let mut inverse = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            inverse[new] = old;
        }
        let attributes = self.attributes.select(ndarray::Axis(0), &inverse);
        let labels = self
            .labels
            .as_ref()
            .map(|l| inverse.iter().map(|&i| l[i]).collect());
        let kinds = self
            .kinds
            .as_ref()
            .map(|k| inverse.iter().map(|&i| k[i]).collect());
        Self::from_parts(attributes, self.adjacency.permute(perm), labels, kinds)
    }
}
