//! Truncated affinity maximization for unsupervised graph anomaly detection.
//!
//! Nodes are scored by their *local affinity*: the mean cosine similarity of a
//! node's representation to the representations of its neighbors. Normal nodes
//! tend to sit among similar neighbors, anomalies do not. The detector learns
//! representations with a two-layer GCN that maximizes this affinity, while
//! message passing runs over graphs from which likely normal/anomalous edges
//! have been probabilistically truncated. Scores from `T × K` such networks
//! (`T` independent truncation runs, `K` depths each) are averaged.
//!
//! Module map:
//!
//! * [`graph`]: attributed graph model, CSR adjacency, file I/O, normalization,
//!   edge distances and homophily statistics.
//! * [`affinity`]: cosine similarity and the local affinity measure.
//! * [`nsgt`]: iterative probabilistic edge truncation.
//! * [`lamnet`]: the affinity-maximizing GCN: forward pass, objective, exact
//!   gradients, Adam training, single-model scoring and persistence.
//! * [`ensemble`]: `T × K` training, aggregated scoring and ablation variants.
//! * [`inject`]: structural/contextual anomaly injection and camouflage.
//! * [`synth`]: a synthetic one-class-homophily benchmark generator.
//! * [`eval`]: AUROC, average precision and multi-run reports.

pub mod affinity;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod graph;
pub mod inject;
pub mod lamnet;
pub mod nsgt;
pub mod score;
pub mod seed;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{Adjacency, AnomalyKind, AttributedGraph};
pub use score::{MemberId, ScoreVector};
