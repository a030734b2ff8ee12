//! Local node affinity: the mean cosine similarity of a node's features to
//! those of its neighbors. Its negation is the anomaly score.

use ndarray::{Array2, ArrayView2, Axis};

use crate::graph::Adjacency;
use crate::{Error, Result};

/// Cosine similarity, with `sim(a, 0) = 0`.
pub fn cosine_sim(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (na * nb)).clamp(-1.0, 1.0))
}

/// Rows scaled to unit length; zero rows stay zero.
pub(crate) fn unit_rows(features: ArrayView2<'_, f64>) -> (Array2<f64>, Vec<f64>) {
    let mut unit = features.to_owned();
    let mut norms = Vec::with_capacity(unit.nrows());
    for mut row in unit.axis_iter_mut(Axis(0)) {
        let norm = row.dot(&row).sqrt();
        if norm > 0.0 {
            row /= norm;
        }
        norms.push(norm);
    }
    (unit, norms)
}

/// Per-node affinity `h(v)` in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinityVector {
    pub affinity: Vec<f64>,
}

impl AffinityVector {
    /// `f(v) = -h(v)`; higher means more anomalous.
    pub fn anomaly_scores(&self) -> Vec<f64> {
        self.affinity.iter().map(|h| -h).collect()
    }
}

/// Mean cosine similarity of each row of `features` to its neighbors' rows.
///
/// Isolated nodes get affinity 0. Callers scoring with the detector pass the
/// original (untruncated) adjacency.
pub fn local_affinity(features: ArrayView2<'_, f64>, adj: &Adjacency) -> Result<AffinityVector> {
    if features.nrows() != adj.num_nodes() {
        return Err(Error::Shape(format!(
            "{} feature rows for {} nodes",
            features.nrows(),
            adj.num_nodes()
        )));
    }
    let (unit, _) = unit_rows(features);
    let affinity = (0..adj.num_nodes())
        .map(|i| {
            let neighbors = adj.neighbors(i);
            if neighbors.is_empty() {
                return 0.0;
            }
            let ui = unit.row(i);
            let total: f64 = neighbors.iter().map(|&j| ui.dot(&unit.row(j))).sum();
            (total / neighbors.len() as f64).clamp(-1.0, 1.0)
        })
        .collect();
    Ok(AffinityVector { affinity })
}

/// Node ids ordered from most to least anomalous; ties keep the smaller id
/// first.
pub fn rank_by_score(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
}
