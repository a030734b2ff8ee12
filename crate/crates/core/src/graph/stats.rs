use super::{Adjacency, AttributedGraph};
use crate::{Error, Result};

/// Per-node homophily/heterophily ratios against ground-truth labels.
///
/// `homophily[v]` is the fraction of `v`'s neighbors sharing its label and
/// `heterophily[v]` the fraction that do not; both are `None` for isolated
/// nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct HomophilyStats {
    pub homophily: Vec<Option<f64>>,
    pub heterophily: Vec<Option<f64>>,
    /// Homophily of the non-isolated normal nodes, in node order.
    pub normal: Vec<f64>,
    /// Homophily of the non-isolated anomalous nodes, in node order.
    pub anomalous: Vec<f64>,
}

impl HomophilyStats {
    pub fn for_graph(g: &AttributedGraph) -> Result<Self> {
        homophily_stats(g.adjacency(), g.require_labels()?)
    }

    pub fn mean_normal(&self) -> Option<f64> {
        mean(&self.normal)
    }

    pub fn mean_anomalous(&self) -> Option<f64> {
        mean(&self.anomalous)
    }
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

pub fn homophily_stats(adj: &Adjacency, labels: &[bool]) -> Result<HomophilyStats> {
    if labels.len() != adj.num_nodes() {
        return Err(Error::LengthMismatch {
            left: labels.len(),
            right: adj.num_nodes(),
        });
    }
    let mut stats = HomophilyStats {
        homophily: Vec::with_capacity(labels.len()),
        heterophily: Vec::with_capacity(labels.len()),
        normal: Vec::new(),
        anomalous: Vec::new(),
    };
    for (v, &label) in labels.iter().enumerate() {
        let neighbors = adj.neighbors(v);
        if neighbors.is_empty() {
            stats.homophily.push(None);
            stats.heterophily.push(None);
            continue;
        }
        let same = neighbors.iter().filter(|&&u| labels[u] == label).count();
        let different = neighbors.len() - same;
        let homo = same as f64 / neighbors.len() as f64;
        stats.homophily.push(Some(homo));
        stats
            .heterophily
            .push(Some(different as f64 / neighbors.len() as f64));
        if label {
            stats.anomalous.push(homo);
        } else {
            stats.normal.push(homo);
        }
    }
    Ok(stats)
}

/// Edge counts by endpoint class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EdgeClassCounts {
    pub normal_normal: usize,
    pub normal_anomaly: usize,
    pub anomaly_anomaly: usize,
}

pub fn edge_class_counts(adj: &Adjacency, labels: &[bool]) -> EdgeClassCounts {
    let mut counts = EdgeClassCounts::default();
    for (i, j) in adj.edges() {
        match (labels[i], labels[j]) {
            (false, false) => counts.normal_normal += 1,
            (true, true) => counts.anomaly_anomaly += 1,
            _ => counts.normal_anomaly += 1,
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_same_label_neighbors() {
        let adj = Adjacency::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
        let s = homophily_stats(&adj, &[false; 4]).unwrap();
        assert_eq!(s.homophily[0], Some(1.0));
        assert_eq!(s.heterophily[0], Some(0.0));
    }

    #[test]
    fn half_and_half() {
        let adj = Adjacency::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]);
        let s = homophily_stats(&adj, &[false, false, false, true, true]).unwrap();
        assert_eq!(s.homophily[0], Some(0.5));
        assert_eq!(s.anomalous, vec![0.0, 0.0]);
    }

    #[test]
    fn ratios_sum_to_one_and_isolated_are_skipped() {
        let adj = Adjacency::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)]);
        let labels = [false, true, false, true, false, false];
        let s = homophily_stats(&adj, &labels).unwrap();
        for v in 0..4 {
            assert_eq!(s.homophily[v].unwrap() + s.heterophily[v].unwrap(), 1.0);
        }
        assert_eq!(s.homophily[4], None);
        assert_eq!(s.normal.len() + s.anomalous.len(), 4);
    }

    #[test]
    fn two_block_means_match_edge_scan() {
        // Two cliques of normals (0..5, 5..10) and anomalies 10..12 bridging them.
        let mut edges = Vec::new();
        for block in [0..5, 5..10] {
            for i in block.clone() {
                for j in block.clone() {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        edges.extend([(10, 0), (10, 5), (11, 3), (11, 8), (11, 9), (10, 11)]);
        let adj = Adjacency::from_edges(12, edges);
        let labels: Vec<bool> = (0..12).map(|i| i >= 10).collect();
        let s = homophily_stats(&adj, &labels).unwrap();

        let mut sums = [0.0f64; 2];
        let mut counts = [0usize; 2];
        for v in 0..12 {
            let (mut same, mut total) = (0, 0);
            for (i, j) in adj.edges() {
                let other = if i == v { j } else if j == v { i } else { continue };
                total += 1;
                same += usize::from(labels[other] == labels[v]);
            }
            let class = usize::from(labels[v]);
            sums[class] += same as f64 / total as f64;
            counts[class] += 1;
        }
        assert!((s.mean_normal().unwrap() - sums[0] / counts[0] as f64).abs() < 1e-15);
        assert!((s.mean_anomalous().unwrap() - sums[1] / counts[1] as f64).abs() < 1e-15);

        let c = edge_class_counts(&adj, &labels);
        assert_eq!(c.normal_anomaly, 5);
        assert_eq!(c.anomaly_anomaly, 1);
        assert_eq!(c.normal_normal, 20);
    }

    #[test]
    fn missing_labels_is_an_error() {
        let g = AttributedGraph::new(
            ndarray::Array2::zeros((2, 1)),
            Adjacency::from_edges(2, [(0, 1)]),
        )
        .unwrap();
        assert!(matches!(HomophilyStats::for_graph(&g), Err(Error::MissingLabels)));
    }
}
