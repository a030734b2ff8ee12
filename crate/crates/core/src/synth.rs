//! A small labeled benchmark with one-class homophily: normal nodes form
//! attribute clusters wired mostly among themselves, anomalies carry far-off
//! attributes and hang off random normal nodes.

use std::collections::BTreeSet;

use ndarray::{Array1, Array2};
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::graph::{Adjacency, AttributedGraph};
use crate::seed::rng_for;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OneClassBenchmark {
    pub clusters: usize,
    pub nodes_per_cluster: usize,
    pub num_anomalies: usize,
    pub num_attributes: usize,
    /// Distance of each cluster centroid from the origin.
    pub centroid_norm: f64,
    /// Standard deviation of the isotropic attribute noise.
    pub noise: f64,
    /// Distance of each anomaly's attribute center from the origin.
    pub anomaly_norm: f64,
    /// Target mean degree inside a cluster (a ring plus random chords).
    pub mean_degree: usize,
    /// Inclusive range of edges from each anomaly into one cluster.
    pub anomaly_degree: (usize, usize),
}

impl Default for OneClassBenchmark {
    fn default() -> Self {
        Self {
            clusters: 2,
            nodes_per_cluster: 200,
            num_anomalies: 20,
            num_attributes: 32,
            centroid_norm: 1.5,
            noise: 1.0,
            anomaly_norm: 10.0,
            mean_degree: 5,
            anomaly_degree: (3, 6),
        }
    }
}

fn random_direction(rng: &mut impl Rng, dim: usize, norm: f64) -> Array1<f64> {
    let v: Array1<f64> = Array1::from_shape_fn(dim, |_| rng.sample(StandardNormal));
    let len = v.dot(&v).sqrt();
    v * (norm / len)
}

impl OneClassBenchmark {
    pub fn num_nodes(&self) -> usize {
        self.clusters * self.nodes_per_cluster + self.num_anomalies
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.anomaly_degree;
        let fail = |msg: &str| Err(Error::Config(msg.into()));
        if self.clusters == 0 || self.nodes_per_cluster < 3 || self.num_attributes == 0 {
            return fail("benchmark needs at least one cluster of three nodes");
        }
        if lo == 0 || lo > hi || hi > self.nodes_per_cluster {
            return fail("anomaly degree range must be non-empty and fit in a cluster");
        }
        if self.mean_degree < 2 || self.mean_degree >= self.nodes_per_cluster {
            return fail("mean degree must lie in [2, nodes per cluster)");
        }
        Ok(())
    }

    /// Normals come first (cluster by cluster), anomalies last.
    pub fn generate(&self, seed: u64) -> Result<AttributedGraph> {
        self.validate()?;
        let mut rng = rng_for(seed, "one-class-benchmark", 0);
        let (c, per, m) = (self.clusters, self.nodes_per_cluster, self.num_attributes);
        let n = self.num_nodes();
        let mut x = Array2::zeros((n, m));
        let centroids: Vec<Array1<f64>> = (0..c)
            .map(|_| random_direction(&mut rng, m, self.centroid_norm))
            .collect();
        for node in 0..c * per {
            let centroid = &centroids[node / per];
            for j in 0..m {
                let z: f64 = rng.sample(StandardNormal);
                x[[node, j]] = centroid[j] + self.noise * z;
            }
        }
        for node in c * per..n {
            let center = random_direction(&mut rng, m, self.anomaly_norm);
            for j in 0..m {
                let z: f64 = rng.sample(StandardNormal);
                x[[node, j]] = center[j] + self.noise * z;
            }
        }

        let mut edges = BTreeSet::new();
        let target = per * self.mean_degree / 2;
        for cluster in 0..c {
            let base = cluster * per;
            for i in 0..per {
                let (u, v) = (base + i, base + (i + 1) % per);
                edges.insert((u.min(v), u.max(v)));
            }
            let mut added = per;
            while added < target {
                let u = base + rng.random_range(0..per);
                let v = base + rng.random_range(0..per);
                if u != v && edges.insert((u.min(v), u.max(v))) {
                    added += 1;
                }
            }
        }
        for node in c * per..n {
            let degree = rng.random_range(self.anomaly_degree.0..=self.anomaly_degree.1);
            let base = rng.random_range(0..c) * per;
            for offset in sample(&mut rng, per, degree) {
                edges.insert((base + offset, node));
            }
        }

        let labels = (0..n).map(|i| i >= c * per).collect();
        AttributedGraph::new(x, Adjacency::from_edges(n, edges))?.with_labels(labels)
    }
}
