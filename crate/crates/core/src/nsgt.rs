//! Normal-structure-preserved graph truncation.
//!
//! Each iteration treats the graph as directed. Every node `v` whose largest
//! neighbor distance exceeds the global mean edge distance draws one threshold
//! `r_v ~ U[d_mean, d_v,max]` and marks each outgoing edge with distance
//! strictly above `r_v`. An undirected edge is removed only when both of its
//! directions are marked. The mean and per-node maxima are then recomputed on
//! the surviving edges and the next iteration runs on them, giving `K` nested
//! edge sets.
//!
//! Distances always come from the raw attributes and are computed once.
//!
//! [`removal_probability`] gives the marginal probability that one iteration
//! removes a given edge. It is exact for a single edge because `r_i` and `r_j`
//! are independent draws; removals of edges sharing an endpoint are correlated
//! since they share that endpoint's threshold.

use rand::Rng;
use rayon::prelude::*;

use crate::graph::{edge_distances, Adjacency, AttributedGraph, EdgeDistanceMap};
use crate::seed::{derive_seed, NodeStreams};
use crate::{Error, Result};

fn side_probability(d_ij: f64, d_mean: f64, d_max: f64) -> f64 {
    if d_max > d_mean {
        ((d_ij - d_mean).max(0.0) / (d_max - d_mean)).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// Probability that one iteration removes edge `(i, j)`:
/// `p(r_i < d_ij) · p(r_j < d_ij)`, where each factor is
/// `max(d_ij − d_mean, 0) / (d_max − d_mean)` and 0 when `d_max ≤ d_mean`.
pub fn removal_probability(d_ij: f64, d_mean: f64, d_i_max: f64, d_j_max: f64) -> f64 {
    side_probability(d_ij, d_mean, d_i_max) * side_probability(d_ij, d_mean, d_j_max)
}

/// Per-node threshold draw; `None` when the node marks nothing.
fn threshold(dist: &EdgeDistanceMap, node: usize, streams: &NodeStreams) -> Option<f64> {
    let max = dist.node_max(node)?;
    let mean = dist.mean();
    (max > mean).then(|| {
        let u: f64 = streams.rng(node).random();
        mean + u * (max - mean)
    })
}

/// The threshold every node draws in one iteration (`None` for nodes whose
/// maximum neighbor distance does not exceed the mean).
pub fn thresholds(dist: &EdgeDistanceMap, streams: &NodeStreams) -> Vec<Option<f64>> {
    (0..dist.num_nodes())
        .map(|v| threshold(dist, v, streams))
        .collect()
}

/// One truncation pass over `adj`. `dist` must have been computed for `adj`.
pub fn truncate_once(adj: &Adjacency, dist: &EdgeDistanceMap, streams: NodeStreams) -> Adjacency {
    let marked: Vec<bool> = (0..adj.num_nodes())
        .into_par_iter()
        .flat_map_iter(|v| {
            let r = threshold(dist, v, &streams);
            adj.row_slots(v)
                .map(move |slot| r.is_some_and(|r| dist.slot_distance(slot) > r))
        })
        .collect();
    adj.retain_edges(|i, j| {
        let forward = marked[adj.slot(i, j).unwrap()];
        let backward = marked[adj.slot(j, i).unwrap()];
        !(forward && backward)
    })
}

/// `K` nested truncations of one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationSet {
    /// Seed the iteration streams were derived from.
    pub seed: u64,
    /// `levels[k]` is the edge set after `k + 1` iterations.
    pub levels: Vec<Adjacency>,
    /// For each original edge (by edge id), the 1-based iteration that removed
    /// it, if any.
    pub removed_at: Vec<Option<usize>>,
}

impl TruncationSet {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn edge_counts(&self) -> Vec<usize> {
        self.levels.iter().map(Adjacency::num_edges).collect()
    }
}

/// Runs `depth` truncation iterations on `g`.
pub fn truncate_sequence(g: &AttributedGraph, depth: usize, seed: u64) -> Result<TruncationSet> {
    if depth < 1 {
        return Err(Error::Config("truncation depth must be at least 1".into()));
    }
    let original = g.adjacency();
    let mut current = original.clone();
    let mut dist = edge_distances(g.attributes().view(), original);
    let mut levels = Vec::with_capacity(depth);
    for iteration in 0..depth {
        let streams = NodeStreams::new(derive_seed(seed, "nsgt-iteration", iteration as u64));
        let next = truncate_once(&current, &dist, streams);
        dist = dist.restrict(&current, &next);
        levels.push(next.clone());
        current = next;
    }
    let removed_at = original
        .edges()
        .map(|(i, j)| {
            levels
                .iter()
                .position(|level| !level.contains(i, j))
                .map(|k| k + 1)
        })
        .collect();
    Ok(TruncationSet {
        seed,
        levels,
        removed_at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn probability_examples() {
        assert_eq!(removal_probability(1.0, 2.0, 6.0, 5.0), 0.0);
        assert_eq!(removal_probability(2.0, 2.0, 6.0, 5.0), 0.0);
        assert_eq!(removal_probability(5.0, 2.0, 5.0, 5.0), 1.0);
        assert!((removal_probability(4.0, 2.0, 6.0, 5.0) - 1.0 / 3.0).abs() < 1e-15);
        // Premise clause: a side whose maximum does not exceed the mean never cuts.
        assert_eq!(removal_probability(4.0, 2.0, 2.0, 5.0), 0.0);
    }

    #[test]
    fn probability_agrees_with_monte_carlo() {
        let (d, mean, imax, jmax) = (4.0, 2.0, 6.0, 5.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let trials = 200_000;
        let hits = (0..trials)
            .filter(|_| {
                let ri = rng.random_range(mean..imax);
                let rj = rng.random_range(mean..jmax);
                d > ri && d > rj
            })
            .count();
        let p = removal_probability(d, mean, imax, jmax);
        let sd = (p * (1.0 - p) / trials as f64).sqrt();
        assert!(((hits as f64 / trials as f64) - p).abs() < 4.0 * sd);
    }

    fn path_graph(x: Array2<f64>) -> AttributedGraph {
        let n = x.nrows();
        AttributedGraph::new(x, Adjacency::from_edges(n, (1..n).map(|i| (i - 1, i)))).unwrap()
    }

    #[test]
    fn equal_distances_remove_nothing() {
        let x = Array2::from_shape_fn((6, 1), |(i, _)| i as f64);
        let g = path_graph(x);
        let set = truncate_sequence(&g, 1, 3).unwrap();
        assert_eq!(&set.levels[0], g.adjacency());
        assert!(set.removed_at.iter().all(Option::is_none));
    }

    #[test]
    fn both_directions_must_be_marked() {
        // d(0,1) = 5, d(0,2) = 10, d(2,3) = 1, d(0,4) = d(4,5) = 0.5; mean = 3.4.
        // Leaf 1 always marks (1,0). Node 0 draws r_0 ~ U[3.4, 10] and marks
        // (0,1) only when r_0 < 5.
        let x = array![[0.0], [5.0], [-10.0], [-11.0], [0.5], [1.0]];
        let adj = Adjacency::from_edges(6, [(0, 1), (0, 2), (2, 3), (0, 4), (4, 5)]);
        let g = AttributedGraph::new(x, adj).unwrap();
        let dist = edge_distances(g.attributes().view(), g.adjacency());
        let d01 = dist.distance(g.adjacency(), 0, 1).unwrap();
        assert!(dist.mean() < d01 && d01 == dist.node_max(1).unwrap());

        let mut saw_one_sided = false;
        for seed in 0..200 {
            let streams = NodeStreams::new(seed);
            let r = thresholds(&dist, &streams);
            let next = truncate_once(g.adjacency(), &dist, streams);
            assert!(r[1].unwrap() < d01);
            if r[0].unwrap() >= d01 {
                saw_one_sided = true;
                assert!(next.contains(0, 1));
            } else {
                assert!(!next.contains(0, 1));
            }
        }
        assert!(saw_one_sided);
    }

    #[test]
    fn removal_follows_the_threshold_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let n = 25;
        let x = Array2::from_shape_fn((n, 2), |_| rng.random_range(-3.0..3.0));
        let pairs: Vec<_> = (0..70).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect();
        let adj = Adjacency::from_edges(n, pairs);
        let dist = edge_distances(x.view(), &adj);
        for seed in 0..20 {
            let streams = NodeStreams::new(seed);
            let r = thresholds(&dist, &streams);
            let next = truncate_once(&adj, &dist, streams);
            for (i, j) in adj.edges() {
                let d = dist.distance(&adj, i, j).unwrap();
                let marks = |v: usize| r[v].is_some_and(|r| d > r);
                assert_eq!(next.contains(i, j), !(marks(i) && marks(j)));
            }
        }
    }

    #[test]
    fn removal_bookkeeping() {
        // Edges (0,1) d=1, (0,2) d=1, (0,4) d=9, (1,5) d=6.5; mean = 4.375.
        // (0,4) and (1,5) are the maximum at both endpoints: always removed.
        let x = array![[0.0], [1.0], [-1.0], [0.0], [9.0], [7.5]];
        let adj = Adjacency::from_edges(6, [(0, 1), (0, 2), (0, 4), (1, 5)]);
        let g = AttributedGraph::new(x, adj).unwrap();
        let set = truncate_sequence(&g, 2, 1).unwrap();
        assert_eq!(set.removed_at, vec![None, None, Some(1), Some(1)]);
        assert_eq!(set.edge_counts(), vec![2, 2]);
    }

    #[test]
    fn levels_are_nested_and_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 40;
        let x = Array2::from_shape_fn((n, 3), |_| rng.random_range(-3.0..3.0));
        let pairs: Vec<_> = (0..120).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect();
        let g = AttributedGraph::new(x, Adjacency::from_edges(n, pairs)).unwrap();
        for seed in 0..10 {
            let set = truncate_sequence(&g, 4, seed).unwrap();
            let counts = set.edge_counts();
            assert!(counts.windows(2).all(|w| w[0] >= w[1]));
            assert!(set.levels[0].is_subgraph_of(g.adjacency()));
            for w in set.levels.windows(2) {
                assert!(w[1].is_subgraph_of(&w[0]));
            }
            for level in &set.levels {
                level.validate().unwrap();
            }
            assert_eq!(set, truncate_sequence(&g, 4, seed).unwrap());
        }
        assert!(truncate_sequence(&g, 0, 0).is_err());
    }

    #[test]
    fn result_does_not_depend_on_thread_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 60;
        let x = Array2::from_shape_fn((n, 4), |_| rng.random_range(-3.0..3.0));
        let pairs: Vec<_> = (0..200).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect();
        let g = AttributedGraph::new(x, Adjacency::from_edges(n, pairs)).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| truncate_sequence(&g, 4, 99).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn draws_below_the_mean_never_remove() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let n = 30;
        let x = Array2::from_shape_fn((n, 2), |_| rng.random_range(-3.0..3.0));
        let pairs: Vec<_> = (0..90).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect();
        let g = AttributedGraph::new(x, Adjacency::from_edges(n, pairs)).unwrap();
        let dist = edge_distances(g.attributes().view(), g.adjacency());
        for seed in 0..20 {
            let next = truncate_once(g.adjacency(), &dist, NodeStreams::new(seed));
            for (i, j) in g.adjacency().edges() {
                if dist.distance(g.adjacency(), i, j).unwrap() <= dist.mean() {
                    assert!(next.contains(i, j));
                }
            }
        }
    }
}
