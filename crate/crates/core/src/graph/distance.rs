use ndarray::ArrayView2;

use super::Adjacency;

/// Euclidean attribute distances over the edges of one adjacency.
///
/// `slot_distances[s]` belongs to entry slot `s` of the adjacency the map was
/// built for, so `(i, j)` and `(j, i)` hold the same value.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeDistanceMap {
    slot_distances: Vec<f64>,
    mean: f64,
    node_max: Vec<Option<f64>>,
}

impl EdgeDistanceMap {
    fn from_slots(adj: &Adjacency, slot_distances: Vec<f64>) -> Self {
        debug_assert_eq!(slot_distances.len(), adj.num_entries());
        // Each undirected edge appears twice, so the mean over slots equals the
        // mean over edges.
        let mean = if slot_distances.is_empty() {
            0.0
        } else {
            slot_distances.iter().sum::<f64>() / slot_distances.len() as f64
        };
        let node_max = (0..adj.num_nodes())
            .map(|i| {
                slot_distances[adj.row_slots(i)]
                    .iter()
                    .copied()
                    .reduce(f64::max)
            })
            .collect();
        Self {
            slot_distances,
            mean,
            node_max,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.node_max.len()
    }

    /// Mean distance over present edges (0 for an edgeless graph).
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Largest distance from `node` to a current neighbor; `None` if isolated.
    pub fn node_max(&self, node: usize) -> Option<f64> {
        self.node_max[node]
    }

    pub fn slot_distance(&self, slot: usize) -> f64 {
        self.slot_distances[slot]
    }

    pub fn distance(&self, adj: &Adjacency, u: usize, v: usize) -> Option<f64> {
        adj.slot(u, v).map(|s| self.slot_distances[s])
    }

    /// Restricts the map to `sub`, a subgraph of `parent` (the adjacency this
    /// map was built for). Distances are carried over; the mean and per-node
    /// maxima are recomputed over the remaining edges.
    pub fn restrict(&self, parent: &Adjacency, sub: &Adjacency) -> Self {
        let mut slots = Vec::with_capacity(sub.num_entries());
        for i in 0..sub.num_nodes() {
            let parent_row = parent.neighbors(i);
            let base = parent.row_slots(i).start;
            let mut p = 0;
            for &j in sub.neighbors(i) {
                while parent_row[p] != j {
                    p += 1;
                }
                slots.push(self.slot_distances[base + p]);
            }
        }
        Self::from_slots(sub, slots)
    }
}

/// Distances `‖x_i − x_j‖₂` for every edge of `adj`, with their global mean and
/// per-node maxima.
pub fn edge_distances(attributes: ArrayView2<'_, f64>, adj: &Adjacency) -> EdgeDistanceMap {
    assert_eq!(attributes.nrows(), adj.num_nodes(), "attribute rows");
    let mut slots = vec![0.0; adj.num_entries()];
    for i in 0..adj.num_nodes() {
        let xi = attributes.row(i);
        for (slot, &j) in adj.row_slots(i).zip(adj.neighbors(i)) {
            if j < i {
                // Reuse the value computed from the lower endpoint so both
                // directions are bit-identical.
                slots[slot] = slots[adj.slot(j, i).expect("symmetric adjacency")];
            } else {
                let xj = attributes.row(j);
                slots[slot] = xi
                    .iter()
                    .zip(xj.iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
            }
        }
    }
    EdgeDistanceMap::from_slots(adj, slots)
}
