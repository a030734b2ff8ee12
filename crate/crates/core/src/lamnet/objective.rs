//! The affinity-maximization objective over a representation matrix.
//!
//! For representations `h_i` and the original adjacency,
//!
//! ```text
//! L = Σ_i [ −(1/|N(i)|) Σ_{j∈N(i)} sim(h_i, h_j)
//!           + λ (1/|V∖N(i)|) Σ_{k∈V∖N(i)} sim(h_i, h_k) ]
//! ```
//!
//! `V∖N(i)` contains `i` itself. With unit rows `u_i` (zero rows stay zero,
//! matching `sim(a, 0) = 0`) and `s = Σ_k u_k`, the non-neighbor sum is
//! `u_i·s − Σ_{j∈N(i)} u_i·u_j`, so the whole objective and its gradient cost
//! `O((N + m) d)` rather than `O(N² d)`.

use ndarray::{Array1, Array2, ArrayView2, Axis, Zip};

use crate::affinity::unit_rows;
use crate::graph::Adjacency;

/// Loss value and its gradient with respect to `h`.
pub(crate) fn objective(h: ArrayView2<'_, f64>, adj: &Adjacency, lambda: f64) -> (f64, Array2<f64>) {
    let n = h.nrows();
    let (unit, norms) = unit_rows(h);
    let total: Array1<f64> = unit.sum_axis(Axis(0));

    // Per-node weights: a_i on the neighbor mean, b_i on the non-neighbor mean.
    let mut affinity_weight = vec![0.0; n];
    let mut repulsion_weight = vec![0.0; n];
    let mut loss = 0.0;
    for i in 0..n {
        let ui = unit.row(i);
        let neighbors = adj.neighbors(i);
        let neighbor_sum: f64 = neighbors.iter().map(|&j| ui.dot(&unit.row(j))).sum();
        if !neighbors.is_empty() {
            affinity_weight[i] = 1.0 / neighbors.len() as f64;
            loss -= neighbor_sum * affinity_weight[i];
        }
        if lambda != 0.0 {
            repulsion_weight[i] = lambda / (n - neighbors.len()) as f64;
            loss += repulsion_weight[i] * (ui.dot(&total) - neighbor_sum);
        }
    }

    // dL/du_p = b_p s + Σ_i b_i u_i − Σ_{j∈N(p)} (c_p + c_j) u_j,  c = a + b.
    let weighted_total = if lambda != 0.0 {
        Array1::from(repulsion_weight.clone()).dot(&unit)
    } else {
        Array1::zeros(h.ncols())
    };
    let coupling: Vec<f64> = (0..n)
        .map(|i| affinity_weight[i] + repulsion_weight[i])
        .collect();
    let mut grad = Array2::zeros(h.raw_dim());
    for (p, mut g) in grad.axis_iter_mut(Axis(0)).enumerate() {
        if norms[p] == 0.0 {
            continue;
        }
        if lambda != 0.0 {
            g.scaled_add(repulsion_weight[p], &total);
            g += &weighted_total;
        }
        for &j in adj.neighbors(p) {
            g.scaled_add(-(coupling[p] + coupling[j]), &unit.row(j));
        }
        // Through u = h / ‖h‖: (g − (g·u) u) / ‖h‖.
        let up = unit.row(p);
        let radial = g.dot(&up);
        Zip::from(&mut g).and(&up).for_each(|gv, &uv| {
            *gv = (*gv - radial * uv) / norms[p];
        });
    }
    (loss, grad)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::affinity::cosine_sim;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sim(h: &Array2<f64>, i: usize, j: usize) -> f64 {
        cosine_sim(h.row(i).as_slice().unwrap(), h.row(j).as_slice().unwrap()).unwrap()
    }

    /// Direct double loop over neighbor and non-neighbor pairs.
    pub(crate) fn brute_force_loss(h: &Array2<f64>, adj: &Adjacency, lambda: f64) -> f64 {
        let n = h.nrows();
        let mut loss = 0.0;
        for i in 0..n {
            let (mut near, mut near_count, mut far, mut far_count) = (0.0, 0, 0.0, 0);
            for k in 0..n {
                if adj.contains(i, k) {
                    near += sim(h, i, k);
                    near_count += 1;
                } else {
                    far += sim(h, i, k);
                    far_count += 1;
                }
            }
            if near_count > 0 {
                loss -= near / near_count as f64;
            }
            loss += lambda * far / far_count as f64;
        }
        loss
    }

    fn random_case(rng: &mut ChaCha8Rng, n: usize, d: usize) -> (Array2<f64>, Adjacency) {
        let h = Array2::from_shape_fn((n, d), |_| rng.random_range(-1.0..1.0));
        let pairs: Vec<_> = (0..2 * n).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect();
        (h, Adjacency::from_edges(n, pairs))
    }

    #[test]
    fn loss_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let n = rng.random_range(2..=20);
            let (h, adj) = random_case(&mut rng, n, 4);
            for lambda in [0.0, 1.0, 0.3] {
                let (loss, _) = objective(h.view(), &adj, lambda);
                assert!((loss - brute_force_loss(&h, &adj, lambda)).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let (h, adj) = random_case(&mut rng, 7, 3);
            let (_, grad) = objective(h.view(), &adj, 1.0);
            let step = 1e-6;
            for idx in 0..h.len() {
                let (r, c) = (idx / 3, idx % 3);
                let mut plus = h.clone();
                plus[[r, c]] += step;
                let mut minus = h.clone();
                minus[[r, c]] -= step;
                let fd = (brute_force_loss(&plus, &adj, 1.0) - brute_force_loss(&minus, &adj, 1.0))
                    / (2.0 * step);
                assert!((grad[[r, c]] - fd).abs() / fd.abs().max(1.0) < 1e-6);
            }
        }
    }

    #[test]
    fn identical_rows_reach_minus_n() {
        let h = Array2::from_shape_fn((5, 2), |(_, j)| 1.0 + j as f64);
        let adj = Adjacency::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]);
        let (loss, grad) = objective(h.view(), &adj, 0.0);
        assert!((loss + 5.0).abs() < 1e-12);
        assert!(grad.iter().all(|g| g.abs() < 1e-12));
    }

    #[test]
    fn orthogonal_rows_give_zero() {
        let h = Array2::from_shape_fn((3, 3), |(i, j)| if i == j { 2.0 } else { 0.0 });
        let adj = Adjacency::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        assert_eq!(objective(h.view(), &adj, 0.0).0, 0.0);
    }

    #[test]
    fn zero_rows_have_zero_gradient() {
        let mut h = Array2::from_shape_fn((4, 2), |(i, j)| (i + j) as f64 + 0.5);
        h.row_mut(2).fill(0.0);
        let adj = Adjacency::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let (loss, grad) = objective(h.view(), &adj, 1.0);
        assert!(loss.is_finite());
        assert!(grad.row(2).iter().all(|&g| g == 0.0));
        assert!((loss - brute_force_loss(&h, &adj, 1.0)).abs() < 1e-12);
    }

    #[test]
    fn loss_stays_in_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.random_range(2..=15);
            let (h, adj) = random_case(&mut rng, n, 3);
            let lambda = rng.random_range(0.0..3.0);
            let (loss, _) = objective(h.view(), &adj, lambda);
            assert!(loss >= -(n as f64) - 1e-12 && loss <= (1.0 + lambda) * n as f64 + 1e-12);
        }
    }
}
