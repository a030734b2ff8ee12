use ndarray::{Array2, ArrayView2};

use super::Adjacency;
use crate::{Error, Result};

/// Square real matrix in compressed row form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    offsets: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn dim(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(column, value)` pairs of one row, columns increasing.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[i]..self.offsets[i + 1];
        self.indices[r.clone()]
            .iter()
            .copied()
            .zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.offsets[i]..self.offsets[i + 1];
        match self.indices[r.clone()].binary_search(&j) {
            Ok(p) => self.values[r.start + p],
            Err(_) => 0.0,
        }
    }

    /// `self · dense`.
    pub fn mul_dense(&self, dense: ArrayView2<'_, f64>) -> Array2<f64> {
        assert_eq!(dense.nrows(), self.dim(), "sparse-dense product shape");
        let mut out = Array2::zeros((self.dim(), dense.ncols()));
        for (i, mut out_row) in out.rows_mut().into_iter().enumerate() {
            for (j, v) in self.row(i) {
                out_row.scaled_add(v, &dense.row(j));
            }
        }
        out
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let n = self.dim();
        let mut out = Array2::zeros((n, n));
        for i in 0..n {
            for (j, v) in self.row(i) {
                out[[i, j]] = v;
            }
        }
        out
    }
}

/// `D^{-1/2} A D^{-1/2}`, or `D^{-1/2} (A + I) D^{-1/2}` when
/// `add_self_loops` is set, with `D` the degree matrix of the (looped) input.
pub fn symmetric_normalize(adj: &Adjacency, add_self_loops: bool) -> Result<SparseMatrix> {
    let n = adj.num_nodes();
    let loop_weight = usize::from(add_self_loops);
    let degree: Vec<f64> = (0..n)
        .map(|i| match adj.degree(i) + loop_weight {
            0 => Err(Error::IsolatedNode { node: i }),
            d => Ok(d as f64),
        })
        .collect::<Result<_>>()?;
    let weight = |i: usize, j: usize| 1.0 / (degree[i] * degree[j]).sqrt();

    let mut offsets = Vec::with_capacity(n + 1);
    let mut indices = Vec::with_capacity(adj.num_entries() + n * loop_weight);
    let mut values = Vec::with_capacity(indices.capacity());
    offsets.push(0);
    for i in 0..n {
        let mut diagonal_pending = add_self_loops;
        for &j in adj.neighbors(i) {
            if diagonal_pending && j > i {
                indices.push(i);
                values.push(weight(i, i));
                diagonal_pending = false;
            }
            indices.push(j);
            values.push(weight(i, j));
        }
        if diagonal_pending {
            indices.push(i);
            values.push(weight(i, i));
        }
        offsets.push(indices.len());
    }
    Ok(SparseMatrix {
        offsets,
        indices,
        values,
    })
}
