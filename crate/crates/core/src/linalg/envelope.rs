//! Envelope (profile) Cholesky factorization with reverse Cuthill-McKee ordering.

use std::collections::VecDeque;

use nalgebra_sparse::CsrMatrix;

use crate::error::{Error, Result};

/// `P A Pᵀ = L Lᵀ` with `L` stored row-wise over each row's envelope.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    /// `perm[new] = old`.
    perm: Vec<usize>,
    /// First column of the envelope of each row.
    first: Vec<usize>,
    /// Offset of each row's first stored entry in `data`.
    offset: Vec<usize>,
    data: Vec<f64>,
}

impl EnvelopeCholesky {
    pub fn factor(a: &CsrMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        let perm = rcm_ordering(a);
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for (old_row, row) in a.row_iter().enumerate() {
            let i = inv[old_row];
            for &c in row.col_indices() {
                let j = inv[c];
                if j < i {
                    first[i] = first[i].min(j);
                }
            }
        }
        let mut offset = Vec::with_capacity(n + 1);
        let mut total = 0usize;
        for i in 0..n {
            offset.push(total);
            total += i - first[i] + 1;
        }
        offset.push(total);
        let mut data = vec![0.0f64; total];
        for (old_row, row) in a.row_iter().enumerate() {
            let i = inv[old_row];
            for (&c, &v) in row.col_indices().iter().zip(row.values()) {
                let j = inv[c];
                if j <= i {
                    data[offset[i] + j - first[i]] += v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            for j in fi..=i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let (head, row_i) = data.split_at_mut(offset[i]);
                let li = &mut row_i[..i - fi + 1];
                let dot: f64 = if j == i {
                    li[k0 - fi..j - fi].iter().map(|v| v * v).sum()
                } else {
                    let lj = &head[offset[j]..offset[j] + (j - fj + 1)];
                    li[k0 - fi..j - fi]
                        .iter()
                        .zip(&lj[k0 - fj..j - fj])
                        .map(|(x, y)| x * y)
                        .sum()
                };
                if j == i {
                    let d = li[i - fi] - dot;
                    if !(d > 0.0) {
                        return Err(Error::NotPositiveDefinite { index: i, value: d });
                    }
                    li[i - fi] = d.sqrt();
                } else {
                    let ljj = head[offset[j] + j - fj];
                    li[j - fi] = (li[j - fi] - dot) / ljj;
                }
            }
        }
        Ok(Self {
            perm,
            first,
            offset,
            data,
        })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Stored entries of the factor.
    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[self.offset[i]..self.offset[i + 1]]
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.dim();
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = self.row(i);
            let s: f64 = row[..i - fi]
                .iter()
                .zip(&y[fi..i])
                .map(|(l, v)| l * v)
                .sum();
            y[i] = (y[i] - s) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = self.row(i);
            y[i] /= row[i - fi];
            let xi = y[i];
            for (yk, l) in y[fi..i].iter_mut().zip(&row[..i - fi]) {
                *yk -= l * xi;
            }
        }
        for (new, &old) in self.perm.iter().enumerate() {
            b[old] = y[new];
        }
    }
}

/// Reverse Cuthill-McKee ordering; returns `perm[new] = old`.
pub fn rcm_ordering(a: &CsrMatrix<f64>) -> Vec<usize> {
    let n = a.nrows();
    let adj: Vec<Vec<usize>> = a
        .row_iter()
        .enumerate()
        .map(|(i, row)| row.col_indices().iter().copied().filter(|&j| j != i).collect())
        .collect();
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let seed = (0..n)
            .filter(|&i| !visited[i])
            .min_by_key(|&i| (degree[i], i))
            .expect("unvisited node exists");
        let root = pseudo_peripheral(&adj, &degree, seed);
        visited[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (degree[w], w));
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

fn bfs_levels(adj: &[Vec<usize>], root: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    seen[root] = true;
    let mut levels = vec![vec![root]];
    loop {
        let mut next = Vec::new();
        for &v in levels.last().expect("nonempty") {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            return levels;
        }
        levels.push(next);
    }
}

fn pseudo_peripheral(adj: &[Vec<usize>], degree: &[usize], start: usize) -> usize {
    let mut root = start;
    let mut ecc = bfs_levels(adj, root).len();
    for _ in 0..10 {
        let levels = bfs_levels(adj, root);
        let candidate = *levels
            .last()
            .expect("nonempty")
            .iter()
            .min_by_key(|&&v| (degree[v], v))
            .expect("nonempty level");
        let e = bfs_levels(adj, candidate).len();
        if e > ecc {
            ecc = e;
            root = candidate;
        } else {
            break;
        }
    }
    root
}
