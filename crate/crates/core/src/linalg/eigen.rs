//! Smallest eigenpairs of the symmetric-definite pencil `K u = μ M u`.
//!
//! Small problems are reduced to a dense standard problem through the Cholesky
//! factor of `M`. Larger ones use block shift-invert subspace iteration with a
//! negative shift `σ`, so that `K - σM` is positive definite even when `K` is
//! singular, followed by Rayleigh-Ritz in the `M` inner product.

use nalgebra::{DMatrix, SymmetricEigen};
use nalgebra_sparse::CsrMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::envelope::EnvelopeCholesky;
use crate::error::{Error, Result};

/// Relative change of Ritz values between sweeps below which they count as settled.
const VALUE_SETTLED: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Shift of the inverted operator; must be below the smallest eigenvalue.
    pub shift: f64,
    /// Converged when `‖Ku - μMu‖ <= tol ‖Mu‖`.
    pub tol: f64,
    /// Once residuals stop decreasing, a residual below `accept` is taken as converged,
    /// as are Ritz values that no longer change.
    pub accept: f64,
    pub max_iter: usize,
    /// Problems with at most this many unknowns are solved densely.
    pub dense_limit: usize,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            shift: -1.0,
            tol: 1e-10,
            accept: 1e-8,
            max_iter: 400,
            dense_limit: 500,
            seed: 0x5eed,
        }
    }
}

/// Eigenpairs in ascending order; columns of `vectors` are `M`-orthonormal.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
    /// Relative residual per pair (see [`residuals`]).
    pub residuals: Vec<f64>,
    /// Subspace iterations used (0 for the dense path).
    pub iterations: usize,
}

/// `A X` for a sparse `A` and dense `X`.
pub fn csr_mul(a: &CsrMatrix<f64>, x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut y = DMatrix::zeros(a.nrows(), x.ncols());
    for c in 0..x.ncols() {
        let xc = x.column(c);
        let mut yc = y.column_mut(c);
        for (i, row) in a.row_iter().enumerate() {
            yc[i] = row
                .col_indices()
                .iter()
                .zip(row.values())
                .map(|(&j, v)| v * xc[j])
                .sum();
        }
    }
    y
}

/// `K - s M` for matrices sharing a sparsity pattern or not.
pub fn shifted(k: &CsrMatrix<f64>, m: &CsrMatrix<f64>, s: f64) -> CsrMatrix<f64> {
    k - &(m * s)
}

pub fn to_dense(a: &CsrMatrix<f64>) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(a.nrows(), a.ncols());
    for (i, row) in a.row_iter().enumerate() {
        for (&j, &v) in row.col_indices().iter().zip(row.values()) {
            d[(i, j)] += v;
        }
    }
    d
}

/// The `count` smallest eigenpairs of `K u = μ M u` (`M` positive definite).
pub fn smallest_eigenpairs(
    k: &CsrMatrix<f64>,
    m: &CsrMatrix<f64>,
    count: usize,
    opts: &EigenOptions,
) -> Result<EigenPairs> {
    smallest_eigenpairs_from(k, m, count, opts, None)
}

/// As [`smallest_eigenpairs`], seeding the iterative solver with the columns of `start`
/// (for example eigenvectors interpolated from a coarser mesh).
pub fn smallest_eigenpairs_from(
    k: &CsrMatrix<f64>,
    m: &CsrMatrix<f64>,
    count: usize,
    opts: &EigenOptions,
    start: Option<&DMatrix<f64>>,
) -> Result<EigenPairs> {
    let n = k.nrows();
    if count == 0 || count > n {
        return Err(Error::Invalid(format!(
            "requested {count} eigenpairs of a problem with {n} unknowns"
        )));
    }
    let mut pairs = if n <= opts.dense_limit || count * 4 > n {
        dense_eigenpairs(k, m, count)?
    } else {
        subspace_iteration(k, m, count, opts, start)?
    };
    fix_signs(&mut pairs.vectors);
    pairs.residuals = residuals(k, m, &pairs.values, &pairs.vectors);
    Ok(pairs)
}

fn dense_eigenpairs(k: &CsrMatrix<f64>, m: &CsrMatrix<f64>, count: usize) -> Result<EigenPairs> {
    let kd = to_dense(k);
    let md = to_dense(m);
    let chol = md.cholesky().ok_or(Error::NotPositiveDefinite {
        index: 0,
        value: f64::NAN,
    })?;
    let l = chol.l();
    // C = L⁻¹ K L⁻ᵀ
    let linv_k = l
        .solve_lower_triangular(&kd)
        .expect("Cholesky factor has a nonzero diagonal");
    let c = l
        .solve_lower_triangular(&linv_k.transpose())
        .expect("Cholesky factor has a nonzero diagonal");
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lt = l.transpose();
    let mut vectors = DMatrix::zeros(k.nrows(), count);
    let mut values = Vec::with_capacity(count);
    for (c, &idx) in order.iter().take(count).enumerate() {
        values.push(eig.eigenvalues[idx]);
        let y = eig.eigenvectors.column(idx).into_owned();
        let u = lt
            .solve_upper_triangular(&y)
            .expect("Cholesky factor has a nonzero diagonal");
        vectors.set_column(c, &u);
    }
    Ok(EigenPairs {
        values,
        vectors,
        residuals: Vec::new(),
        iterations: 0,
    })
}

/// Rayleigh-Ritz on span(Y): returns Ritz values (ascending), `X = Y T Q`, `KX`, `MX`.
fn rayleigh_ritz(
    y: &DMatrix<f64>,
    ky: &DMatrix<f64>,
    my: &DMatrix<f64>,
) -> Result<(Vec<f64>, DMatrix<f64>, DMatrix<f64>, DMatrix<f64>)> {
    let mr = y.transpose() * my;
    let mr = (&mr + mr.transpose()) * 0.5;
    let em = SymmetricEigen::new(mr);
    let dmax = em.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..em.eigenvalues.len())
        .filter(|&i| em.eigenvalues[i] > 1e-13 * dmax)
        .collect();
    if keep.is_empty() {
        return Err(Error::NoConvergence("search space collapsed".into()));
    }
    let mut t = DMatrix::zeros(y.ncols(), keep.len());
    for (c, &i) in keep.iter().enumerate() {
        let s = 1.0 / em.eigenvalues[i].sqrt();
        t.set_column(c, &(em.eigenvectors.column(i) * s));
    }
    let kr = t.transpose() * (y.transpose() * ky) * &t;
    let kr = (&kr + kr.transpose()) * 0.5;
    let ek = SymmetricEigen::new(kr);
    let mut order: Vec<usize> = (0..ek.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| ek.eigenvalues[a].total_cmp(&ek.eigenvalues[b]));
    let mut q = DMatrix::zeros(keep.len(), keep.len());
    for (c, &i) in order.iter().enumerate() {
        q.set_column(c, &ek.eigenvectors.column(i));
    }
    let tq = t * q;
    let values = order.iter().map(|&i| ek.eigenvalues[i]).collect();
    Ok((values, y * &tq, ky * &tq, my * &tq))
}

fn subspace_iteration(
    k: &CsrMatrix<f64>,
    m: &CsrMatrix<f64>,
    count: usize,
    opts: &EigenOptions,
    start: Option<&DMatrix<f64>>,
) -> Result<EigenPairs> {
    let n = k.nrows();
    let block = (2 * count).max(count + 8).min(n);
    let factor = EnvelopeCholesky::factor(&shifted(k, m, opts.shift))?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x = DMatrix::from_fn(n, block, |_, _| rng.gen_range(-1.0..1.0));
    if let Some(s) = start {
        let c = s.ncols().min(block);
        if s.nrows() != n {
            return Err(Error::Invalid("start block has the wrong number of rows".into()));
        }
        x.columns_mut(0, c).copy_from(&s.columns(0, c));
    }
    let mut mx = csr_mul(m, &x);
    let mut history = Vec::new();
    let mut previous: Vec<f64> = Vec::new();
    for it in 1..=opts.max_iter {
        let mut y = mx.clone();
        for mut col in y.column_iter_mut() {
            factor.solve_in_place(col.as_mut_slice());
        }
        let ky = csr_mul(k, &y);
        let my = csr_mul(m, &y);
        let (values, xn, kx, mxn) = rayleigh_ritz(&y, &ky, &my)?;
        if values.len() < count {
            return Err(Error::NoConvergence("search space lost rank".into()));
        }
        let mut worst: f64 = 0.0;
        for c in 0..count {
            let r = kx.column(c) - mxn.column(c) * values[c];
            worst = worst.max(r.norm() / mxn.column(c).norm());
        }
        mx = mxn;
        // On strongly graded meshes the residual stagnates at a rounding floor of order
        // eps·max_i(Σ|K_ij| / Σ M_ij); past that point only the Ritz values are checked.
        let stalled = history.len() >= 3 && worst > 0.5 * history[history.len() - 3];
        history.push(worst);
        let settled = previous.len() >= count
            && (0..count).all(|c| {
                (values[c] - previous[c]).abs() <= VALUE_SETTLED * values[c].abs().max(1.0)
            });
        previous = values[..count].to_vec();
        if worst <= opts.tol || (stalled && (worst <= opts.accept || settled)) {
            return Ok(EigenPairs {
                values: values[..count].to_vec(),
                vectors: xn.columns(0, count).into_owned(),
                residuals: Vec::new(),
                iterations: it,
            });
        }
        if mx.ncols() < block {
            // refill lost directions with fresh random vectors
            let missing = block - mx.ncols();
            let extra = DMatrix::from_fn(n, missing, |_, _| rng.gen_range(-1.0..1.0));
            let mextra = csr_mul(m, &extra);
            mx = stack(&mx, &mextra);
        }
    }
    Err(Error::NoConvergence(format!(
        "subspace iteration exceeded {} iterations",
        opts.max_iter
    )))
}

fn stack(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

/// Makes the largest-magnitude entry of each column positive.
fn fix_signs(v: &mut DMatrix<f64>) {
    for mut col in v.column_iter_mut() {
        let mut best = 0usize;
        for i in 0..col.len() {
            if col[i].abs() > col[best].abs() + 1e-12 * col[best].abs() {
                best = i;
            }
        }
        if col[best] < 0.0 {
            col.neg_mut();
        }
    }
}

/// Relative residuals `‖Ku - μMu‖ / ‖Mu‖`.
pub fn residuals(
    k: &CsrMatrix<f64>,
    m: &CsrMatrix<f64>,
    values: &[f64],
    vectors: &DMatrix<f64>,
) -> Vec<f64> {
    let kv = csr_mul(k, vectors);
    let mv = csr_mul(m, vectors);
    values
        .iter()
        .enumerate()
        .map(|(c, &mu)| {
            (kv.column(c) - mv.column(c) * mu).norm() / mv.column(c).norm()
        })
        .collect()
}
