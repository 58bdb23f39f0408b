//! Weighted P1 elements on uniform grids of `[0, 1]`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use serde::Serialize;

use super::weight::{split, Weight, GAUSS2};
use super::WeightedSegment;
use crate::check::{Inequality, TOLERANCE_FACTOR};
use crate::error::{Error, Result};
use crate::fem::assemble::restrict;
use crate::fem::eigs::MAX_EIGS;
use crate::linalg::{smallest_eigenpairs, EigenOptions};
use crate::spectrum::EigenSpectrum;

/// Smallest admissible grid.
pub const MIN_NODES: usize = 200;
/// Grid used when the caller does not choose one.
pub const DEFAULT_NODES: usize = 1000;
/// Lower bound on `H` required by the Liouville transform.
pub const MIN_WEIGHT: f64 = 1e-6;
/// Samples of the potential kept for reporting.
const POTENTIAL_SAMPLES: usize = 1025;

/// Coefficients `(p, q, r)` of `-(p u')' + q u = λ r u`.
type Coefficients<'a> = &'a dyn Fn(f64) -> [f64; 3];

/// Stiffness `∫ p u'v' + q u v` and mass `∫ r u v` on `elements` equal cells, with
/// 2-point Gauss quadrature on each cell piece between kinks of the coefficients.
fn assemble_1d(elements: usize, breaks: &[f64], coef: Coefficients) -> (CsrMatrix<f64>, CsrMatrix<f64>) {
    let n = elements + 1;
    let mut k = CooMatrix::new(n, n);
    let mut m = CooMatrix::new(n, n);
    let len = 1.0 / elements as f64;
    for e in 0..elements {
        let (a, b) = (e as f64 * len, (e + 1) as f64 * len);
        let mut kl = [[0.0; 2]; 2];
        let mut ml = [[0.0; 2]; 2];
        for (c, d) in split(a, b, breaks) {
            let (mid, half) = (0.5 * (c + d), 0.5 * (d - c));
            for &(g, w) in &GAUSS2 {
                let x = mid + half * g;
                let [p, q, r] = coef(x);
                let phi = [(b - x) / len, (x - a) / len];
                let dphi = [-1.0 / len, 1.0 / len];
                for i in 0..2 {
                    for j in 0..2 {
                        kl[i][j] += half * w * (p * dphi[i] * dphi[j] + q * phi[i] * phi[j]);
                        ml[i][j] += half * w * r * phi[i] * phi[j];
                    }
                }
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                k.push(e + i, e + j, kl[i][j]);
                m.push(e + i, e + j, ml[i][j]);
            }
        }
    }
    (CsrMatrix::from(&k), CsrMatrix::from(&m))
}

/// Solves on `elements` and `2 × elements` cells and extrapolates; eigenvectors are
/// nodal values on the finer grid (zero at Dirichlet endpoints).
fn two_level(
    elements: usize,
    breaks: &[f64],
    coef: Coefficients,
    count: usize,
    dirichlet: bool,
) -> Result<EigenSpectrum> {
    let opts = EigenOptions::default();
    let mut levels = Vec::with_capacity(2);
    for cells in [elements, 2 * elements] {
        let (k, m) = assemble_1d(cells, breaks, coef);
        let n = cells + 1;
        let keep: Vec<bool> = (0..n).map(|i| !dirichlet || (i > 0 && i + 1 < n)).collect();
        let (k, kept) = restrict(&k, &keep);
        let (m, _) = restrict(&m, &keep);
        let pairs = smallest_eigenpairs(&k, &m, count, &opts)?;
        let mut vectors = DMatrix::zeros(n, count);
        for (row, &i) in kept.iter().enumerate() {
            vectors.row_mut(i).copy_from(&pairs.vectors.row(row));
        }
        levels.push((pairs.values, vectors, pairs.residuals));
    }
    let (fine, vectors, residuals) = levels.pop().expect("two levels");
    let (coarse, _, _) = levels.pop().expect("two levels");
    Ok(EigenSpectrum::from_pair(coarse, fine, vectors, residuals))
}

fn check_sizes(m: usize, nodes: usize) -> Result<()> {
    if m > MAX_EIGS {
        return Err(Error::OutOfRange(format!("m = {m} exceeds {MAX_EIGS}")));
    }
    if nodes < MIN_NODES {
        return Err(Error::OutOfRange(format!("{nodes} nodes, need at least {MIN_NODES}")));
    }
    Ok(())
}

/// `μ_0 = 0 ≤ μ_1 ≤ … ≤ μ_m` of `(Hψ')' + μHψ = 0` with natural boundary conditions,
/// on a uniform grid of `nodes` points and its halving.
pub fn sl_eigs(seg: &WeightedSegment, m: usize, nodes: usize) -> Result<EigenSpectrum> {
    check_sizes(m, nodes)?;
    let coef = |x: f64| {
        let h = seg.eval(x);
        [h, 0.0, h]
    };
    two_level(nodes - 1, &seg.weight.breakpoints(), &coef, m + 1, false)
}

/// `-w'' + V w = λ w` on `(0, 1)` with `w(0) = w(1) = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct SchroedingerProblem {
    /// Uniform sample abscissae including the endpoints.
    pub grid: Vec<f64>,
    /// `V` at the sample abscissae.
    pub potential: Vec<f64>,
    pub min_potential: f64,
    /// Weight whose Liouville transform defines `V` exactly between samples.
    #[serde(skip)]
    source: Option<Weight>,
}

impl SchroedingerProblem {
    /// A potential given by a function, interpolated linearly between uniform samples.
    pub fn from_fn(v: impl Fn(f64) -> f64, samples: usize) -> Result<Self> {
        if samples < 2 {
            return Err(Error::Invalid("need at least two potential samples".into()));
        }
        Ok(Self::sample(v, samples, None))
    }

    fn sample(v: impl Fn(f64) -> f64, samples: usize, source: Option<Weight>) -> Self {
        let grid: Vec<f64> = (0..samples).map(|i| i as f64 / (samples - 1) as f64).collect();
        let potential: Vec<f64> = grid.iter().map(|&x| v(x)).collect();
        let min_potential = potential.iter().copied().fold(f64::INFINITY, f64::min);
        Self {
            grid,
            potential,
            min_potential,
            source,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if let Some(w) = &self.source {
            return liouville_potential(w, x);
        }
        let n = self.grid.len() - 1;
        let s = x.clamp(0.0, 1.0) * n as f64;
        let i = (s.floor() as usize).min(n - 1);
        let f = s - i as f64;
        self.potential[i] * (1.0 - f) + self.potential[i + 1] * f
    }
}

/// `V = ¾(h'/h)² - h''/(2h)`, invariant under scaling of `h`.
fn liouville_potential(w: &Weight, x: f64) -> f64 {
    let [h, d, dd] = w.derivs(x);
    let l = d / h;
    0.75 * l * l - 0.5 * dd / h
}

/// The Dirichlet Schrödinger operator unitarily equivalent to the weighted problem on
/// `w = √H ψ'`. Requires a C² weight with `H ≥ 1e-6`.
pub fn liouville_transform(seg: &WeightedSegment) -> Result<SchroedingerProblem> {
    if !seg.weight.is_smooth() {
        return Err(Error::Hypothesis(
            "weight is only piecewise linear; smooth it first (WeightedSegment::smoothed) or use sl_eigs".into(),
        ));
    }
    let min = seg.weight.min_value() / seg.normalization;
    if !(min >= MIN_WEIGHT) {
        return Err(Error::Hypothesis(format!(
            "normalized weight drops to {min:e} < {MIN_WEIGHT:e}; the potential is singular, use sl_eigs"
        )));
    }
    let w = seg.weight.clone();
    Ok(SchroedingerProblem::sample(
        |x| liouville_potential(&w, x),
        POTENTIAL_SAMPLES,
        Some(seg.weight.clone()),
    ))
}

/// `λ_1 ≤ … ≤ λ_m` of the Dirichlet problem; index 0 holds `λ_1`, which pairs with
/// `μ_1` (index 1 of [`sl_eigs`]).
pub fn dirichlet_schroedinger_eigs(prob: &SchroedingerProblem, m: usize, nodes: usize) -> Result<EigenSpectrum> {
    check_sizes(m, nodes)?;
    if m == 0 {
        return Err(Error::OutOfRange("m must be at least 1".into()));
    }
    let coef = |x: f64| [1.0, prob.eval(x), 1.0];
    two_level(nodes - 1, &[], &coef, m, true)
}

#[derive(Debug, Clone, Serialize)]
pub struct PiSquaredReport {
    pub log_concave: bool,
    /// Reason the check did not run.
    pub skipped: Option<String>,
    /// `μ_k ≥ k²π²` for `k = 1..=m`.
    pub rows: Vec<Inequality>,
    pub pass: bool,
}

/// `μ_k(N) ≥ k²π²` for `k ≤ m`, with tolerance three times the error estimate.
pub fn pi_squared_bound_check(seg: &WeightedSegment, m: usize) -> Result<PiSquaredReport> {
    pi_squared_bound_check_with(seg, m, DEFAULT_NODES, TOLERANCE_FACTOR)
}

pub fn pi_squared_bound_check_with(
    seg: &WeightedSegment,
    m: usize,
    nodes: usize,
    factor: f64,
) -> Result<PiSquaredReport> {
    if !seg.log_concave {
        return Ok(PiSquaredReport {
            log_concave: false,
            skipped: Some("not_log_concave".into()),
            rows: Vec::new(),
            pass: true,
        });
    }
    let spec = sl_eigs(seg, m, nodes)?;
    let rows: Vec<Inequality> = (1..=m)
        .map(|k| {
            let bound = (k as f64 * PI).powi(2);
            Inequality::at_least(
                format!("mu_{k}(N) >= {k}^2 pi^2"),
                spec.eigenvalues[k],
                bound,
                factor * spec.error_estimates[k],
            )
        })
        .collect();
    let pass = rows.iter().all(|r| r.holds);
    Ok(PiSquaredReport {
        log_concave: true,
        skipped: None,
        rows,
        pass,
    })
}
