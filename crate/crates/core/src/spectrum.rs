//! Eigenvalue lists with Richardson error estimates and multiplicity clusters,
//! shared by the planar and one-dimensional solvers.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::linalg::richardson;

/// Convergence order of P1 eigenvalues in the mesh size.
pub const P1_ORDER: f64 = 2.0;
/// Floor of the relative cluster tolerance.
pub const CLUSTER_REL_FLOOR: f64 = 1e-6;
/// Error estimates are multiplied by this factor when forming clusters.
pub const CLUSTER_ERROR_FACTOR: f64 = 3.0;

#[derive(Debug, Clone, Serialize)]
pub struct EigenSpectrum {
    /// Best estimates: Richardson extrapolation of the coarse/fine pair.
    pub eigenvalues: Vec<f64>,
    /// Estimated absolute error of each extrapolated eigenvalue, `|fine - coarse|`.
    pub error_estimates: Vec<f64>,
    /// Eigenvalues on the coarse discretization.
    pub coarse: Vec<f64>,
    /// Eigenvalues on the halved discretization.
    pub fine: Vec<f64>,
    /// Groups of two or more indices whose eigenvalues agree within the cluster tolerance.
    pub clusters: Vec<Vec<usize>>,
    /// Relative residuals `‖Ku - μMu‖/‖Mu‖` on the fine discretization.
    pub residuals: Vec<f64>,
    /// Eigenvectors on the fine discretization, `M`-orthonormal columns.
    #[serde(skip)]
    pub vectors: DMatrix<f64>,
}

impl EigenSpectrum {
    /// Combines coarse and fine eigenvalues (paired by index) into a spectrum.
    pub fn from_pair(
        coarse: Vec<f64>,
        fine: Vec<f64>,
        vectors: DMatrix<f64>,
        residuals: Vec<f64>,
    ) -> Self {
        let eigenvalues: Vec<f64> = coarse
            .iter()
            .zip(&fine)
            .map(|(&c, &f)| richardson(c, f, P1_ORDER))
            .collect();
        let error_estimates: Vec<f64> = coarse.iter().zip(&fine).map(|(c, f)| (f - c).abs()).collect();
        let clusters = clusters(&eigenvalues, &error_estimates);
        Self {
            eigenvalues,
            error_estimates,
            coarse,
            fine,
            clusters,
            residuals,
            vectors,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Error estimate relative to `max(|μ|, 1)`.
    pub fn relative_error(&self, i: usize) -> f64 {
        self.error_estimates[i] / self.eigenvalues[i].abs().max(1.0)
    }

    /// The cluster containing `i`, if any.
    pub fn cluster_of(&self, i: usize) -> Option<&[usize]> {
        self.clusters.iter().find(|c| c.contains(&i)).map(Vec::as_slice)
    }
}

/// Single-linkage grouping of sorted eigenvalues: neighbours join a cluster when their
/// gap is within `max(3 × error, 1e-6 × |μ|)` of either member.
pub fn clusters(values: &[f64], errors: &[f64]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize];
    for i in 1..values.len() {
        let tol = |j: usize| {
            (CLUSTER_ERROR_FACTOR * errors[j]).max(CLUSTER_REL_FLOOR * values[j].abs().max(1.0))
        };
        if (values[i] - values[i - 1]).abs() <= tol(i).max(tol(i - 1)) {
            current.push(i);
        } else {
            if current.len() > 1 {
                out.push(std::mem::take(&mut current));
            }
            current = vec![i];
        }
    }
    if current.len() > 1 {
        out.push(current);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clusters_group_close_values() {
        let v = [0.0, 9.8696, 9.8697, 19.74, 39.48, 39.4801];
        let e = [0.0, 1e-3, 1e-3, 1e-3, 1e-4, 1e-4];
        assert_eq!(clusters(&v, &e), vec![vec![1, 2], vec![4, 5]]);
    }

    #[test]
    fn extrapolation() {
        let s = EigenSpectrum::from_pair(vec![10.0], vec![9.0], DMatrix::zeros(1, 1), vec![0.0]);
        assert!((s.eigenvalues[0] - 26.0 / 3.0).abs() < 1e-14);
        assert_eq!(s.error_estimates[0], 1.0);
    }
}
