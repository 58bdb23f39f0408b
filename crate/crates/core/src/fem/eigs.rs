//! Neumann and mixed Dirichlet-Neumann eigenvalues on a mesh and its refinement.

use nalgebra::DMatrix;

use super::assemble::{assemble, restrict};
use super::mesh::TriMesh;
use crate::error::{Error, Result};
use crate::linalg::{smallest_eigenpairs_from, EigenOptions, EigenPairs};
use crate::spectrum::EigenSpectrum;

/// Largest number of requested eigenvalues.
pub const MAX_EIGS: usize = 40;

/// Eigenpairs computed on `base` and on its red refinement; eigenvectors live on `mesh`.
#[derive(Debug, Clone)]
pub struct FemSpectrum {
    pub spectrum: EigenSpectrum,
    /// The refined mesh carrying the eigenvectors.
    pub mesh: TriMesh,
    /// Node count of the base mesh.
    pub base_nodes: usize,
}

/// `μ_0 = 0 ≤ μ_1 ≤ … ≤ μ_m` of the Neumann problem, ignoring any Dirichlet tags.
pub fn neumann_eigs(mesh: &TriMesh, m: usize) -> Result<FemSpectrum> {
    neumann_eigs_with(mesh, m, &EigenOptions::default())
}

pub fn neumann_eigs_with(mesh: &TriMesh, m: usize, opts: &EigenOptions) -> Result<FemSpectrum> {
    if m > MAX_EIGS {
        return Err(Error::OutOfRange(format!("m = {m} exceeds {MAX_EIGS}")));
    }
    let mut neumann = mesh.clone();
    neumann.set_dirichlet_sides(&[]);
    two_level(&neumann, m + 1, opts)
}

/// The `m` smallest eigenvalues `λ_1 ≤ … ≤ λ_m` with Dirichlet conditions on the
/// tagged sides; index 0 of the result is `λ_1`. Without Dirichlet sides this is
/// [`neumann_eigs`].
pub fn mixed_eigs(mesh: &TriMesh, m: usize) -> Result<FemSpectrum> {
    mixed_eigs_with(mesh, m, &EigenOptions::default())
}

pub fn mixed_eigs_with(mesh: &TriMesh, m: usize, opts: &EigenOptions) -> Result<FemSpectrum> {
    if mesh.dirichlet_sides().is_empty() {
        return neumann_eigs_with(mesh, m, opts);
    }
    if m == 0 || m > MAX_EIGS {
        return Err(Error::OutOfRange(format!("m = {m} outside [1, {MAX_EIGS}]")));
    }
    two_level(mesh, m, opts)
}

fn two_level(mesh: &TriMesh, count: usize, opts: &EigenOptions) -> Result<FemSpectrum> {
    let coarse = solve(mesh, count, opts, None)?;
    let (fine_mesh, parents) = mesh.refine_with_parents()?;
    let start = prolongate(&coarse.vectors, &parents);
    let fine = solve(&fine_mesh, count, opts, Some(&start))?;
    let spectrum = EigenSpectrum::from_pair(coarse.values, fine.values, fine.vectors, fine.residuals);
    Ok(FemSpectrum {
        spectrum,
        mesh: fine_mesh,
        base_nodes: mesh.num_nodes(),
    })
}

/// Linear interpolation of nodal vectors onto the refined mesh.
fn prolongate(v: &DMatrix<f64>, parents: &[[usize; 2]]) -> DMatrix<f64> {
    let n = v.nrows();
    DMatrix::from_fn(n + parents.len(), v.ncols(), |i, c| {
        if i < n {
            v[(i, c)]
        } else {
            let [a, b] = parents[i - n];
            0.5 * (v[(a, c)] + v[(b, c)])
        }
    })
}

/// Eigenpairs on one mesh; vectors are expanded to all nodes (zero on Dirichlet nodes).
fn solve(
    mesh: &TriMesh,
    count: usize,
    opts: &EigenOptions,
    start: Option<&DMatrix<f64>>,
) -> Result<EigenPairs> {
    let (k, m) = assemble(mesh)?;
    let fixed = mesh.dirichlet_nodes();
    if !fixed.iter().any(|&f| f) {
        return smallest_eigenpairs_from(&k, &m, count, opts, start);
    }
    let keep: Vec<bool> = fixed.iter().map(|f| !f).collect();
    let (kr, kept) = restrict(&k, &keep);
    let (mr, _) = restrict(&m, &keep);
    if kept.len() < count {
        return Err(Error::Invalid(format!(
            "only {} free nodes for {count} eigenpairs",
            kept.len()
        )));
    }
    let start_r = start.map(|s| DMatrix::from_fn(kept.len(), s.ncols(), |i, c| s[(kept[i], c)]));
    let pairs = smallest_eigenpairs_from(&kr, &mr, count, opts, start_r.as_ref())?;
    let mut full = DMatrix::zeros(mesh.num_nodes(), count);
    for (i, &node) in kept.iter().enumerate() {
        for c in 0..count {
            full[(node, c)] = pairs.vectors[(i, c)];
        }
    }
    Ok(EigenPairs {
        vectors: full,
        ..pairs
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::mesh::triangulate;
    use crate::geometry::shapes;
    use std::f64::consts::PI;

    #[test]
    fn unit_square_neumann() {
        let mesh = triangulate(&shapes::rectangle(1.0, 1.0), 0.05).unwrap();
        let s = neumann_eigs(&mesh, 4).unwrap().spectrum;
        let pi2 = PI * PI;
        assert!(s.eigenvalues[0].abs() < 1e-8);
        for (i, want) in [(1, pi2), (2, pi2), (3, 2.0 * pi2), (4, 4.0 * pi2)] {
            let got = s.eigenvalues[i];
            assert!(
                (got - want).abs() <= s.error_estimates[i].max(1e-6 * want),
                "μ_{i} = {got} ± {} vs {want}",
                s.error_estimates[i]
            );
        }
        assert!(s.clusters.contains(&vec![1, 2]), "{:?}", s.clusters);
        assert!(s.residuals.iter().all(|&r| r <= 1e-8));
        let v0 = s.vectors.column(0);
        let (lo, hi) = (v0.min(), v0.max());
        assert!((hi - lo) <= 1e-8 * hi.abs());
    }

    #[test]
    fn quarter_wave_mixed() {
        let mut mesh = triangulate(&shapes::rectangle(1.0, 0.5), 0.05).unwrap();
        mesh.set_dirichlet_where(|n| n.x > 0.5);
        let s = mixed_eigs(&mesh, 2).unwrap().spectrum;
        let want = PI * PI / 4.0;
        assert!((s.eigenvalues[0] - want).abs() <= s.error_estimates[0].max(1e-6), "{:?}", s.eigenvalues);
    }

    #[test]
    fn all_dirichlet_square() {
        let mut mesh = triangulate(&shapes::rectangle(1.0, 1.0), 0.05).unwrap();
        mesh.set_dirichlet_where(|_| true);
        let s = mixed_eigs(&mesh, 1).unwrap().spectrum;
        let want = 2.0 * PI * PI;
        assert!((s.eigenvalues[0] - want).abs() <= s.error_estimates[0], "{:?} ± {:?}", s.eigenvalues, s.error_estimates);
    }
}
