//! P1 stiffness and mass matrices.

use nalgebra_sparse::{CooMatrix, CsrMatrix};

use super::mesh::TriMesh;
use crate::error::{Error, Result};
use crate::geometry::polygon::{cross, Vec2};

/// Gradients of the three barycentric coordinates and the area of a triangle.
pub fn p1_gradients(a: Vec2, b: Vec2, c: Vec2) -> ([Vec2; 3], f64) {
    let area = 0.5 * cross(b - a, c - a);
    let rot = |v: Vec2| Vec2::new(-v.y, v.x);
    let g = [rot(c - b), rot(a - c), rot(b - a)].map(|v| v / (2.0 * area));
    (g, area)
}

/// Stiffness `K_ij = ∫ ∇φ_i·∇φ_j` and consistent mass `M_ij = ∫ φ_i φ_j`.
pub fn assemble(mesh: &TriMesh) -> Result<(CsrMatrix<f64>, CsrMatrix<f64>)> {
    let n = mesh.num_nodes();
    let mut k = CooMatrix::new(n, n);
    let mut m = CooMatrix::new(n, n);
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let [a, b, c] = mesh.vertices_of(t);
        let (g, area) = p1_gradients(a, b, c);
        if !(area > 0.0) {
            return Err(Error::Mesh(format!("inverted triangle {t}: {tri:?}")));
        }
        for i in 0..3 {
            for j in 0..3 {
                k.push(tri[i], tri[j], area * g[i].dot(&g[j]));
                let w = if i == j { 2.0 } else { 1.0 };
                m.push(tri[i], tri[j], area * w / 12.0);
            }
        }
    }
    Ok((CsrMatrix::from(&k), CsrMatrix::from(&m)))
}

/// Restriction of `a` to the rows and columns with `keep[i]`; also returns the kept indices.
pub fn restrict(a: &CsrMatrix<f64>, keep: &[bool]) -> (CsrMatrix<f64>, Vec<usize>) {
    let kept: Vec<usize> = (0..keep.len()).filter(|&i| keep[i]).collect();
    let mut map = vec![usize::MAX; keep.len()];
    for (new, &old) in kept.iter().enumerate() {
        map[old] = new;
    }
    let mut coo = CooMatrix::new(kept.len(), kept.len());
    for (i, row) in a.row_iter().enumerate() {
        if !keep[i] {
            continue;
        }
        for (&j, &v) in row.col_indices().iter().zip(row.values()) {
            if keep[j] {
                coo.push(map[i], map[j], v);
            }
        }
    }
    (CsrMatrix::from(&coo), kept)
}
