//! Pointwise quantities of computed eigenfunctions: range, gradients, chord averages.

use serde::Serialize;

use super::assemble::p1_gradients;
use super::eigs::FemSpectrum;
use super::mesh::TriMesh;
use crate::error::{Error, Result};
use crate::geometry::calipers;
use crate::geometry::profile::SliceProfile;

/// Number of uniform vertical strips in [`EigenfunctionProbe::strip_gradient`].
pub const STRIPS: usize = 20;

/// Thin-body estimates are only claimed below this width.
pub const THIN_WIDTH: f64 = 1.0 / 40.0;

#[derive(Debug, Clone, Serialize)]
pub struct EigenfunctionProbe {
    pub index: usize,
    pub eigenvalue: f64,
    /// After scaling so that `sup u = 1 >= -inf u`.
    pub sup: f64,
    pub inf: f64,
    /// `sup u / (-inf u)`.
    pub range_ratio: f64,
    /// Largest `|∂_y u|` over all triangles.
    pub max_dy: f64,
    /// Largest `|∇u|` over triangles meeting `x <= ε` and `x >= 1 - ε` (ε = body width).
    pub endpoint_gradient: [f64; 2],
    /// Largest `|∇u|` in each of [`STRIPS`] uniform strips of `[x_min, x_max]`.
    pub strip_gradient: Vec<f64>,
    /// Abscissa range of the zero set, if `u` changes sign.
    pub nodal_range: Option<[f64; 2]>,
    pub width: f64,
}

/// Nodal values of eigenfunction `index`, scaled so that `sup u = 1 >= -inf u`.
pub fn normalized_eigenfunction(fs: &FemSpectrum, index: usize) -> Result<Vec<f64>> {
    if index >= fs.spectrum.vectors.ncols() {
        return Err(Error::Invalid(format!("no eigenfunction with index {index}")));
    }
    let col = fs.spectrum.vectors.column(index);
    let (lo, hi) = (col.min(), col.max());
    let (sign, top) = if hi >= -lo { (1.0, hi) } else { (-1.0, -lo) };
    if top <= 0.0 {
        return Err(Error::Invalid(format!("eigenfunction {index} vanishes")));
    }
    Ok(col.iter().map(|v| sign * v / top).collect())
}

pub fn probe_eigenfunction(fs: &FemSpectrum, index: usize) -> Result<EigenfunctionProbe> {
    let mesh = &fs.mesh;
    let u = normalized_eigenfunction(fs, index)?;
    let width = calipers::width(&mesh.polygon).length;
    let sup = u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let inf = u.iter().cloned().fold(f64::INFINITY, f64::min);
    let (x0, x1) = mesh
        .nodes
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.x), b.max(p.x)));
    let strip_w = (x1 - x0) / STRIPS as f64;
    let mut max_dy: f64 = 0.0;
    let mut ends = [0.0f64; 2];
    let mut strips = vec![0.0f64; STRIPS];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let v = mesh.vertices_of(t);
        let (g, _) = p1_gradients(v[0], v[1], v[2]);
        let grad = g[0] * u[tri[0]] + g[1] * u[tri[1]] + g[2] * u[tri[2]];
        let gn = grad.norm();
        max_dy = max_dy.max(grad.y.abs());
        let tx0 = v.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
        let tx1 = v.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
        if tx0 <= x0 + width {
            ends[0] = ends[0].max(gn);
        }
        if tx1 >= x1 - width {
            ends[1] = ends[1].max(gn);
        }
        let s0 = (((tx0 - x0) / strip_w).floor() as usize).min(STRIPS - 1);
        let s1 = (((tx1 - x0) / strip_w).floor() as usize).min(STRIPS - 1);
        for s in &mut strips[s0..=s1] {
            *s = s.max(gn);
        }
    }
    let mut nodal: Option<[f64; 2]> = None;
    for tri in &mesh.triangles {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            if (u[a] < 0.0) != (u[b] < 0.0) {
                let s = u[a] / (u[a] - u[b]);
                let x = mesh.nodes[a].x + s * (mesh.nodes[b].x - mesh.nodes[a].x);
                nodal = Some(match nodal {
                    None => [x, x],
                    Some([lo, hi]) => [lo.min(x), hi.max(x)],
                });
            }
        }
    }
    Ok(EigenfunctionProbe {
        index,
        eigenvalue: fs.spectrum.eigenvalues[index],
        sup,
        inf,
        range_ratio: if inf < 0.0 { sup / -inf } else { f64::INFINITY },
        max_dy,
        endpoint_gradient: ends,
        strip_gradient: strips,
        nodal_range: nodal,
        width,
    })
}

/// `r = |u|_∞ V^{1/2} / ((1 + μ) |u|_2)` for eigenfunction `index`.
pub fn linf_ratio(fs: &FemSpectrum, index: usize) -> Result<f64> {
    if index >= fs.spectrum.vectors.ncols() {
        return Err(Error::Invalid(format!("no eigenfunction with index {index}")));
    }
    let u = fs.spectrum.vectors.columns(index, 1).into_owned();
    let (_, m) = super::assemble::assemble(&fs.mesh)?;
    let l2 = u.column(0).dot(&crate::linalg::csr_mul(&m, &u).column(0)).sqrt();
    let linf = u.amax();
    let mu = fs.spectrum.eigenvalues[index].max(0.0);
    Ok(linf_ratio_from(linf, l2, fs.mesh.area(), mu))
}

pub fn linf_ratio_from(linf: f64, l2: f64, volume: f64, mu: f64) -> f64 {
    linf * volume.sqrt() / ((1.0 + mu) * l2)
}

/// Chord integrals `(∫ u dy, chord length)` of a P1 function along the vertical lines `x = xs[i]`.
pub fn chord_integrals(mesh: &TriMesh, u: &[f64], xs: &[f64]) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); xs.len()];
    for tri in &mesh.triangles {
        let p = tri.map(|i| mesh.nodes[i]);
        let tx0 = p.iter().map(|q| q.x).fold(f64::INFINITY, f64::min);
        let tx1 = p.iter().map(|q| q.x).fold(f64::NEG_INFINITY, f64::max);
        let start = xs.partition_point(|&x| x < tx0);
        for (i, &x) in xs.iter().enumerate().skip(start) {
            if x > tx1 {
                break;
            }
            // intersection of the line with the triangle edges
            let mut pts: Vec<(f64, f64)> = Vec::with_capacity(3);
            for k in 0..3 {
                let (a, b) = (k, (k + 1) % 3);
                let (xa, xb) = (p[a].x, p[b].x);
                if (xa - x) * (xb - x) <= 0.0 && xa != xb {
                    let s = (x - xa) / (xb - xa);
                    let y = p[a].y + s * (p[b].y - p[a].y);
                    let val = u[tri[a]] + s * (u[tri[b]] - u[tri[a]]);
                    pts.push((y, val));
                }
            }
            if pts.len() < 2 {
                continue;
            }
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            let (lo, hi) = (pts[0], pts[pts.len() - 1]);
            let len = hi.0 - lo.0;
            out[i].0 += 0.5 * (lo.1 + hi.1) * len;
            out[i].1 += len;
        }
    }
    out
}

/// Both sides of `μ = ∫h(ũ')²/∫hũ² − ∫ηũ'/∫hũ²` for the first nonconstant eigenfunction.
#[derive(Debug, Clone, Serialize)]
pub struct EtaIdentity {
    pub mu: f64,
    /// `∫h(ũ')² / ∫hũ²`.
    pub rayleigh_term: f64,
    /// `∫ηũ' / ∫hũ²`.
    pub eta_term: f64,
    /// `|μ − (rayleigh_term − eta_term)| / μ`.
    pub mismatch: f64,
    /// `c_1 = ∫hû / ∫h`.
    pub c1: f64,
    pub max_abs_eta: f64,
    /// Largest relative difference between the meshed chord length and the profile.
    pub chord_error: f64,
    pub grid: usize,
    pub width: f64,
}

/// Default number of abscissae for [`eta_decomposition`].
pub const ETA_GRID: usize = 4000;

/// Forms `ū`, the clamped `û`, `ũ = û − c_1` and `η = hũ' + μ∫₀ˣhũ` from the first
/// nonconstant eigenfunction and evaluates both sides of the μ identity by quadrature.
/// Bodies of width `ε >= 1/40` are refused.
pub fn eta_decomposition(
    fs: &FemSpectrum,
    profile: &SliceProfile,
    grid: usize,
) -> Result<EtaIdentity> {
    let width = calipers::width(&fs.mesh.polygon).length;
    if width >= THIN_WIDTH {
        return Err(Error::Hypothesis(format!(
            "width {width} is not below 1/40; the identity is only studied for thin bodies"
        )));
    }
    eta_identity(fs, profile, grid, width)
}

pub(crate) fn eta_identity(
    fs: &FemSpectrum,
    profile: &SliceProfile,
    grid: usize,
    eps: f64,
) -> Result<EtaIdentity> {
    if fs.spectrum.len() < 2 {
        return Err(Error::Invalid("need the first nonconstant eigenpair".into()));
    }
    let u = normalized_eigenfunction(fs, 1)?;
    let mu = fs.spectrum.eigenvalues[1];
    // cell midpoints, nudged off any mesh node abscissa
    let dx = 1.0 / grid as f64;
    let xs: Vec<f64> = (0..grid)
        .map(|i| ((i as f64 + 0.5) * dx + 1.234_567e-10).min(1.0))
        .collect();
    let chords = chord_integrals(&fs.mesh, &u, &xs);
    let h: Vec<f64> = xs.iter().map(|&x| profile.eval(x)).collect();
    let mut chord_error: f64 = 0.0;
    let mut ubar = Vec::with_capacity(grid);
    for (i, &(int_u, len)) in chords.iter().enumerate() {
        if len <= 0.0 {
            return Err(Error::Invalid(format!("empty chord at x = {}", xs[i])));
        }
        chord_error = chord_error.max((len - h[i]).abs() / h[i].max(f64::MIN_POSITIVE));
        ubar.push(int_u / len);
    }
    let clamp_at = |x: f64| ubar_at(&xs, &ubar, x);
    let (left, right) = (clamp_at(eps), clamp_at(1.0 - eps));
    let uhat: Vec<f64> = xs
        .iter()
        .zip(&ubar)
        .map(|(&x, &v)| if x <= eps { left } else if x >= 1.0 - eps { right } else { v })
        .collect();
    let mass: f64 = h.iter().sum::<f64>() * dx;
    let c1 = h.iter().zip(&uhat).map(|(a, b)| a * b).sum::<f64>() * dx / mass;
    let ut: Vec<f64> = uhat.iter().map(|v| v - c1).collect();
    // ũ' and η on the cells between consecutive abscissae
    let mut cum = 0.0; // ∫₀ˣ hũ by the midpoint rule, x a cell boundary
    let mut denom = 0.0;
    let mut num_rayleigh = 0.0;
    let mut num_eta = 0.0;
    let mut max_eta: f64 = 0.0;
    for i in 0..grid {
        denom += h[i] * ut[i] * ut[i] * dx;
    }
    for i in 0..grid - 1 {
        cum += h[i] * ut[i] * dx;
        let xm = 0.5 * (xs[i] + xs[i + 1]);
        let hm = profile.eval(xm);
        let du = (ut[i + 1] - ut[i]) / dx;
        let eta = hm * du + mu * cum;
        num_rayleigh += hm * du * du * dx;
        num_eta += eta * du * dx;
        max_eta = max_eta.max(eta.abs());
    }
    let rayleigh_term = num_rayleigh / denom;
    let eta_term = num_eta / denom;
    Ok(EtaIdentity {
        mu,
        rayleigh_term,
        eta_term,
        mismatch: (mu - (rayleigh_term - eta_term)).abs() / mu,
        c1,
        max_abs_eta: max_eta,
        chord_error,
        grid,
        width: eps,
    })
}

fn ubar_at(xs: &[f64], v: &[f64], x: f64) -> f64 {
    let i = xs.partition_point(|&t| t < x);
    if i == 0 {
        return v[0];
    }
    if i >= xs.len() {
        return v[xs.len() - 1];
    }
    let s = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    v[i - 1] + s * (v[i] - v[i - 1])
}
