//! Checks outside the per-body sweep: one-dimensional bounds, the Liouville
//! cross-check, the Dirichlet-Neumann slab bound and the scaling of `μ_1(N) - μ_1(Ω)`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::body::SpectrumSummary;
use super::config::Config;
use super::family::{shape, FamilyKind};
use crate::check::Inequality;
use crate::error::{Error, Result};
use crate::fem::probe::THIN_WIDTH;
use crate::fem::{mixed_eigs, neumann_eigs, triangulate};
use crate::geometry::{normalize, shapes, slice_profile, ConvexPolygon, Vec2};
use crate::segment::{
    dirichlet_schroedinger_eigs, liouville_transform, pi_squared_bound_check_with, random_concave_profile,
    segment_from_profile, sl_eigs, PiSquaredReport, Weight, WeightedSegment,
};

#[derive(Debug, Clone, Serialize)]
pub struct ProfileReport {
    pub seed: u64,
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
    pub bound: PiSquaredReport,
}

/// `μ_k(N) ≥ k²π²` on seeded concave profiles.
pub fn concave_profiles(cfg: &Config) -> Result<Vec<ProfileReport>> {
    (0..cfg.concave_profiles as u64)
        .into_par_iter()
        .map(|i| {
            let seed = cfg.seed.wrapping_add(i);
            let p = random_concave_profile(seed);
            let seg = segment_from_profile(p.clone())?;
            Ok(ProfileReport {
                seed,
                values: p.values(),
                breakpoints: p.breakpoints,
                bound: pi_squared_bound_check_with(&seg, cfg.kmax, cfg.segment_nodes, cfg.tolerance_factor)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LiouvilleReport {
    pub profile: String,
    pub min_potential: f64,
    /// `μ_0(N), …, μ_kmax(N)`.
    pub weighted: SpectrumSummary,
    /// `λ_1(L₂), …, λ_kmax(L₂)`.
    pub schroedinger: SpectrumSummary,
    /// Relative difference `|λ_k - μ_k| / μ_k` against the tolerance, `k = 1..=kmax`.
    pub rows: Vec<Inequality>,
}

/// `λ_k(L₂) = μ_k(N)` on the configured smooth profiles.
pub fn liouville(cfg: &Config) -> Result<Vec<LiouvilleReport>> {
    cfg.smooth_profiles
        .par_iter()
        .map(|name| {
            let seg = WeightedSegment::new(Weight::named(name)?)?;
            let prob = liouville_transform(&seg)?;
            let mu = sl_eigs(&seg, cfg.kmax, cfg.segment_nodes)?;
            let lam = dirichlet_schroedinger_eigs(&prob, cfg.kmax, cfg.segment_nodes)?;
            let rows = (1..=cfg.kmax)
                .map(|k| {
                    let rel = (lam.eigenvalues[k - 1] - mu.eigenvalues[k]).abs() / mu.eigenvalues[k];
                    Inequality::at_most(format!("|lambda_{k}(L2) - mu_{k}(N)|/mu_{k}(N)"), rel, cfg.liouville_tolerance, 0.0)
                })
                .collect();
            Ok(LiouvilleReport {
                profile: name.clone(),
                min_potential: prob.min_potential,
                weighted: SpectrumSummary::from(&mu),
                schroedinger: SpectrumSummary::from(&lam),
                rows,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct DnRow {
    pub name: String,
    pub seed: Option<u64>,
    pub vertices: Vec<[f64; 2]>,
    /// Slab height.
    pub rho: f64,
    pub dirichlet_sides: Vec<usize>,
    pub lambda1: f64,
    pub error_estimate: f64,
    pub bound: f64,
    /// `(λ_1 - π²/(4ρ²)) / (π²/(4ρ²))`.
    pub relative_excess: f64,
    pub inequality: Inequality,
}

#[derive(Debug, Clone, Serialize)]
pub struct DnReport {
    /// `[0,1] × [0,ρ]` with Dirichlet data on the top, where equality holds.
    pub rectangle: DnRow,
    /// Relative tolerance for equality on the rectangle.
    pub rectangle_tolerance: f64,
    pub rectangle_exact: bool,
    pub subdomains: Vec<DnRow>,
}

/// Slab height of the rectangle check.
const DN_RECT_HEIGHT: f64 = 0.25;
/// Relative tolerance for the rectangle equality.
const DN_RECT_TOLERANCE: f64 = 5e-3;
/// Random points per slab subdomain.
const DN_POINTS: usize = 12;

/// Convex subdomain of a slab, translated to `0 ≤ y ≤ ρ` with `ρ` its height.
pub fn slab_subdomain(seed: u64) -> Result<ConvexPolygon> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho = rng.gen_range(0.1..0.4);
    let pts: Vec<Vec2> = (0..DN_POINTS)
        .map(|_| Vec2::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..rho)))
        .collect();
    let hull = ConvexPolygon::hull(&pts)?;
    let y0 = hull.vertices().iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
    hull.map(|p| Vec2::new(p.x, p.y - y0))
}

fn dn_row(name: String, seed: Option<u64>, poly: &ConvexPolygon, cfg: &Config) -> Result<DnRow> {
    let rho = poly.vertices().iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
    let mut mesh = triangulate(poly, cfg.target_h)?;
    // Neumann where the outward normal points down or sideways, Dirichlet elsewhere
    mesh.set_dirichlet_where(|n| n.y > 1e-12);
    let sides = mesh.dirichlet_sides();
    if sides.is_empty() {
        return Err(Error::Degenerate(format!("{name}: no Dirichlet side")));
    }
    let fs = mixed_eigs(&mesh, 1)?;
    let (lambda1, err) = (fs.spectrum.eigenvalues[0], fs.spectrum.error_estimates[0]);
    let bound = PI * PI / (4.0 * rho * rho);
    Ok(DnRow {
        name,
        seed,
        vertices: poly.vertices().iter().map(|p| [p.x, p.y]).collect(),
        rho,
        dirichlet_sides: sides,
        lambda1,
        error_estimate: err,
        bound,
        relative_excess: (lambda1 - bound) / bound,
        inequality: Inequality::at_least("lambda_1 >= pi^2/(4 rho^2)", lambda1, bound, cfg.tolerance_factor * err),
    })
}

/// `λ_1 ≥ π²/(4ρ²)` on the rectangle and on seeded slab subdomains.
pub fn dirichlet_neumann(cfg: &Config) -> Result<DnReport> {
    let rect = dn_row("rectangle".into(), None, &shapes::rectangle(1.0, DN_RECT_HEIGHT), cfg)?;
    let subdomains = (0..cfg.dn_subdomains as u64)
        .into_par_iter()
        .map(|i| {
            let seed = cfg.seed.wrapping_add(i);
            dn_row(format!("slab-seed{seed}"), Some(seed), &slab_subdomain(seed)?, cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DnReport {
        rectangle_exact: rect.relative_excess.abs() <= DN_RECT_TOLERANCE,
        rectangle: rect,
        rectangle_tolerance: DN_RECT_TOLERANCE,
        subdomains,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingPoint {
    pub eps: f64,
    /// `W/D` of the normalized body.
    pub width: f64,
    pub mu1_omega: f64,
    pub mu1_segment: f64,
    /// `μ_1(N) - μ_1(Ω)`.
    pub gap: f64,
    /// Combined error estimate of the gap.
    pub error_estimate: f64,
    pub fine_nodes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub family: FamilyKind,
    pub points: Vec<ScalingPoint>,
    /// Why no exponent was fitted.
    pub skipped: Option<String>,
    /// Least-squares fit `gap ≈ C ε^p` in log-log coordinates.
    pub exponent: Option<f64>,
    pub constant: Option<f64>,
    pub row: Option<Inequality>,
}

/// `μ_1(N) - μ_1(Ω) = O(ε²)`: fitted exponent of the gap over the configured widths.
pub fn mu1_scaling(cfg: &Config) -> Result<Vec<ScalingReport>> {
    cfg.scaling
        .families
        .iter()
        .map(|&family| {
            let points = cfg
                .scaling
                .eps
                .par_iter()
                .map(|&eps| scaling_point(family, eps, cfg))
                .collect::<Result<Vec<_>>>()?;
            Ok(fit(family, points, cfg))
        })
        .collect()
}

fn scaling_point(family: FamilyKind, eps: f64, cfg: &Config) -> Result<ScalingPoint> {
    let (poly, _) = shape(family, eps, cfg.seed)?;
    let nb = normalize(&poly)?;
    let fs = neumann_eigs(&triangulate(&nb.polygon, cfg.target_h)?, 1)?;
    let seg = segment_from_profile(slice_profile(&nb.polygon, 64)?)?;
    let ns = sl_eigs(&seg, 1, cfg.segment_nodes)?;
    Ok(ScalingPoint {
        eps,
        width: nb.width,
        mu1_omega: fs.spectrum.eigenvalues[1],
        mu1_segment: ns.eigenvalues[1],
        gap: ns.eigenvalues[1] - fs.spectrum.eigenvalues[1],
        error_estimate: fs.spectrum.error_estimates[1] + ns.error_estimates[1],
        fine_nodes: fs.mesh.num_nodes(),
    })
}

fn fit(family: FamilyKind, points: Vec<ScalingPoint>, cfg: &Config) -> ScalingReport {
    let sc = &cfg.scaling;
    let skip = |why: String, points| ScalingReport {
        family,
        points,
        skipped: Some(why),
        exponent: None,
        constant: None,
        row: None,
    };
    if let Some(p) = points.iter().find(|p| p.width >= THIN_WIDTH) {
        return skip(format!("width {} is not below 1/40", p.width), points);
    }
    if points.len() < 2 {
        return skip("fewer than two widths".into(), points);
    }
    let floor = |p: &ScalingPoint| sc.noise_floor.max(cfg.tolerance_factor * p.error_estimate);
    if let Some(p) = points.iter().find(|p| p.gap <= floor(p)) {
        return skip(
            format!("gap {:.3e} at eps {} is below the noise floor {:.3e}", p.gap, p.eps, floor(p)),
            points,
        );
    }
    let xs: Vec<f64> = points.iter().map(|p| p.width.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.gap.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let p = sxy / sxx;
    let c = (my - p * mx).exp();
    ScalingReport {
        family,
        points,
        skipped: None,
        exponent: Some(p),
        constant: Some(c),
        row: Some(Inequality::at_least("fitted exponent p >= min", p, sc.min_exponent, 0.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slab_subdomains_touch_both_walls() {
        for seed in 0..5 {
            let p = slab_subdomain(seed).unwrap();
            let ys: Vec<f64> = p.vertices().iter().map(|v| v.y).collect();
            assert!(ys.iter().copied().fold(f64::INFINITY, f64::min).abs() < 1e-15);
            assert_eq!(p.vertices(), slab_subdomain(seed).unwrap().vertices());
        }
    }

    #[test]
    fn dn_rectangle_is_exact() {
        let cfg = Config {
            dn_subdomains: 2,
            ..Config::default()
        };
        let r = dirichlet_neumann(&cfg).unwrap();
        assert!(r.rectangle_exact, "{:?}", r.rectangle);
        assert!(r.subdomains.iter().all(|d| d.inequality.holds));
    }

    #[test]
    fn fit_recovers_exponent() {
        let cfg = Config::default();
        let pts = [0.02, 0.01, 0.005]
            .iter()
            .map(|&e: &f64| ScalingPoint {
                eps: e,
                width: e,
                mu1_omega: 0.0,
                mu1_segment: 0.0,
                gap: 3.0 * e * e,
                error_estimate: 0.0,
                fine_nodes: 0,
            })
            .collect();
        let r = fit(FamilyKind::RightTriangle, pts, &cfg);
        assert!((r.exponent.unwrap() - 2.0).abs() < 1e-12);
        assert!((r.constant.unwrap() - 3.0).abs() < 1e-10);
    }
}
