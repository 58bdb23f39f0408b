//! All checks that need the planar spectrum of one body.

use serde::Serialize;

use super::config::Config;
use super::family::{Body, FamilyKind};
use crate::check::Inequality;
use crate::error::Result;
use crate::fem::probe::THIN_WIDTH;
use crate::fem::{eta_decomposition, linf_ratio, neumann_eigs, probe_eigenfunction, triangulate};
use crate::fem::{EigenfunctionProbe, EtaIdentity, FemSpectrum};
use crate::geometry::slice_profile;
use crate::segment::{segment_from_profile, sl_eigs};
use crate::spectrum::{EigenSpectrum, CLUSTER_ERROR_FACTOR, CLUSTER_REL_FLOOR};
use crate::special::{alt_simplicity_threshold, eps_k, kroger_bound, multiple_eigenvalue_floor};

/// Uniform samples added to the exact profile breakpoints.
const PROFILE_SAMPLES: usize = 64;

/// Whether a failed row fails the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    /// The inputs satisfy the hypotheses of the statement.
    Assertion,
    /// The inputs deviate from the hypotheses; the outcome is recorded only.
    Finding,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub check: &'static str,
    pub k: Option<usize>,
    pub kind: RowKind,
    #[serde(flatten)]
    pub inequality: Inequality,
    /// Hypothesis deviation that demoted the row to a finding.
    pub deviation: Option<&'static str>,
}

impl CheckRow {
    pub fn failed(&self) -> bool {
        self.kind == RowKind::Assertion && !self.inequality.holds
    }
}

/// Eigenvalues with their provenance.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSummary {
    pub eigenvalues: Vec<f64>,
    pub error_estimates: Vec<f64>,
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub clusters: Vec<Vec<usize>>,
    pub max_residual: f64,
}

impl From<&EigenSpectrum> for SpectrumSummary {
    fn from(s: &EigenSpectrum) -> Self {
        Self {
            eigenvalues: s.eigenvalues.clone(),
            error_estimates: s.error_estimates.clone(),
            coarse: s.coarse.clone(),
            fine: s.fine.clone(),
            clusters: s.clusters.clone(),
            max_residual: s.residuals.iter().copied().fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MeshInfo {
    pub target_h: f64,
    pub h_mesh: f64,
    pub base_nodes: usize,
    pub fine_nodes: usize,
    pub fine_triangles: usize,
    /// Smallest angle (degrees) away from input corners sharper than 15°.
    pub min_angle_regular: f64,
}

/// Largest `k` with `W/D` below each simplicity threshold, and the observed one.
#[derive(Debug, Clone, Serialize)]
pub struct Simplicity {
    /// Largest `k ≤ kmax` with `W/D < ε_k` (0 if none).
    pub eps_k_threshold: usize,
    /// Largest `k ≤ kmax` with `W/D` below the collapsing-segment threshold.
    pub alt_threshold: usize,
    /// Largest `k` such that `μ_1, …, μ_k` lie in no cluster.
    pub observed_simple: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BodyReport {
    pub name: String,
    pub family: FamilyKind,
    pub eps: Option<f64>,
    pub seed: Option<u64>,
    pub vertices: usize,
    /// `W/D`; the body is normalized to `D = 1`.
    pub width: f64,
    pub hypothesis_deviation: &'static str,
    pub mesh: MeshInfo,
    /// `μ_0(Ω), …, μ_{kmax+1}(Ω)`.
    pub omega: SpectrumSummary,
    /// `μ_0(N), …, μ_{kmax+1}(N)`.
    pub segment: SpectrumSummary,
    pub segment_nodes: usize,
    pub probe: EigenfunctionProbe,
    pub linf_ratio: f64,
    pub eta: Option<EtaIdentity>,
    pub simplicity: Simplicity,
    pub rows: Vec<CheckRow>,
}

impl BodyReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.failed()).count()
    }
}

/// Boundary regularity of a family for the C¹ hypotheses.
pub fn deviation(family: FamilyKind) -> &'static str {
    if family.smooth() {
        "smooth_polygonal_approximation"
    } else {
        "non_C1_boundary"
    }
}

/// Meshes and solves one body, then evaluates every per-body check.
pub fn analyze(body: &Body, cfg: &Config) -> Result<BodyReport> {
    let kmax = cfg.kmax;
    let mesh = triangulate(&body.polygon, cfg.target_h)?;
    let quality = mesh.quality();
    let fs = neumann_eigs(&mesh, kmax + 1)?;
    let profile = slice_profile(&body.polygon, PROFILE_SAMPLES)?;
    let seg = segment_from_profile(profile.clone())?;
    let ns = sl_eigs(&seg, kmax + 1, cfg.segment_nodes)?;
    let probe = probe_eigenfunction(&fs, 1)?;
    let linf = linf_ratio(&fs, 1)?;
    let eta = if body.width <= cfg.eta_max_width {
        Some(eta_decomposition(&fs, &profile, crate::fem::probe::ETA_GRID)?)
    } else {
        None
    };
    let simplicity = simplicity(&fs.spectrum, body.width, kmax);
    let mut report = BodyReport {
        name: body.name.clone(),
        family: body.family,
        eps: body.eps,
        seed: body.seed,
        vertices: body.polygon.len(),
        width: body.width,
        hypothesis_deviation: deviation(body.family),
        mesh: MeshInfo {
            target_h: cfg.target_h,
            h_mesh: mesh.h_mesh,
            base_nodes: fs.base_nodes,
            fine_nodes: fs.mesh.num_nodes(),
            fine_triangles: fs.mesh.triangles.len(),
            min_angle_regular: quality.min_angle_regular,
        },
        omega: SpectrumSummary::from(&fs.spectrum),
        segment: SpectrumSummary::from(&ns),
        segment_nodes: cfg.segment_nodes,
        probe,
        linf_ratio: linf,
        eta,
        simplicity,
        rows: Vec::new(),
    };
    report.rows = rows(&report, &fs, cfg);
    Ok(report)
}

fn cluster_tol(s: &EigenSpectrum, i: usize) -> f64 {
    (CLUSTER_ERROR_FACTOR * s.error_estimates[i]).max(CLUSTER_REL_FLOOR * s.eigenvalues[i].abs().max(1.0))
}

fn simplicity(s: &EigenSpectrum, width: f64, kmax: usize) -> Simplicity {
    let below = |f: &dyn Fn(usize) -> f64| (1..=kmax).take_while(|&k| width < f(k)).last().unwrap_or(0);
    let observed = (1..s.len())
        .take_while(|&k| s.cluster_of(k).is_none())
        .last()
        .unwrap_or(0);
    Simplicity {
        eps_k_threshold: below(&|k| eps_k(k).value),
        alt_threshold: below(&|k| alt_simplicity_threshold(k).value),
        observed_simple: observed.min(kmax),
    }
}

fn rows(r: &BodyReport, fs: &FemSpectrum, cfg: &Config) -> Vec<CheckRow> {
    let f = cfg.tolerance_factor;
    let (om, nn) = (&r.omega, &r.segment);
    let eps = r.width;
    let c1 = r.family.smooth();
    let mut out = Vec::new();
    let mut push = |check, k, inequality, ok: bool, why| {
        out.push(CheckRow {
            check,
            k,
            kind: if ok { RowKind::Assertion } else { RowKind::Finding },
            inequality,
            deviation: if ok { None } else { Some(why) },
        })
    };
    for k in 1..=cfg.kmax {
        let (mo, eo) = (om.eigenvalues[k], om.error_estimates[k]);
        let (mn, en) = (nn.eigenvalues[k], nn.error_estimates[k]);
        let tol = f * (eo + en);
        let thin = eps < 0.5;
        push(
            "sandwich_upper",
            Some(k),
            Inequality::at_most("mu_k(Omega) <= mu_k(N)", mo, mn, tol),
            thin,
            "width_not_below_one_half",
        );
        push(
            "sandwich_lower",
            Some(k),
            Inequality::at_least("mu_k(Omega) >= (1-2eps(1+mu_k(N)))mu_k(N)", mo, (1.0 - 2.0 * eps * (1.0 + mn)) * mn, tol),
            thin,
            "width_not_below_one_half",
        );
        let kr = kroger_bound(2, k).expect("planar Kröger bound").value;
        push("kroger", Some(k), Inequality::at_most("mu_k(Omega) <= 4(j01+(k-1)pi/2)^2", mo, kr, f * eo), true, "");
    }
    let s = &fs.spectrum;
    for c in &s.clusters {
        let lo = c[0];
        if lo == 0 || lo > cfg.kmax {
            continue;
        }
        let err = c.iter().map(|&i| s.error_estimates[i]).fold(0.0, f64::max);
        push(
            "multiple_eigenvalue_floor",
            Some(lo),
            Inequality::at_least(
                "clustered mu >= pi^2/(4eps^2)",
                s.eigenvalues[lo],
                multiple_eigenvalue_floor(eps).value,
                f * err,
            ),
            c1,
            "non_C1_boundary",
        );
    }
    for i in 1..=r.simplicity.eps_k_threshold {
        let gap = s.eigenvalues[i + 1] - s.eigenvalues[i];
        push(
            "simplicity_gap",
            Some(i),
            Inequality::at_least("mu_{k+1} - mu_k > cluster tolerance", gap, cluster_tol(s, i).max(cluster_tol(s, i + 1)), 0.0),
            c1,
            "non_C1_boundary",
        );
    }
    let p = &r.probe;
    let mu1 = om.eigenvalues[1];
    if eps < THIN_WIDTH {
        push("vertical_derivative", None, Inequality::at_most("max|D_y u| <= 48 mu_1 eps", p.max_dy, 48.0 * mu1 * eps, 0.0), true, "");
        let end = p.endpoint_gradient[0].max(p.endpoint_gradient[1]);
        push("endpoint_gradient", None, Inequality::at_most("max|Du| on end strips <= 6 mu_1 eps", end, 6.0 * mu1 * eps, 0.0), true, "");
    }
    let c2 = crate::special::constants(2, 1).expect("planar constants").c_n.value;
    push(
        "range_ratio",
        None,
        Inequality::at_most("sup u/(-inf u) <= 1/C_2 + slack", p.range_ratio, 1.0 / c2 + cfg.range_slack, 0.0),
        true,
        "",
    );
    push("linf_ratio", None, Inequality::at_most("|u|_inf V^1/2/((1+mu)|u|_2) <= budget", r.linf_ratio, cfg.linf_budget, 0.0), true, "");
    if let Some(e) = &r.eta {
        push("eta_identity", None, Inequality::at_most("relative mismatch", e.mismatch, cfg.eta_tolerance, 0.0), true, "");
    }
    out
}
