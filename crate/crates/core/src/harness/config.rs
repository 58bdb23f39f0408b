//! Sweep configuration, read from JSON. Every field has a default, so `{}` is the
//! full default sweep.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::family::{FamilyKind, FamilySpec};
use crate::check::TOLERANCE_FACTOR;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    /// Body families of the corpus.
    pub families: Vec<FamilySpec>,
    /// Checks cover `k = 1..=kmax`.
    pub kmax: usize,
    /// Requested mesh size (thin bodies are meshed finer, see `triangulate`).
    pub target_h: f64,
    /// Grid size of the one-dimensional solves.
    pub segment_nodes: usize,
    /// Negative margins down to `tolerance_factor × (error estimates)` are accepted.
    pub tolerance_factor: f64,
    /// Added to every family, profile and subdomain seed.
    pub seed: u64,
    /// Number of seeded concave profiles for `μ_k(N) ≥ k²π²`.
    pub concave_profiles: usize,
    /// Named smooth profiles for the Liouville cross-check.
    pub smooth_profiles: Vec<String>,
    /// Relative agreement required between the Liouville and weighted spectra.
    pub liouville_tolerance: f64,
    /// Number of seeded slab subdomains for the Dirichlet-Neumann bound.
    pub dn_subdomains: usize,
    /// Upper bound asserted for `|u|_∞ V^{1/2} / ((1+μ)|u|_2)`.
    pub linf_budget: f64,
    /// Slack added to `1/C_2` in the eigenfunction range check.
    pub range_slack: f64,
    /// The η identity is checked on bodies with width at most this.
    pub eta_max_width: f64,
    /// Relative tolerance of the η identity.
    pub eta_tolerance: f64,
    pub scaling: ScalingConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScalingConfig {
    pub families: Vec<FamilyKind>,
    pub eps: Vec<f64>,
    /// Gaps below this are treated as zero and no exponent is fitted.
    pub noise_floor: f64,
    /// Smallest exponent accepted.
    pub min_exponent: f64,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            families: vec![
                FamilyKind::Rectangle,
                FamilyKind::RightTriangle,
                FamilyKind::IsocelesTriangle,
                FamilyKind::Stadium,
            ],
            eps: vec![0.02, 0.01, 0.005],
            noise_floor: 1e-6,
            min_exponent: 1.7,
        }
    }
}

impl Default for Config {
    fn default() -> Self {
        let grid = vec![0.2, 0.1, 0.05, 0.025, 0.0125];
        let smooth = |kind| FamilySpec {
            kind,
            eps: grid.clone(),
            seeds: Vec::new(),
        };
        Self {
            families: vec![
                smooth(FamilyKind::Rectangle),
                smooth(FamilyKind::RightTriangle),
                smooth(FamilyKind::IsocelesTriangle),
                smooth(FamilyKind::Stadium),
                smooth(FamilyKind::Ellipse),
                FamilySpec {
                    kind: FamilyKind::RandomHull,
                    eps: vec![0.1, 0.05],
                    seeds: (1..=5).collect(),
                },
                FamilySpec::single(FamilyKind::Square),
                FamilySpec::single(FamilyKind::Hexagon),
            ],
            kmax: 5,
            target_h: 0.03,
            segment_nodes: 2000,
            tolerance_factor: TOLERANCE_FACTOR,
            seed: 0,
            concave_profiles: 20,
            smooth_profiles: ["constant", "gaussian", "cap", "cosine", "smooth-tent"]
                .map(String::from)
                .to_vec(),
            liouville_tolerance: 1e-3,
            dn_subdomains: 10,
            linf_budget: 1.0,
            range_slack: 0.05,
            eta_max_width: 0.02,
            eta_tolerance: 0.02,
            scaling: ScalingConfig::default(),
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(format!("config: {m}")));
        if self.kmax == 0 || self.kmax >= crate::fem::eigs::MAX_EIGS {
            return bad(format!("kmax = {} outside [1, {}]", self.kmax, crate::fem::eigs::MAX_EIGS - 1));
        }
        if !(self.target_h >= crate::fem::mesh::MIN_TARGET_H && self.target_h <= crate::fem::mesh::MAX_TARGET_H) {
            return bad(format!("target_h = {} outside the mesher range", self.target_h));
        }
        if self.segment_nodes < crate::segment::MIN_NODES {
            return bad(format!("segment_nodes = {} below {}", self.segment_nodes, crate::segment::MIN_NODES));
        }
        if !(self.tolerance_factor >= 0.0) {
            return bad("tolerance_factor must be nonnegative".into());
        }
        for f in &self.families {
            f.validate()?;
        }
        for &e in &self.scaling.eps {
            if !(e > 0.0 && e < 0.5) {
                return bad(format!("scaling eps {e} outside (0, 1/2)"));
            }
        }
        for name in &self.smooth_profiles {
            crate::segment::Weight::named(name)?;
        }
        Ok(())
    }
}
