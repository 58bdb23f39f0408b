//! Body generation, the cross-checks between planar and one-dimensional spectra,
//! and report output.

pub mod body;
pub mod config;
pub mod extra;
pub mod family;
pub mod report;

use rayon::prelude::*;

pub use body::{analyze, BodyReport, CheckRow, RowKind};
pub use config::{Config, ScalingConfig};
pub use family::{generate, Body, FamilyKind, FamilySpec};
pub use report::{ComparisonReport, Summary};

use crate::error::{Error, Result};

/// Runs `f` on a pool of `jobs` threads (all cores when `None`).
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(Error::Invalid("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// The corpus of the configuration, in configuration order.
pub fn corpus(cfg: &Config) -> Result<Vec<Body>> {
    let mut out = Vec::new();
    for spec in &cfg.families {
        out.extend(generate(spec, cfg.seed)?);
    }
    Ok(out)
}

/// Per-body checks only, in corpus order.
pub fn analyze_corpus(cfg: &Config) -> Result<Vec<BodyReport>> {
    corpus(cfg)?.par_iter().map(|b| analyze(b, cfg)).collect()
}

/// Every check of the configuration. Output order does not depend on scheduling.
pub fn run_all(cfg: &Config) -> Result<ComparisonReport> {
    cfg.validate()?;
    let bodies = analyze_corpus(cfg)?;
    let concave_profiles = extra::concave_profiles(cfg)?;
    let liouville = extra::liouville(cfg)?;
    let dirichlet_neumann = extra::dirichlet_neumann(cfg)?;
    let scaling = extra::mu1_scaling(cfg)?;
    Ok(ComparisonReport::new(
        cfg.clone(),
        bodies,
        concave_profiles,
        liouville,
        dirichlet_neumann,
        scaling,
    ))
}
