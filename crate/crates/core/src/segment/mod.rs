//! The collapsing segment `([0,1], H dx)`: the weighted Neumann Sturm-Liouville
//! problem, its Liouville transform to a Dirichlet Schrödinger operator, and the
//! lower bound `μ_k ≥ k²π²` for log-concave weights.

mod solve;
pub mod weight;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use solve::{
    dirichlet_schroedinger_eigs, liouville_transform, pi_squared_bound_check,
    pi_squared_bound_check_with, sl_eigs, PiSquaredReport, SchroedingerProblem, DEFAULT_NODES,
    MIN_NODES, MIN_WEIGHT,
};
pub use weight::{AnalyticProfile, Weight, NAMED, SMOOTHING_RADIUS};

use crate::error::{Error, Result};
use crate::geometry::SliceProfile;

/// The segment `[0, 1]` with measure `H dx`, where `H = h / ∫h`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedSegment {
    pub weight: Weight,
    /// `∫_0^1 h`; the normalized weight is `h / normalization`.
    pub normalization: f64,
    /// `H` is log-concave (for chord profiles of convex bodies, concave).
    pub log_concave: bool,
}

impl WeightedSegment {
    pub fn new(weight: Weight) -> Result<Self> {
        let normalization = weight.integral();
        if !(normalization > 0.0 && normalization.is_finite()) {
            return Err(Error::Invalid(format!("weight has total mass {normalization}")));
        }
        if weight.min_value() < 0.0 {
            return Err(Error::Invalid("weight takes negative values".into()));
        }
        let log_concave = weight.is_log_concave();
        Ok(Self {
            weight,
            normalization,
            log_concave,
        })
    }

    /// Normalized weight `H(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        self.weight.eval(x) / self.normalization
    }

    /// The same segment with `h` smoothed (see [`Weight::smoothed`]).
    pub fn smoothed(&self, radius: f64) -> Result<Self> {
        Self::new(self.weight.smoothed(radius)?)
    }
}

/// The collapsing segment of a chord profile.
pub fn segment_from_profile(profile: SliceProfile) -> Result<WeightedSegment> {
    WeightedSegment::new(Weight::sampled(profile.normalized()?))
}

/// A concave piecewise-linear profile: the upper concave hull of seeded random points,
/// with endpoint values that may vanish.
pub fn random_concave_profile(seed: u64) -> SliceProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let end = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.4) {
            0.0
        } else {
            rng.gen_range(0.0..0.6)
        }
    };
    let mut pts: Vec<(f64, f64)> = vec![(0.0, end(&mut rng))];
    for _ in 0..rng.gen_range(2..=7) {
        pts.push((rng.gen_range(0.02..0.98), rng.gen_range(0.2..1.0)));
    }
    pts.push((1.0, end(&mut rng)));
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            if (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0) >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let (t, h) = hull.into_iter().unzip();
    SliceProfile::from_samples(t, h).expect("hull of points spanning [0, 1]")
}
