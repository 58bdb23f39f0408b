//! Chord-length profiles of normalized bodies.
//!
//! For a body in standard position the vertical chord at abscissa `x` is
//! `(lower(x), upper(x))` and its length is `h(x) = upper(x) - lower(x)`. Both
//! branches are piecewise linear with kinks only at vertex abscissae, so
//! sampling them at those abscissae represents the profile exactly.

use serde::{Deserialize, Serialize};

use super::frame::check_normalized;
use super::polygon::{ConvexPolygon, Vec2};
use crate::error::{Error, Result};

/// Tolerance on slope increases when certifying concavity.
pub const CONCAVITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceProfile {
    /// Ascending abscissae in `[0, 1]`.
    pub breakpoints: Vec<f64>,
    /// Upper branch `h_+` at the breakpoints.
    pub upper: Vec<f64>,
    /// Lower branch `h_-` at the breakpoints.
    pub lower: Vec<f64>,
    /// `∫_0^1 h dt` for the piecewise linear interpolant.
    pub integral: f64,
}

impl SliceProfile {
    /// Builds a profile from `(t, h)` samples, with the whole chord above the axis.
    pub fn from_samples(t: Vec<f64>, h: Vec<f64>) -> Result<Self> {
        if t.len() != h.len() || t.len() < 2 {
            return Err(Error::Invalid("profile needs matching t/h arrays of length >= 2".into()));
        }
        if t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Invalid("profile abscissae must be strictly increasing".into()));
        }
        if (t[0]).abs() > 1e-12 || (t[t.len() - 1] - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid("profile must span [0, 1]".into()));
        }
        if h.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::Invalid("profile values must be finite and nonnegative".into()));
        }
        let lower = vec![0.0; t.len()];
        Ok(Self::assemble(t, h, lower))
    }

    /// Reads a profile file of `t h` pairs, one per line.
    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut t = Vec::new();
        let mut h = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums: std::result::Result<Vec<f64>, _> =
                line.split_whitespace().map(str::parse::<f64>).collect();
            match nums {
                Ok(v) if v.len() == 2 => {
                    t.push(v[0]);
                    h.push(v[1]);
                }
                _ => {
                    return Err(Error::Parse {
                        path: path.to_path_buf(),
                        message: format!("line {}: expected `t h`", lineno + 1),
                    })
                }
            }
        }
        Self::from_samples(t, h).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    fn assemble(breakpoints: Vec<f64>, upper: Vec<f64>, lower: Vec<f64>) -> Self {
        let integral = breakpoints
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let h0 = upper[i] - lower[i];
                let h1 = upper[i + 1] - lower[i + 1];
                0.5 * (h0 + h1) * (w[1] - w[0])
            })
            .sum();
        Self {
            breakpoints,
            upper,
            lower,
            integral,
        }
    }

    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.breakpoints.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.upper
            .iter()
            .zip(&self.lower)
            .map(|(u, l)| u - l)
            .collect()
    }

    fn locate(&self, x: f64) -> (usize, f64) {
        let t = &self.breakpoints;
        let x = x.clamp(t[0], t[t.len() - 1]);
        let i = match t.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i.min(t.len() - 2),
            Err(i) => i.saturating_sub(1).min(t.len() - 2),
        };
        let s = (x - t[i]) / (t[i + 1] - t[i]);
        (i, s)
    }

    fn interp(&self, data: &[f64], x: f64) -> f64 {
        let (i, s) = self.locate(x);
        data[i] * (1.0 - s) + data[i + 1] * s
    }

    /// Chord length `h(x)` (clamped to the profile domain).
    pub fn eval(&self, x: f64) -> f64 {
        self.upper_at(x) - self.lower_at(x)
    }

    pub fn upper_at(&self, x: f64) -> f64 {
        self.interp(&self.upper, x)
    }

    pub fn lower_at(&self, x: f64) -> f64 {
        self.interp(&self.lower, x)
    }

    /// Slopes of the linear pieces of `h`.
    pub fn slopes(&self) -> Vec<f64> {
        let h = self.values();
        self.breakpoints
            .windows(2)
            .zip(h.windows(2))
            .map(|(t, v)| (v[1] - v[0]) / (t[1] - t[0]))
            .collect()
    }

    /// Largest increase between consecutive slopes (positive means a convex kink).
    pub fn max_slope_increase(&self) -> f64 {
        self.slopes()
            .windows(2)
            .map(|s| s[1] - s[0])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Concavity certificate: slopes are nonincreasing within [`CONCAVITY_TOL`]
    /// (scaled by the largest slope magnitude).
    pub fn is_concave(&self) -> bool {
        let scale = self.slopes().iter().fold(1.0f64, |m, s| m.max(s.abs()));
        self.max_slope_increase() <= CONCAVITY_TOL * scale
    }

    /// The profile scaled so that `∫ h = 1`.
    pub fn normalized(&self) -> Result<Self> {
        if !(self.integral > 0.0) {
            return Err(Error::Invalid("profile has zero total mass".into()));
        }
        let c = 1.0 / self.integral;
        Ok(Self::assemble(
            self.breakpoints.clone(),
            self.upper.iter().map(|v| v * c).collect(),
            self.lower.iter().map(|v| v * c).collect(),
        ))
    }

    /// `h(1 - x)`.
    pub fn reflected(&self) -> Self {
        let n = self.len();
        Self::assemble(
            (0..n).map(|i| 1.0 - self.breakpoints[n - 1 - i]).collect(),
            (0..n).map(|i| self.upper[n - 1 - i]).collect(),
            (0..n).map(|i| self.lower[n - 1 - i]).collect(),
        )
    }
}

/// Piecewise-linear chain `y(x)` through vertices with increasing abscissae.
struct Chain(Vec<Vec2>);

impl Chain {
    fn eval(&self, x: f64) -> f64 {
        let v = &self.0;
        let i = v.partition_point(|p| p.x <= x).clamp(1, v.len() - 1);
        let (a, b) = (v[i - 1], v[i]);
        if b.x == a.x {
            return a.y.max(b.y);
        }
        a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x)
    }
}

/// Upper and lower boundary chains of a normalized polygon.
fn chains(poly: &ConvexPolygon) -> (Chain, Chain) {
    let v = poly.vertices();
    let n = v.len();
    let start = v
        .iter()
        .position(|p| p.norm() <= 1e-9)
        .expect("normalized polygon has (0,0) as a vertex");
    let end = v
        .iter()
        .position(|p| (p - Vec2::new(1.0, 0.0)).norm() <= 1e-9)
        .expect("normalized polygon has (1,0) as a vertex");
    // counterclockwise from (0,0) to (1,0) walks the lower boundary
    let mut lower = Vec::new();
    let mut i = start;
    loop {
        lower.push(v[i]);
        if i == end {
            break;
        }
        i = (i + 1) % n;
    }
    let mut upper = Vec::new();
    let mut i = end;
    loop {
        upper.push(v[i]);
        if i == start {
            break;
        }
        i = (i + 1) % n;
    }
    upper.reverse();
    (Chain(upper), Chain(lower))
}

/// Exact chord profile of a normalized polygon, sampled at all vertex abscissae
/// plus a uniform grid of `samples + 1` points.
pub fn slice_profile(poly: &ConvexPolygon, samples: usize) -> Result<SliceProfile> {
    check_normalized(poly)?;
    if samples < 16 {
        return Err(Error::Invalid(format!("need at least 16 samples, got {samples}")));
    }
    let (upper, lower) = chains(poly);
    let mut xs: Vec<f64> = (0..=samples).map(|i| i as f64 / samples as f64).collect();
    xs.extend(poly.vertices().iter().map(|p| p.x.clamp(0.0, 1.0)));
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-13);
    *xs.last_mut().expect("nonempty") = 1.0;
    xs[0] = 0.0;
    let up: Vec<f64> = xs.iter().map(|&x| upper.eval(x)).collect();
    let lo: Vec<f64> = xs.iter().map(|&x| lower.eval(x)).collect();
    // chords close at both diameter endpoints
    let (mut up, mut lo) = (up, lo);
    let last = xs.len() - 1;
    for i in [0, last] {
        up[i] = 0.0;
        lo[i] = 0.0;
    }
    for i in 0..xs.len() {
        if up[i] < lo[i] {
            let m = 0.5 * (up[i] + lo[i]);
            up[i] = m;
            lo[i] = m;
        }
    }
    Ok(SliceProfile::assemble(xs, up, lo))
}

/// Result of checking `|h_±'(x)| <= |h_±(x)| / min(x, 1 - x)` on every interior breakpoint.
#[derive(Debug, Clone, Serialize)]
pub struct HControlReport {
    pub points_checked: usize,
    /// Smallest `bound - |slope|` over all checked one-sided slopes.
    pub min_slack: f64,
    /// Largest `|slope| / bound`.
    pub max_ratio: f64,
    pub pass: bool,
}

pub const H_CONTROL_TOL: f64 = 1e-9;

pub fn h_derivative_bound_check(profile: &SliceProfile) -> HControlReport {
    let t = &profile.breakpoints;
    let n = t.len();
    let mut min_slack = f64::INFINITY;
    let mut max_ratio = 0.0f64;
    let mut points = 0;
    let slope = |data: &[f64], i: usize| (data[i + 1] - data[i]) / (t[i + 1] - t[i]);
    for i in 1..n - 1 {
        let x = t[i];
        let d = x.min(1.0 - x);
        if d <= 0.0 {
            continue;
        }
        points += 1;
        for branch in [&profile.upper, &profile.lower] {
            let bound = branch[i].abs() / d;
            for s in [slope(branch, i - 1), slope(branch, i)] {
                min_slack = min_slack.min(bound - s.abs());
                if bound > 0.0 {
                    max_ratio = max_ratio.max(s.abs() / bound);
                } else if s.abs() > H_CONTROL_TOL {
                    max_ratio = f64::INFINITY;
                }
            }
        }
    }
    HControlReport {
        points_checked: points,
        min_slack,
        max_ratio,
        pass: min_slack >= -H_CONTROL_TOL,
    }
}
