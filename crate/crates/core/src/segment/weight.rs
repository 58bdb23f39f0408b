//! Weights `h` on `[0, 1]`: sampled chord profiles, closed-form profiles, and
//! piecewise-linear profiles smoothed by a C² bump.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::SliceProfile;

/// Default radius of the smoothing bump for piecewise-linear profiles.
pub const SMOOTHING_RADIUS: f64 = 0.02;

/// Closed-form weights with exact derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AnalyticProfile {
    /// `h ≡ 1`.
    Constant,
    /// `e^{-a x²}`.
    Gaussian { rate: f64 },
    /// `a + b x + c x²`.
    Quadratic { a: f64, b: f64, c: f64 },
    /// `cos(w (x - 1/2))`, positive for `w < π`.
    Cosine { frequency: f64 },
}

impl AnalyticProfile {
    /// `(h, h', h'')` at `x`.
    pub fn derivs(&self, x: f64) -> [f64; 3] {
        match *self {
            AnalyticProfile::Constant => [1.0, 0.0, 0.0],
            AnalyticProfile::Gaussian { rate } => {
                let h = (-rate * x * x).exp();
                let d = -2.0 * rate * x;
                [h, d * h, (d * d - 2.0 * rate) * h]
            }
            AnalyticProfile::Quadratic { a, b, c } => [a + x * (b + c * x), b + 2.0 * c * x, 2.0 * c],
            AnalyticProfile::Cosine { frequency: w } => {
                let s = w * (x - 0.5);
                [s.cos(), -w * s.sin(), -w * w * s.cos()]
            }
        }
    }
}

/// Chord length `h` of a collapsing segment.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Weight {
    /// Piecewise linear through the profile samples.
    Sampled { profile: SliceProfile },
    Analytic { profile: AnalyticProfile },
    /// A piecewise-linear profile, extended linearly beyond `[0, 1]` and convolved
    /// with the bump `(35/32r)(1 - (s/r)²)³` supported on `|s| < r`.
    Smoothed(Smoothed),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Smoothed {
    pub radius: f64,
    /// `h(0)` and the slope of the first piece of the underlying profile.
    pub intercept: f64,
    pub slope: f64,
    /// Interior kinks `(t, slope increase)`.
    pub kinks: Vec<(f64, f64)>,
}

impl Smoothed {
    pub fn new(profile: &SliceProfile, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < 0.25) {
            return Err(Error::OutOfRange(format!("smoothing radius {radius} outside (0, 0.25)")));
        }
        let h = profile.values();
        let slopes = profile.slopes();
        let kinks = slopes
            .windows(2)
            .enumerate()
            .map(|(i, s)| (profile.breakpoints[i + 1], s[1] - s[0]))
            .filter(|&(_, d)| d != 0.0)
            .collect();
        Ok(Self {
            radius,
            intercept: h[0] - slopes[0] * profile.breakpoints[0],
            slope: slopes[0],
            kinks,
        })
    }

    pub fn derivs(&self, x: f64) -> [f64; 3] {
        let r = self.radius;
        let mut out = [self.intercept + self.slope * x, self.slope, 0.0];
        for &(t, d) in &self.kinks {
            let v = (x - t) / r;
            out[0] += d * r * bump_ramp(v);
            out[1] += d * bump_cdf(v);
            out[2] += d * bump_density(v) / r;
        }
        out
    }
}

/// Density of the unit bump `(35/32)(1 - v²)³`.
fn bump_density(v: f64) -> f64 {
    if v.abs() >= 1.0 {
        0.0
    } else {
        let w = 1.0 - v * v;
        35.0 / 32.0 * w * w * w
    }
}

/// `∫_{-1}^v` of the unit bump.
fn bump_cdf(v: f64) -> f64 {
    if v <= -1.0 {
        0.0
    } else if v >= 1.0 {
        1.0
    } else {
        let v2 = v * v;
        0.5 + 35.0 / 32.0 * v * (1.0 - v2 + v2 * v2 * (0.6 - v2 / 7.0))
    }
}

/// `∫_{-1}^v` of [`bump_cdf`]; the unit bump convolved with `(v)_+`.
fn bump_ramp(v: f64) -> f64 {
    if v <= -1.0 {
        0.0
    } else if v >= 1.0 {
        v
    } else {
        let v2 = v * v;
        let b = v2 * (0.5 - v2 * (0.25 - v2 * (0.1 - v2 / 56.0)));
        0.5 * (v + 1.0) + 35.0 / 32.0 * (b - 93.0 / 280.0)
    }
}

/// Names accepted by [`Weight::named`].
pub const NAMED: [&str; 7] = ["constant", "linear", "tent", "gaussian", "cap", "cosine", "smooth-tent"];

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub(crate) const GAUSS2: [(f64, f64); 2] = [(-0.577_350_269_189_625_8, 1.0), (0.577_350_269_189_625_8, 1.0)];
const GAUSS5: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

impl Weight {
    pub fn sampled(profile: SliceProfile) -> Self {
        Weight::Sampled { profile }
    }

    pub fn analytic(profile: AnalyticProfile) -> Self {
        Weight::Analytic { profile }
    }

    /// Named weights: `constant`, `linear` (`2x`), `tent`, `gaussian` (`e^{-x²}`),
    /// `cap` (`1 + x - x²`), `cosine` (`cos(2(x - 1/2))`), `smooth-tent` (the tent
    /// `1/2 → 1 → 1/2` smoothed with radius [`SMOOTHING_RADIUS`]).
    pub fn named(name: &str) -> Result<Self> {
        let sampled = |t: Vec<f64>, h: Vec<f64>| SliceProfile::from_samples(t, h).map(Weight::sampled);
        match name {
            "constant" => Ok(Weight::analytic(AnalyticProfile::Constant)),
            "linear" => sampled(vec![0.0, 1.0], vec![0.0, 2.0]),
            "tent" => sampled(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 0.0]),
            "gaussian" => Ok(Weight::analytic(AnalyticProfile::Gaussian { rate: 1.0 })),
            "cap" => Ok(Weight::analytic(AnalyticProfile::Quadratic { a: 1.0, b: 1.0, c: -1.0 })),
            "cosine" => Ok(Weight::analytic(AnalyticProfile::Cosine { frequency: 2.0 })),
            "smooth-tent" => sampled(vec![0.0, 0.5, 1.0], vec![0.5, 1.0, 0.5])?.smoothed(SMOOTHING_RADIUS),
            _ => Err(Error::Invalid(format!(
                "unknown analytic profile `{name}` (expected one of {})",
                NAMED.join(", ")
            ))),
        }
    }

    /// The weight smoothed by the C² bump of the given radius; smooth weights are returned unchanged.
    pub fn smoothed(&self, radius: f64) -> Result<Self> {
        match self {
            Weight::Sampled { profile } => Ok(Weight::Smoothed(Smoothed::new(profile, radius)?)),
            other => Ok(other.clone()),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Weight::Sampled { profile } => profile.eval(x),
            _ => self.derivs(x)[0],
        }
    }

    /// `(h, h', h'')`; for sampled profiles the one-sided slope and a zero second derivative.
    pub fn derivs(&self, x: f64) -> [f64; 3] {
        match self {
            Weight::Sampled { profile } => {
                let s = profile.slopes();
                let i = profile.breakpoints.partition_point(|&t| t <= x).clamp(1, s.len());
                [profile.eval(x), s[i - 1], 0.0]
            }
            Weight::Analytic { profile } => profile.derivs(x),
            Weight::Smoothed(s) => s.derivs(x),
        }
    }

    /// True when `h` is twice continuously differentiable.
    pub fn is_smooth(&self) -> bool {
        match self {
            Weight::Sampled { profile } => profile.len() == 2,
            _ => true,
        }
    }

    /// Interior abscissae where `h` has a kink.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Weight::Sampled { profile } => {
                let t = &profile.breakpoints;
                t[1..t.len() - 1].to_vec()
            }
            _ => Vec::new(),
        }
    }

    /// `∫_0^1 h`.
    pub fn integral(&self) -> f64 {
        match self {
            Weight::Sampled { profile } => profile.integral,
            _ => integrate(|x| self.eval(x), &[], 256),
        }
    }

    /// Log-concavity certificate. Piecewise-linear weights are log-concave exactly when
    /// concave; smooth ones are scanned for `(ln h)'' <= 0` on a fine interior grid.
    pub fn is_log_concave(&self) -> bool {
        match self {
            Weight::Sampled { profile } => profile.is_concave(),
            _ => (1..2000).all(|i| {
                let [h, d, dd] = self.derivs(i as f64 / 2000.0);
                h > 0.0 && h * dd - d * d <= 1e-9 * (h * h + d * d)
            }),
        }
    }

    /// Smallest value on a grid including the endpoints and all kinks.
    pub fn min_value(&self) -> f64 {
        let grid = (0..=4000).map(|i| i as f64 / 4000.0);
        grid.chain(self.breakpoints()).map(|x| self.eval(x)).fold(f64::INFINITY, f64::min)
    }
}

/// Composite 5-point Gauss quadrature over `pieces` equal cells, each split at `breaks`.
pub(crate) fn integrate(f: impl Fn(f64) -> f64, breaks: &[f64], pieces: usize) -> f64 {
    let mut total = 0.0;
    for i in 0..pieces {
        let (a, b) = (i as f64 / pieces as f64, (i + 1) as f64 / pieces as f64);
        for (c, d) in split(a, b, breaks) {
            let (mid, half) = (0.5 * (c + d), 0.5 * (d - c));
            total += half * GAUSS5.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>();
        }
    }
    total
}

/// `[a, b]` cut at the breakpoints strictly inside it.
pub(crate) fn split(a: f64, b: f64, breaks: &[f64]) -> Vec<(f64, f64)> {
    let mut cuts = vec![a];
    cuts.extend(breaks.iter().copied().filter(|&t| t > a && t < b));
    cuts.push(b);
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}
