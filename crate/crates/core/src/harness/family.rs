//! Test-body families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{normalize, shapes, ConvexPolygon, Vec2};

/// Points per random hull.
pub const HULL_POINTS: usize = 40;
/// Resampling attempts for degenerate random hulls.
pub const HULL_RETRIES: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Rectangle,
    RightTriangle,
    IsocelesTriangle,
    Stadium,
    Ellipse,
    RandomHull,
    /// The unit square (no parameter).
    Square,
    /// The regular hexagon (no parameter).
    Hexagon,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Rectangle => "rectangle",
            FamilyKind::RightTriangle => "right-triangle",
            FamilyKind::IsocelesTriangle => "isoceles-triangle",
            FamilyKind::Stadium => "stadium",
            FamilyKind::Ellipse => "ellipse",
            FamilyKind::RandomHull => "random-hull",
            FamilyKind::Square => "square",
            FamilyKind::Hexagon => "hexagon",
        }
    }

    /// Polygonal stand-in for a body with C¹ boundary.
    pub fn smooth(self) -> bool {
        matches!(self, FamilyKind::Stadium | FamilyKind::Ellipse)
    }

    fn takes_eps(self) -> bool {
        !matches!(self, FamilyKind::Square | FamilyKind::Hexagon)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    /// Thickness parameters (ignored for the square and hexagon).
    #[serde(default)]
    pub eps: Vec<f64>,
    /// Seeds, used by random hulls only.
    #[serde(default)]
    pub seeds: Vec<u64>,
}

impl FamilySpec {
    pub fn single(kind: FamilyKind) -> Self {
        Self {
            kind,
            eps: Vec::new(),
            seeds: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.kind.takes_eps() {
            return Ok(());
        }
        if self.eps.is_empty() {
            return Err(Error::Invalid(format!("config: family {} needs an eps grid", self.kind.name())));
        }
        if let Some(e) = self.eps.iter().find(|e| !(**e > 0.0 && **e < 0.5)) {
            return Err(Error::Invalid(format!("config: eps {e} outside (0, 1/2)")));
        }
        if self.kind == FamilyKind::RandomHull && self.seeds.is_empty() {
            return Err(Error::Invalid("config: random-hull family needs seeds".into()));
        }
        Ok(())
    }
}

/// A normalized body of the corpus.
#[derive(Debug, Clone, Serialize)]
pub struct Body {
    pub name: String,
    pub family: FamilyKind,
    pub eps: Option<f64>,
    /// Seed actually used (after any resampling).
    pub seed: Option<u64>,
    /// Diameter 1, endpoints `(0,0)` and `(1,0)`.
    #[serde(skip)]
    pub polygon: ConvexPolygon,
    /// Width of the normalized body, i.e. `W/D`.
    pub width: f64,
}

/// Unnormalized body of a family at thickness `eps`.
pub fn shape(kind: FamilyKind, eps: f64, seed: u64) -> Result<(ConvexPolygon, u64)> {
    Ok(match kind {
        FamilyKind::Rectangle => (shapes::rectangle(1.0, eps), seed),
        FamilyKind::RightTriangle => (shapes::right_triangle(eps), seed),
        FamilyKind::IsocelesTriangle => (shapes::isoceles_triangle(eps), seed),
        FamilyKind::Stadium => (shapes::thin_stadium(eps), seed),
        FamilyKind::Ellipse => (shapes::ellipse(0.5, 0.5 * eps, shapes::SMOOTH_VERTICES), seed),
        FamilyKind::RandomHull => return random_hull(eps, seed),
        FamilyKind::Square => (shapes::rectangle(1.0, 1.0), seed),
        FamilyKind::Hexagon => (shapes::regular_polygon(6, 1.0), seed),
    })
}

/// Convex hull of [`HULL_POINTS`] seeded points in `[0,1] × [0,eps]`; degenerate hulls are
/// redrawn with the next seed, at most [`HULL_RETRIES`] times.
pub fn random_hull(eps: f64, seed: u64) -> Result<(ConvexPolygon, u64)> {
    for s in seed..seed + HULL_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let pts: Vec<Vec2> = (0..HULL_POINTS)
            .map(|_| Vec2::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..eps)))
            .collect();
        if let Ok(p) = ConvexPolygon::hull(&pts) {
            if p.len() >= 3 {
                return Ok((p, s));
            }
        }
    }
    Err(Error::Degenerate(format!("no nondegenerate hull for seeds {seed}..{}", seed + HULL_RETRIES)))
}

fn body(kind: FamilyKind, eps: Option<f64>, seed: Option<u64>) -> Result<Body> {
    let (poly, used) = shape(kind, eps.unwrap_or(0.0), seed.unwrap_or(0))?;
    let nb = normalize(&poly)?;
    let name = match (eps, seed) {
        (Some(e), Some(_)) => format!("{}-eps{e}-seed{used}", kind.name()),
        (Some(e), None) => format!("{}-eps{e}", kind.name()),
        _ => kind.name().to_string(),
    };
    Ok(Body {
        name,
        family: kind,
        eps,
        seed: seed.map(|_| used),
        width: nb.width,
        polygon: nb.polygon,
    })
}

/// The normalized bodies of a family, in grid order (eps outer, seed inner).
/// `seed_offset` is added to every random-hull seed.
pub fn generate(spec: &FamilySpec, seed_offset: u64) -> Result<Vec<Body>> {
    spec.validate()?;
    if !spec.kind.takes_eps() {
        return Ok(vec![body(spec.kind, None, None)?]);
    }
    let mut out = Vec::new();
    for &e in &spec.eps {
        if spec.kind == FamilyKind::RandomHull {
            for &s in &spec.seeds {
                out.push(body(spec.kind, Some(e), Some(s.wrapping_add(seed_offset)))?);
            }
        } else {
            out.push(body(spec.kind, Some(e), None)?);
        }
    }
    Ok(out)
}
