use nalgebra::Rotation2;
use serde::Serialize;

use super::calipers::{self, Diameter, Width};
use super::polygon::{ConvexPolygon, Vec2};
use crate::error::{Error, Result};

/// Similarity `p -> scale * R(rotation) * p + translation` that puts a body into
/// standard position: diameter endpoints at `(0, 0)` and `(1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BodyFrame {
    pub rotation: f64,
    #[serde(serialize_with = "ser_vec")]
    pub translation: Vec2,
    pub scale: f64,
    /// Diameter endpoints of the source polygon.
    #[serde(serialize_with = "ser_pair")]
    pub diameter_endpoints: [Vec2; 2],
    /// Width normal of the source polygon (direction along which the width is measured).
    #[serde(serialize_with = "ser_vec")]
    pub width_direction: Vec2,
    /// Diameter and width of the source polygon.
    pub diameter: f64,
    pub width: f64,
}

impl BodyFrame {
    pub fn apply(&self, p: Vec2) -> Vec2 {
        Rotation2::new(self.rotation) * p * self.scale + self.translation
    }

    pub fn invert(&self, q: Vec2) -> Vec2 {
        Rotation2::new(-self.rotation) * (q - self.translation) / self.scale
    }

    /// Width/diameter ratio, the scale-free thinness of the body.
    pub fn aspect(&self) -> f64 {
        self.width / self.diameter
    }
}

/// A polygon in standard position together with the frame that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct NormalizedBody {
    pub polygon: ConvexPolygon,
    pub frame: BodyFrame,
    /// Width of the normalized polygon (equals `frame.width / frame.diameter`).
    pub width: f64,
}

/// Tolerance used when testing whether a polygon is already in standard position.
pub const NORMALIZED_TOL: f64 = 1e-9;

pub fn normalize(poly: &ConvexPolygon) -> Result<NormalizedBody> {
    let Diameter {
        length: d,
        endpoints: [a, b],
    } = calipers::diameter(poly);
    let Width {
        length: w, normal, ..
    } = calipers::width(poly);
    let dir = b - a;
    let rotation = -dir.y.atan2(dir.x);
    let scale = 1.0 / d;
    let rot = Rotation2::new(rotation);
    let translation = -(rot * a) * scale;
    let frame = BodyFrame {
        rotation,
        translation,
        scale,
        diameter_endpoints: [a, b],
        width_direction: normal,
        diameter: d,
        width: w,
    };
    let verts = poly.vertices();
    let start = verts
        .iter()
        .position(|&p| p == a)
        .expect("diameter endpoint is a vertex");
    let mapped: Vec<Vec2> = (0..verts.len())
        .map(|i| {
            let p = verts[(start + i) % verts.len()];
            if p == a {
                Vec2::zeros()
            } else if p == b {
                Vec2::new(1.0, 0.0)
            } else {
                frame.apply(p)
            }
        })
        .collect();
    let polygon = ConvexPolygon::new(mapped)?;
    Ok(NormalizedBody {
        width: w / d,
        polygon,
        frame,
    })
}

/// Checks standard position: `(0,0)` and `(1,0)` are vertices and the body lies in `x in [0, 1]`.
pub fn check_normalized(poly: &ConvexPolygon) -> Result<()> {
    let v = poly.vertices();
    let has = |q: Vec2| v.iter().any(|p| (p - q).norm() <= NORMALIZED_TOL);
    if !has(Vec2::zeros()) || !has(Vec2::new(1.0, 0.0)) {
        return Err(Error::NotNormalized(
            "(0,0) and (1,0) must both be vertices".into(),
        ));
    }
    if v
        .iter()
        .any(|p| p.x < -NORMALIZED_TOL || p.x > 1.0 + NORMALIZED_TOL)
    {
        return Err(Error::NotNormalized("vertex outside 0 <= x <= 1".into()));
    }
    let d = calipers::diameter(poly).length;
    if (d - 1.0).abs() > NORMALIZED_TOL {
        return Err(Error::NotNormalized(format!("diameter {d} is not 1")));
    }
    Ok(())
}

fn ser_vec<S: serde::Serializer>(v: &Vec2, s: S) -> std::result::Result<S::Ok, S::Error> {
    [v.x, v.y].serialize(s)
}

fn ser_pair<S: serde::Serializer>(v: &[Vec2; 2], s: S) -> std::result::Result<S::Ok, S::Error> {
    [[v[0].x, v[0].y], [v[1].x, v[1].y]].serialize(s)
}
