use std::path::Path;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec2 = Vector2<f64>;

/// Tolerance for merging repeated and collinear vertices, relative to the squared extent.
pub const MERGE_TOL: f64 = 1e-12;

#[inline]
pub fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// A strictly convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Vec2>,
}

#[derive(Serialize, Deserialize)]
struct PolygonJson {
    vertices: Vec<[f64; 2]>,
}

impl ConvexPolygon {
    /// Validates and cleans a vertex loop.
    ///
    /// Repeated vertices and collinear vertices (within [`MERGE_TOL`]) are merged.
    /// A clockwise loop is reversed. Fails if fewer than three vertices remain or
    /// the loop turns the wrong way anywhere.
    pub fn new(points: Vec<Vec2>) -> Result<Self> {
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::Invalid("non-finite vertex coordinate".into()));
        }
        let extent = bounding_extent(&points);
        if extent == 0.0 {
            return Err(Error::Degenerate("all vertices coincide".into()));
        }
        let dup_tol = MERGE_TOL * extent;
        let mut pts: Vec<Vec2> = Vec::with_capacity(points.len());
        for p in points {
            if pts.last().is_none_or(|q: &Vec2| (p - q).norm() > dup_tol) {
                pts.push(p);
            }
        }
        while pts.len() > 1 && (pts[0] - pts[pts.len() - 1]).norm() <= dup_tol {
            pts.pop();
        }
        if pts.len() < 3 {
            return Err(Error::Degenerate(format!(
                "{} distinct vertices, need at least 3",
                pts.len()
            )));
        }
        if signed_area(&pts) < 0.0 {
            pts.reverse();
        }
        let turn_tol = MERGE_TOL * extent * extent;
        // drop collinear vertices until every turn is strictly positive
        loop {
            let n = pts.len();
            if n < 3 {
                return Err(Error::Degenerate("all vertices are collinear".into()));
            }
            let mut removed = false;
            for i in 0..n {
                let prev = pts[(i + n - 1) % n];
                let next = pts[(i + 1) % n];
                let c = cross(pts[i] - prev, next - pts[i]);
                if c.abs() <= turn_tol {
                    pts.remove(i);
                    removed = true;
                    break;
                }
                if c < 0.0 {
                    return Err(Error::NotConvex(format!(
                        "reflex turn at vertex {i} ({}, {})",
                        pts[i].x, pts[i].y
                    )));
                }
            }
            if !removed {
                break;
            }
        }
        if signed_area(&pts) <= turn_tol {
            return Err(Error::Degenerate("zero area".into()));
        }
        Ok(Self { vertices: pts })
    }

    pub fn from_xy(points: &[[f64; 2]]) -> Result<Self> {
        Self::new(points.iter().map(|p| Vec2::new(p[0], p[1])).collect())
    }

    /// Convex hull of a point cloud (Andrew's monotone chain).
    pub fn hull(points: &[Vec2]) -> Result<Self> {
        let mut pts: Vec<Vec2> = points.to_vec();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup();
        if pts.len() < 3 {
            return Err(Error::Degenerate("fewer than 3 distinct points".into()));
        }
        let mut lower: Vec<Vec2> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2
                && cross(lower[lower.len() - 1] - lower[lower.len() - 2], p - lower[lower.len() - 1])
                    <= 0.0
            {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Vec2> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2
                && cross(upper[upper.len() - 1] - upper[upper.len() - 2], p - upper[upper.len() - 1])
                    <= 0.0
            {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Self::new(lower)
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1` (cyclically).
    pub fn edge(&self, i: usize) -> (Vec2, Vec2) {
        let n = self.vertices.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    /// Outward unit normal of edge `i`.
    pub fn edge_normal(&self, i: usize) -> Vec2 {
        let (a, b) = self.edge(i);
        let d = (b - a).normalize();
        Vec2::new(d.y, -d.x)
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let (a, b) = self.edge(i);
                (b - a).norm()
            })
            .sum()
    }

    /// Interior angle at vertex `i`, in radians.
    pub fn interior_angle(&self, i: usize) -> f64 {
        let n = self.len();
        let p = self.vertices[i];
        let a = self.vertices[(i + n - 1) % n] - p;
        let b = self.vertices[(i + 1) % n] - p;
        cross(b, a).atan2(a.dot(&b)).abs()
    }

    /// Point-in-polygon with an absolute tolerance on the edge distance.
    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        (0..self.len()).all(|i| {
            let (a, b) = self.edge(i);
            let d = b - a;
            cross(d, p - a) / d.norm() >= -tol
        })
    }

    pub fn map(&self, f: impl Fn(Vec2) -> Vec2) -> Result<Self> {
        Self::new(self.vertices.iter().map(|&p| f(p)).collect())
    }

    /// Reads either the plain `x y` per-line form or `{"vertices": [[x, y], ...]}`.
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Invalid(message) => Error::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            let parsed: PolygonJson =
                serde_json::from_str(text).map_err(|e| Error::Invalid(e.to_string()))?;
            return Self::from_xy(&parsed.vertices);
        }
        let mut pts = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Invalid(format!(
                    "line {}: expected two numbers, got {:?}",
                    lineno + 1,
                    line
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Invalid(format!("line {}: {e}", lineno + 1)))
            };
            pts.push(Vec2::new(parse(fields[0])?, parse(fields[1])?));
        }
        Self::new(pts)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolygonJson {
            vertices: self.vertices.iter().map(|p| [p.x, p.y]).collect(),
        })
        .expect("polygon serializes")
    }

    pub fn to_text(&self) -> String {
        self.vertices
            .iter()
            .map(|p| format!("{:.17e} {:.17e}\n", p.x, p.y))
            .collect()
    }
}

impl Serialize for ConvexPolygon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolygonJson {
            vertices: self.vertices.iter().map(|p| [p.x, p.y]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConvexPolygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolygonJson::deserialize(d)?;
        ConvexPolygon::from_xy(&raw.vertices).map_err(serde::de::Error::custom)
    }
}

fn signed_area(pts: &[Vec2]) -> f64 {
    let n = pts.len();
    0.5 * (0..n).map(|i| cross(pts[i], pts[(i + 1) % n])).sum::<f64>()
}

fn bounding_extent(pts: &[Vec2]) -> f64 {
    let (mut lo, mut hi) = (Vec2::repeat(f64::INFINITY), Vec2::repeat(f64::NEG_INFINITY));
    for p in pts {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    if pts.is_empty() {
        0.0
    } else {
        (hi - lo).amax()
    }
}
