//! Diameter and minimal width of convex polygons.

use serde::Serialize;

use super::polygon::{cross, ConvexPolygon, Vec2};

/// Relative tolerance under which two candidate diameters count as tied.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diameter {
    pub length: f64,
    /// Lexicographically ordered endpoints (`endpoints[0] < endpoints[1]`).
    #[serde(serialize_with = "ser_pair")]
    pub endpoints: [Vec2; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Width {
    pub length: f64,
    /// The direction `v` whose orthogonal projection has the smallest diameter;
    /// the supporting strip runs parallel to it.
    #[serde(serialize_with = "ser_vec")]
    pub direction: Vec2,
    /// Unit normal of the strip, i.e. the direction along which the width is measured.
    #[serde(serialize_with = "ser_vec")]
    pub normal: Vec2,
    /// Index of the polygon edge lying on one side of the minimal strip.
    pub edge: usize,
}

fn lex_less(a: Vec2, b: Vec2) -> bool {
    a.x < b.x || (a.x == b.x && a.y < b.y)
}

fn ordered(a: Vec2, b: Vec2) -> [Vec2; 2] {
    if lex_less(b, a) {
        [b, a]
    } else {
        [a, b]
    }
}

fn pair_less(p: [Vec2; 2], q: [Vec2; 2]) -> bool {
    if p[0] != q[0] {
        lex_less(p[0], q[0])
    } else {
        lex_less(p[1], q[1])
    }
}

/// Largest vertex-to-vertex distance; near-ties go to the lexicographically smallest pair.
pub fn diameter(poly: &ConvexPolygon) -> Diameter {
    let v = poly.vertices();
    let n = v.len();
    let mut best_d2 = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            best_d2 = best_d2.max((v[i] - v[j]).norm_squared());
        }
    }
    let cutoff = best_d2 * (1.0 - 2.0 * TIE_TOL);
    let mut best: Option<[Vec2; 2]> = None;
    for i in 0..n {
        for j in i + 1..n {
            if (v[i] - v[j]).norm_squared() >= cutoff {
                let pair = ordered(v[i], v[j]);
                if best.is_none_or(|b| pair_less(pair, b)) {
                    best = Some(pair);
                }
            }
        }
    }
    let endpoints = best.expect("a valid polygon has at least one vertex pair");
    Diameter {
        length: (endpoints[1] - endpoints[0]).norm(),
        endpoints,
    }
}

/// Minimal strip width by rotating calipers over edge/antipodal-vertex pairs.
pub fn width(poly: &ConvexPolygon) -> Width {
    let v = poly.vertices();
    let n = v.len();
    let height = |e: usize, k: usize| {
        let (a, b) = poly.edge(e);
        cross(b - a, v[k] - a) / (b - a).norm()
    };
    let mut k = 1usize;
    while height(0, (k + 1) % n) >= height(0, k) && (k + 1) % n != 0 {
        k = (k + 1) % n;
    }
    let mut best = (f64::INFINITY, 0usize);
    for e in 0..n {
        // the antipodal vertex only advances as the edge rotates
        while height(e, (k + 1) % n) >= height(e, k) && (k + 1) % n != e {
            k = (k + 1) % n;
        }
        let h = height(e, k);
        if h < best.0 - TIE_TOL * h {
            best = (h, e);
        }
    }
    let (a, b) = poly.edge(best.1);
    let direction = (b - a).normalize();
    Width {
        length: best.0,
        direction,
        normal: Vec2::new(direction.y, -direction.x),
        edge: best.1,
    }
}

/// Extent of the polygon along a unit direction.
pub fn extent_along(poly: &ConvexPolygon, dir: Vec2) -> f64 {
    let (lo, hi) = poly
        .vertices()
        .iter()
        .map(|p| p.dot(&dir))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| {
            (lo.min(t), hi.max(t))
        });
    hi - lo
}

fn ser_vec<S: serde::Serializer>(v: &Vec2, s: S) -> Result<S::Ok, S::Error> {
    [v.x, v.y].serialize(s)
}

fn ser_pair<S: serde::Serializer>(v: &[Vec2; 2], s: S) -> Result<S::Ok, S::Error> {
    [[v[0].x, v[0].y], [v[1].x, v[1].y]].serialize(s)
}
