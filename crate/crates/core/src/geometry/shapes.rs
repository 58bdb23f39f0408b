//! Test bodies. Smooth shapes are inscribed polygons; with `n` vertices on a
//! curve of bounded curvature the Hausdorff error is O(n^-2), so the default
//! 512-vertex discretizations sit within ~1e-5 of the smooth boundary at unit scale.

use std::f64::consts::PI;

use super::polygon::{ConvexPolygon, Vec2};

/// Minimum vertex count for polygonal stand-ins of smooth bodies.
pub const SMOOTH_VERTICES: usize = 512;

fn build(points: Vec<Vec2>) -> ConvexPolygon {
    ConvexPolygon::new(points).expect("shape constructors produce valid polygons")
}

/// `[0, a] x [0, b]`.
pub fn rectangle(a: f64, b: f64) -> ConvexPolygon {
    build(vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(a, 0.0),
        Vec2::new(a, b),
        Vec2::new(0.0, b),
    ])
}

pub fn triangle(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> ConvexPolygon {
    build(vec![
        Vec2::new(a[0], a[1]),
        Vec2::new(b[0], b[1]),
        Vec2::new(c[0], c[1]),
    ])
}

/// Right triangle with legs 1 and `eps`, right angle at `(1, 0)`.
pub fn right_triangle(eps: f64) -> ConvexPolygon {
    triangle([0.0, 0.0], [1.0, 0.0], [1.0, eps])
}

/// Isoceles triangle with base `[0, 1]` and apex height `eps`.
pub fn isoceles_triangle(eps: f64) -> ConvexPolygon {
    triangle([0.0, 0.0], [1.0, 0.0], [0.5, eps])
}

/// Regular `n`-gon with the given circumradius, first vertex on the positive x axis.
pub fn regular_polygon(n: usize, radius: f64) -> ConvexPolygon {
    build(
        (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                Vec2::new(radius * t.cos(), radius * t.sin())
            })
            .collect(),
    )
}

/// Inscribed polygon of the ellipse with semi-axes `a`, `b`.
pub fn ellipse(a: f64, b: f64, n: usize) -> ConvexPolygon {
    build(
        (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                Vec2::new(a * t.cos(), b * t.sin())
            })
            .collect(),
    )
}

/// Stadium: the rectangle `[0, len] x [-r, r]` capped by two half-disks,
/// `n_cap + 1` vertices per cap.
pub fn stadium(len: f64, r: f64, n_cap: usize) -> ConvexPolygon {
    let mut pts = Vec::with_capacity(2 * n_cap + 2);
    for i in 0..=n_cap {
        let t = -PI / 2.0 + PI * i as f64 / n_cap as f64;
        pts.push(Vec2::new(len + r * t.cos(), r * t.sin()));
    }
    for i in 0..=n_cap {
        let t = PI / 2.0 + PI * i as f64 / n_cap as f64;
        pts.push(Vec2::new(r * t.cos(), r * t.sin()));
    }
    build(pts)
}

/// Stadium of total length 1 and thickness `eps`.
pub fn thin_stadium(eps: f64) -> ConvexPolygon {
    stadium(1.0 - eps, eps / 2.0, SMOOTH_VERTICES / 2)
}
