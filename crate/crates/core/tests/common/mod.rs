//! Independent reference values for the integration and acceptance targets.

#![allow(dead_code)]

use std::f64::consts::PI;

/// `J_n(x) = (1/2π) ∫_0^{2π} cos(nτ − x sin τ) dτ` by the periodic trapezoid rule,
/// which converges geometrically once the node count exceeds `|x| + n`.
pub fn bessel_j_integral(n: u32, x: f64) -> f64 {
    let m = 64 + 2 * (x.abs() as usize + n as usize);
    let h = 2.0 * PI / m as f64;
    (0..m)
        .map(|i| {
            let t = i as f64 * h;
            (n as f64 * t - x * t.sin()).cos()
        })
        .sum::<f64>()
        / m as f64
}

/// The `k`-th positive zero of `J_n` by a sign scan and bisection to machine precision.
pub fn bessel_zero_bisection(n: u32, k: usize) -> f64 {
    let f = |x| bessel_j_integral(n, x);
    let step = 0.05;
    let mut a = 0.5;
    let mut found = 0;
    loop {
        let b = a + step;
        if f(a) * f(b) < 0.0 {
            found += 1;
            if found == k {
                let (mut lo, mut hi) = (a, b);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if f(lo) * f(mid) <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return 0.5 * (lo + hi);
            }
        }
        a = b;
    }
}

/// Unit-square Neumann eigenvalues `π²(i² + j²)`, ascending, first `count`.
pub fn unit_square_neumann(count: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..10)
        .flat_map(|i| (0..10).map(move |j| PI * PI * (i * i + j * j) as f64))
        .collect();
    v.sort_by(f64::total_cmp);
    v.truncate(count);
    v
}

/// Width of a convex polygon as the smallest extent over its edge normals.
pub fn brute_width(pts: &[[f64; 2]]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let len = dx.hypot(dy);
            let (nx, ny) = (-dy / len, dx / len);
            let proj: Vec<f64> = pts.iter().map(|p| p[0] * nx + p[1] * ny).collect();
            proj.iter().copied().fold(f64::NEG_INFINITY, f64::max) - proj.iter().copied().fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Largest pairwise vertex distance.
pub fn brute_diameter(pts: &[[f64; 2]]) -> f64 {
    let mut d: f64 = 0.0;
    for p in pts {
        for q in pts {
            d = d.max((p[0] - q[0]).hypot(p[1] - q[1]));
        }
    }
    d
}
