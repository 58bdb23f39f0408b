mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use thinspec::fem::{mixed_eigs, neumann_eigs, triangulate};
use thinspec::geometry::{normalize, shapes, slice_profile, Vec2};
use thinspec::segment::{
    dirichlet_schroedinger_eigs, liouville_transform, random_concave_profile, segment_from_profile, sl_eigs, Weight,
    WeightedSegment,
};
use thinspec::special::{bessel_zero, kroger_bound};

use common::{bessel_zero_bisection, unit_square_neumann};

#[test]
fn bessel_zeros_match_bisection() {
    for nu in 0..4u32 {
        for k in 1..=5 {
            let got = bessel_zero(nu as f64, k).unwrap();
            let want = bessel_zero_bisection(nu, k);
            assert!((got - want).abs() < 1e-10, "j_({nu},{k}): {got} vs {want}");
        }
    }
}

#[test]
fn kroger_formula_in_the_plane() {
    let j01 = bessel_zero_bisection(0, 1);
    for k in 1..=6 {
        let want = 4.0 * (j01 + (k - 1) as f64 * PI / 2.0).powi(2);
        assert!((kroger_bound(2, k).unwrap().value - want).abs() < 1e-9 * want);
    }
}

#[test]
fn unit_square_neumann_spectrum() {
    let fs = neumann_eigs(&triangulate(&shapes::rectangle(1.0, 1.0), 0.05).unwrap(), 5).unwrap();
    let s = &fs.spectrum;
    for (k, exact) in unit_square_neumann(6).into_iter().enumerate() {
        let err = (s.eigenvalues[k] - exact).abs();
        assert!(err <= s.error_estimates[k] + 1e-9, "k={k}: {} vs {exact}", s.eigenvalues[k]);
    }
    assert!(s.clusters.iter().any(|c| c == &vec![1, 2]));
    assert!(s.clusters.iter().any(|c| c == &vec![4, 5]));
}

#[test]
fn rectangle_mixed_spectra() {
    let b = 0.3;
    let rect = shapes::rectangle(1.0, b);
    let mut mesh = triangulate(&rect, 0.03).unwrap();
    mesh.set_dirichlet_where(|n| n.y > 0.5);
    let top = mixed_eigs(&mesh, 2).unwrap();
    let quarter = PI * PI / (4.0 * b * b);
    assert!((top.spectrum.eigenvalues[0] - quarter).abs() <= top.spectrum.error_estimates[0] + 1e-9 * quarter);
    // second mode adds one half-wave along x
    let second = quarter + PI * PI;
    assert!((top.spectrum.eigenvalues[1] - second).abs() <= top.spectrum.error_estimates[1] + 1e-9 * second);

    mesh.set_dirichlet_where(|_| true);
    let all = mixed_eigs(&mesh, 1).unwrap();
    let exact = PI * PI * (1.0 + 1.0 / (b * b));
    assert!((all.spectrum.eigenvalues[0] - exact).abs() <= all.spectrum.error_estimates[0] + 1e-9 * exact);
}

#[test]
fn segment_bessel_and_constant_weights() {
    let lin = WeightedSegment::new(Weight::named("linear").unwrap()).unwrap();
    let s = sl_eigs(&lin, 5, 2000).unwrap();
    for k in 1..=5 {
        let exact = bessel_zero_bisection(1, k).powi(2);
        assert!((s.eigenvalues[k] - exact).abs() < 1e-6 * exact, "k={k}");
    }
    let flat = WeightedSegment::new(Weight::named("constant").unwrap()).unwrap();
    let s = sl_eigs(&flat, 5, 1000).unwrap();
    for k in 1..=5 {
        let exact = (k as f64 * PI).powi(2);
        assert!((s.eigenvalues[k] - exact).abs() < 1e-8 * exact, "k={k}");
    }
}

#[test]
fn liouville_on_smoothed_tent() {
    let seg = WeightedSegment::new(Weight::named("smooth-tent").unwrap()).unwrap();
    let prob = liouville_transform(&seg).unwrap();
    let mu = sl_eigs(&seg, 5, 2000).unwrap();
    let lam = dirichlet_schroedinger_eigs(&prob, 5, 2000).unwrap();
    for k in 1..=5 {
        let rel = (lam.eigenvalues[k - 1] - mu.eigenvalues[k]).abs() / mu.eigenvalues[k];
        assert!(rel < 1e-3, "k={k}: {rel}");
    }
    let tent = WeightedSegment::new(Weight::named("tent").unwrap()).unwrap();
    assert!(liouville_transform(&tent).is_err());
}

#[test]
fn thin_right_triangle_collapses_to_bessel() {
    let j11 = bessel_zero_bisection(1, 1).powi(2);
    let mut last = f64::INFINITY;
    for eps in [0.05, 0.025, 0.0125] {
        let nb = normalize(&shapes::right_triangle(eps)).unwrap();
        let seg = segment_from_profile(slice_profile(&nb.polygon, 64).unwrap()).unwrap();
        let dev = sl_eigs(&seg, 1, 2000).unwrap().eigenvalues[1] - j11;
        assert!(dev > 0.0 && dev < last);
        last = dev;
    }
    assert!(last / j11 < 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn concave_profiles_obey_pi_squared(seed in any::<u64>()) {
        let seg = segment_from_profile(random_concave_profile(seed)).unwrap();
        let s = sl_eigs(&seg, 4, 400).unwrap();
        for k in 1..=4 {
            let floor = (k as f64 * PI).powi(2);
            prop_assert!(s.eigenvalues[k] >= floor - 3.0 * s.error_estimates[k]);
        }
    }

    #[test]
    fn fem_spectrum_is_rigid_motion_invariant(angle in 0.0..std::f64::consts::TAU, dx in -2.0..2.0f64) {
        let tri = shapes::triangle([0.0, 0.0], [1.0, 0.0], [0.3, 0.4]);
        let (c, s) = (angle.cos(), angle.sin());
        let moved = tri.map(|v| Vec2::new(c * v.x - s * v.y + dx, s * v.x + c * v.y)).unwrap();
        let a = neumann_eigs(&triangulate(&tri, 0.08).unwrap(), 3).unwrap().spectrum;
        let b = neumann_eigs(&triangulate(&moved, 0.08).unwrap(), 3).unwrap().spectrum;
        for k in 1..=3 {
            let tol = 3.0 * (a.error_estimates[k] + b.error_estimates[k]);
            prop_assert!((a.eigenvalues[k] - b.eigenvalues[k]).abs() <= tol, "k={k}");
        }
    }
}
