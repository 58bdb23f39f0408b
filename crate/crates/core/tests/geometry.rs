mod common;

use proptest::prelude::*;
use thinspec::geometry::{check_normalized, diameter, normalize, slice_profile, width, ConvexPolygon, Vec2};

use common::{brute_diameter, brute_width};

fn hull_strategy() -> impl Strategy<Value = ConvexPolygon> {
    (prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 5..30), 0.02..1.0f64).prop_filter_map(
        "degenerate hull",
        |(pts, squash)| {
            let pts: Vec<Vec2> = pts.into_iter().map(|(x, y)| Vec2::new(x, squash * y)).collect();
            ConvexPolygon::hull(&pts).ok().filter(|p| p.len() >= 3 && p.area() > 1e-6)
        },
    )
}

fn xy(p: &ConvexPolygon) -> Vec<[f64; 2]> {
    p.vertices().iter().map(|v| [v.x, v.y]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn calipers_match_brute_force(p in hull_strategy()) {
        let pts = xy(&p);
        prop_assert!((width(&p).length - brute_width(&pts)).abs() <= 1e-12 * brute_diameter(&pts));
        prop_assert!((diameter(&p).length - brute_diameter(&pts)).abs() <= 1e-12 * brute_diameter(&pts));
    }

    #[test]
    fn normalization_round_trips(p in hull_strategy()) {
        let nb = normalize(&p).unwrap();
        check_normalized(&nb.polygon).unwrap();
        for v in p.vertices() {
            let back = nb.frame.invert(nb.frame.apply(*v));
            prop_assert!((back - v).norm() < 1e-12);
        }
        prop_assert!((nb.width - nb.frame.aspect()).abs() < 1e-12);
        prop_assert!((nb.polygon.area() - p.area() * nb.frame.scale.powi(2)).abs() < 1e-10);
    }

    #[test]
    fn width_ratio_is_similarity_invariant(
        p in hull_strategy(),
        angle in 0.0..std::f64::consts::TAU,
        scale in 0.1..10.0f64,
        shift in (-5.0..5.0f64, -5.0..5.0f64),
    ) {
        let (c, s) = (angle.cos(), angle.sin());
        let q = p.map(|v| Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y) * scale + Vec2::new(shift.0, shift.1)).unwrap();
        let (a, b) = (normalize(&p).unwrap().width, normalize(&q).unwrap().width);
        prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn profile_integrates_to_area(p in hull_strategy()) {
        let nb = normalize(&p).unwrap();
        let prof = slice_profile(&nb.polygon, 32).unwrap();
        prop_assert!((prof.integral - nb.polygon.area()).abs() < 1e-9);
        prop_assert!(prof.is_concave());
        let ys: Vec<f64> = nb.polygon.vertices().iter().map(|v| v.y).collect();
        let extent = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max) - ys.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert!(extent >= nb.width - 1e-12);
        prop_assert!(prof.values().iter().all(|h| *h <= extent + 1e-12));
    }
}
