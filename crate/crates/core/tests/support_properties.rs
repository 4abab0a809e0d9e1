mod common;

use common::*;
use proptest::prelude::*;
use rci_bounds::bounds::support_sum_lower_bound;
use rci_bounds::sets::{minkowski_diff, minkowski_sum_2d, probe_directions, ConvexSet, VPolytope};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn support_matches_vertex_maximum((s, pts) in any_set(), z in direction()) {
        let h = s.support(&z).unwrap();
        prop_assert!((h - brute_support(&pts, &z)).abs() <= 1e-9 * (1.0 + h.abs()));
    }

    #[test]
    fn positively_homogeneous((s, _) in any_set(), z in direction(), t in 0.0..10.0f64) {
        let a = s.support(&(&z * t)).unwrap();
        let b = t * s.support(&z).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
    }

    #[test]
    fn subadditive((s, _) in any_set(), z1 in direction(), z2 in direction()) {
        let lhs = s.support(&(&z1 + &z2)).unwrap();
        let rhs = s.support(&z1).unwrap() + s.support(&z2).unwrap();
        prop_assert!(lhs <= rhs + 1e-9);
    }

    #[test]
    fn sum_adds_supports((p, _) in any_set(), (q, _) in any_set(), z in direction()) {
        let sum: ConvexSet = minkowski_sum_2d(&p, &q).unwrap().into();
        let expect = p.support(&z).unwrap() + q.support(&z).unwrap();
        prop_assert!((sum.support(&z).unwrap() - expect).abs() <= 1e-9 * (1.0 + expect.abs()));
    }

    #[test]
    fn image_pulls_back_direction((s, pts) in any_set(), m in matrix2(), z in direction()) {
        let img: ConvexSet = s.linear_image(&m).unwrap().into();
        let mapped: Vec<_> = pts.iter().map(|p| &m * p).collect();
        let h = img.support(&z).unwrap();
        prop_assert!((h - s.support_of_image(&m, &z).unwrap()).abs() <= 1e-9 * (1.0 + h.abs()));
        prop_assert!((h - brute_support(&mapped, &z)).abs() <= 1e-9 * (1.0 + h.abs()));
    }

    #[test]
    fn reflection_and_scaling((s, _) in any_set(), z in direction(), a in 0.0..5.0f64) {
        let r = s.reflect().unwrap();
        prop_assert!((r.support(&z).unwrap() - s.support(&-&z).unwrap()).abs() <= 1e-12 * (1.0 + z.norm()) * 10.0);
        let sc = s.scale(a).unwrap();
        prop_assert!((sc.support(&z).unwrap() - a * s.support(&z).unwrap()).abs() <= 1e-9 * (1.0 + a));
    }

    #[test]
    fn erosion_then_sum_stays_inside(pts in c_set_points(3.0), wpts in c_set_points(0.5)) {
        let p = hull_h(&pts).to_hpolytope().unwrap();
        let w: ConvexSet = VPolytope::new(wpts).unwrap().into();
        let e: ConvexSet = minkowski_diff(&p, &w).unwrap().into();
        if !e.is_empty().unwrap() {
            let back: ConvexSet = minkowski_sum_2d(&e, &w).unwrap().into();
            let outer: ConvexSet = p.into();
            for z in probe_directions(2) {
                prop_assert!(back.support(&z).unwrap() <= outer.support(&z).unwrap() + 1e-9);
            }
        }
    }

    #[test]
    fn sum_of_directions_sandwich(pts in c_set_points(3.0), zs in prop::collection::vec(direction(), 2..6)) {
        let y = hull_h(&pts);
        let values: Vec<(f64, f64)> = zs.iter().map(|z| (y.support(z).unwrap(), y.support(&-z).unwrap())).collect();
        let total = zs.iter().fold(v(&[0.0, 0.0]), |acc, z| acc + z);
        let h = y.support(&total).unwrap();
        let upper: f64 = values.iter().map(|p| p.0).sum();
        let lower = support_sum_lower_bound(&values);
        prop_assert!(lower <= h + 1e-9);
        prop_assert!(h <= upper + 1e-9);
    }
}
