mod common;

use common::c;
use lemni::geometry::{self, convex_hull};
use lemni::{levelset, Complex64, MonicPolynomial, TraceOptions};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #[test]
    fn hull_contains_its_points(pts in prop::collection::vec(point(), 1..40)) {
        let h = convex_hull(&pts);
        for z in &pts {
            prop_assert!(h.contains(*z));
        }
        prop_assert!(h.diameter <= h.perimeter / 2.0 + 1e-9);
    }

    #[test]
    fn hull_perimeter_is_monotone(pts in prop::collection::vec(point(), 3..30), extra in prop::collection::vec(point(), 1..10)) {
        let small = convex_hull(&pts);
        let mut all = pts.clone();
        all.extend(extra);
        let big = convex_hull(&all);
        prop_assert!(big.perimeter >= small.perimeter - 1e-9);
        prop_assert!(big.diameter >= small.diameter - 1e-12);
    }

    #[test]
    fn diameter_is_max_pairwise_distance(pts in prop::collection::vec(point(), 2..25)) {
        let brute = pts.iter().flat_map(|a| pts.iter().map(move |b| (a - b).norm())).fold(0.0, f64::max);
        prop_assert!((convex_hull(&pts).diameter - brute).abs() < 1e-12);
    }
}

#[test]
fn square_hull() {
    let h = convex_hull(&[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0), c(0.5, 0.5)]);
    assert_eq!(h.vertices.len(), 4);
    assert!((h.perimeter - 4.0).abs() < 1e-12);
    assert!((h.diameter - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn connected_lemniscates_respect_hull_bound() {
    for d in 1..=6 {
        let p = MonicPolynomial::power_plus(d, c(1.0, 0.0)).unwrap();
        let curve = levelset::trace(&p, &TraceOptions::default()).unwrap();
        let check = geometry::hull_check(&curve);
        assert!(check.applicable && check.holds, "d = {d}: {check:?}");
        assert!(geometry::verify_lemma3(&curve));
    }
    let split = MonicPolynomial::from_roots(&[c(2.0, 0.0), c(-2.0, 0.0)]).unwrap();
    let check = geometry::hull_check(&levelset::trace(&split, &TraceOptions::default()).unwrap());
    assert!(!check.applicable);
}
