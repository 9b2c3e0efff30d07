mod common;

use common::{c, random_circle, random_rational, rng};
use lemni::spherical::{self, CircleOnSphere, RationalFunction, SpherePoint};
use lemni::{levelset, Complex64, MonicPolynomial, TraceOptions};
use proptest::prelude::*;
use std::f64::consts::TAU;

#[test]
fn monomial_real_line_is_extremal() {
    for d in 1..=4 {
        let curve = spherical::preimage_trace(&RationalFunction::monomial(d).unwrap(), &CircleOnSphere::real_line()).unwrap();
        assert!((curve.spherical_length - TAU * d as f64).abs() < 1e-3, "d = {d}: {}", curve.spherical_length);
    }
}

#[test]
fn unit_circle_is_a_great_circle() {
    let f = RationalFunction::monomial(3).unwrap();
    let curve = spherical::preimage_trace(&f, &CircleOnSphere::unit_circle()).unwrap();
    assert!((curve.spherical_length - TAU).abs() < 1e-3);
}

#[test]
fn random_rationals_obey_bound_and_poincare() {
    let mut r = rng(21);
    for k in 0..5 {
        let f = random_rational(&mut r, 3);
        let circle = random_circle(&mut r);
        let curve = spherical::preimage_trace(&f, &circle).unwrap();
        let bound = TAU * f.degree() as f64;
        assert!(curve.spherical_length <= bound + 1e-3, "{k}: {} > {bound}", curve.spherical_length);
        let est = spherical::poincare_length(&curve, 4000, k).unwrap();
        let tol = (0.02 * curve.spherical_length).max(4.0 * est.stderr);
        assert!((est.length - curve.spherical_length).abs() <= tol);
        assert_eq!(est.over_bound, 0);
    }
}

#[test]
fn polynomial_case_matches_planar_trace() {
    // spherical arc length of E(p) against 2|dz|/(1+|z|^2) along the planar polyline
    let p = MonicPolynomial::from_roots(&[c(0.0, 1.0), c(0.0, -1.0)]).unwrap();
    let planar = levelset::trace(&p, &TraceOptions::default()).unwrap();
    let chordal: f64 = planar
        .polylines()
        .iter()
        .map(|pl| {
            (0..pl.len())
                .map(|k| {
                    let (a, b) = (pl[k], pl[(k + 1) % pl.len()]);
                    let m = (a + b) / 2.0;
                    2.0 * (b - a).norm() / (1.0 + m.norm_sqr())
                })
                .sum::<f64>()
        })
        .sum();
    let f = RationalFunction::new(p.coefficients(), &[c(1.0, 0.0)]).unwrap();
    let curve = spherical::preimage_trace(&f, &CircleOnSphere::unit_circle()).unwrap();
    assert!((curve.spherical_length - chordal).abs() < 1e-3 * chordal, "{} vs {chordal}", curve.spherical_length);
}

fn point() -> impl Strategy<Value = Complex64> {
    (-4.0..4.0f64, -4.0..4.0f64).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #[test]
    fn chordal_distance_is_symmetric_and_bounded(a in point(), b in point()) {
        let (pa, pb) = (SpherePoint::new(a), SpherePoint::new(b));
        let d = pa.chordal(&pb);
        prop_assert!((d - pb.chordal(&pa)).abs() < 1e-12);
        prop_assert!(d <= 2.0 + 1e-12);
        let want = 2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt();
        prop_assert!((d - want).abs() < 1e-9);
        prop_assert!(pa.geodesic(&pb) >= d - 1e-12);
    }

    #[test]
    fn unit_vectors_lie_on_sphere(a in point()) {
        let v = SpherePoint::new(a).unit_vector();
        prop_assert!((v[0] * v[0] + v[1] * v[1] + v[2] * v[2] - 1.0).abs() < 1e-12);
    }
}
