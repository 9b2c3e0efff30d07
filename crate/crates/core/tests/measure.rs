mod common;

use common::{bernoulli_length, c, line_solutions, power_plus_one_length, random_poly, rng, sublevel_samples};
use lemni::measure::{self, Line};
use lemni::{levelset, Complex64, MonicPolynomial, TraceOptions};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn bernoulli_matches_elliptic_integral() {
    let p = MonicPolynomial::from_roots(&[c(0.0, 1.0), c(0.0, -1.0)]).unwrap();
    let exact = measure::length_integral(&p, 1e-12).unwrap();
    let oracle = bernoulli_length();
    assert!((exact - oracle).abs() < 1e-9, "{exact} vs {oracle}");
    assert!((exact - 7.416).abs() < 5e-3);
}

#[test]
fn power_plus_one_matches_closed_form() {
    for d in 1..=6 {
        let p = MonicPolynomial::power_plus(d, c(1.0, 0.0)).unwrap();
        let got = measure::length_integral(&p, 1e-12).unwrap();
        let want = power_plus_one_length(d);
        assert!((got - want).abs() < 1e-7 * want, "d = {d}: {got} vs {want}");
    }
}

#[test]
fn monomials_give_the_unit_circle() {
    for d in 1..=6 {
        let got = measure::length_integral(&MonicPolynomial::monomial(d).unwrap(), 1e-12).unwrap();
        assert!((got - std::f64::consts::TAU).abs() < 1e-9);
    }
}

#[test]
fn estimators_agree_on_random_polynomials() {
    let mut r = rng(11);
    for _ in 0..6 {
        let p = random_poly(&mut r, 4, 1.5, 1e-2);
        let curve = levelset::trace(&p, &TraceOptions::default()).unwrap();
        let exact = measure::length_integral(&p, 1e-10).unwrap();
        let poly = measure::length_polyline(&curve);
        let crof = measure::crofton_length(&curve, 128, 128).unwrap();
        assert!((poly - exact).abs() < 1e-3 * exact);
        assert!((crof.length - exact).abs() < 2e-2 * exact);
    }
}

#[test]
fn imaginary_axis_meets_figure_eight_three_times() {
    let p = MonicPolynomial::from_roots(&[c(0.0, 1.0), c(0.0, -1.0)]).unwrap();
    let curve = levelset::trace(&p, &TraceOptions::default()).unwrap();
    let hit = measure::line_intersections(&curve, &Line::new(0.0, 0.0));
    assert_eq!(hit.points.len(), 3);
    assert_eq!(line_solutions(p.roots(), c(0.0, 0.0), c(0.0, 1.0), 3.0, 60_000, 1e-6), 3);
}

#[test]
fn line_counts_match_scan() {
    let mut r = rng(5);
    for _ in 0..4 {
        let p = random_poly(&mut r, 4, 1.5, 1e-2);
        let curve = levelset::trace(&p, &TraceOptions::default()).unwrap();
        for _ in 0..25 {
            let line = Line::new(r.random_range(0.0..std::f64::consts::PI), r.random_range(-2.0..2.0));
            let dir = Complex64::from_polar(1.0, line.theta);
            let got = measure::line_intersection_count(&curve, &line);
            let want = line_solutions(p.roots(), dir * line.x, dir * c(0.0, 1.0), 6.0, 200_000, 0.0);
            // the polyline chord can miss a crossing of a barely grazing line
            assert!(got.abs_diff(want) <= 1 && got <= 2 * p.degree());
        }
    }
}

#[test]
fn cartan_cover_contains_sampled_sublevel() {
    let mut r = rng(9);
    for k in 0..4 {
        let p = random_poly(&mut r, 5, 1.5, 0.0);
        for m in [0.25, 1.0, 4.0] {
            let cover = measure::cartan_cover(&p, m).unwrap();
            assert!(cover.certificate_holds());
            let bound = 2.0 * std::f64::consts::E * m.powf(1.0 / p.degree() as f64);
            assert!(cover.total_radius <= bound + 1e-9);
            for z in sublevel_samples(p.roots(), m, 2000, k) {
                assert!(cover.contains(z), "{z} uncovered at M = {m}");
            }
        }
    }
}

#[test]
fn projection_corollary_on_examples() {
    for roots in [vec![c(0.0, 1.0), c(0.0, -1.0)], vec![c(2.0, 0.0), c(-2.0, 0.0)], vec![c(0.5, 0.0); 3]] {
        let p = MonicPolynomial::from_roots(&roots).unwrap();
        let curve = levelset::trace(&p, &TraceOptions::default()).unwrap();
        assert!(measure::verify_projection_corollary(&curve, p.degree()));
    }
}

#[test]
fn alpha0_constant() {
    let a = measure::alpha0_bound();
    assert!(a < 9.173 && a > 9.172);
}

fn root() -> impl Strategy<Value = Complex64> {
    (-1.5..1.5f64, -1.5..1.5f64).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn crossing_counts_bounded(
        roots in prop::collection::vec(root(), 1..6),
        lines in prop::collection::vec((0.0..std::f64::consts::PI, -3.0..3.0f64), 40),
    ) {
        let p = MonicPolynomial::from_roots(&roots).unwrap();
        let curve = levelset::trace(&p, &TraceOptions::default()).unwrap();
        for (t, x) in lines {
            prop_assert!(measure::line_intersection_count(&curve, &Line::new(t, x)) <= 2 * roots.len());
        }
    }

    #[test]
    fn length_invariant_under_rigid_motion(roots in prop::collection::vec(root(), 1..5), shift in root(), alpha in 0.0..std::f64::consts::TAU) {
        let p = MonicPolynomial::from_roots(&roots).unwrap();
        let near = p.critical_values().unwrap().iter().any(|w| (w.norm() - 1.0).abs() < 1e-3);
        prop_assume!(!near);
        let l = measure::length_integral(&p, 1e-10).unwrap();
        let lt = measure::length_integral(&p.translated(shift), 1e-10).unwrap();
        let lr = measure::length_integral(&p.rotated(alpha), 1e-10).unwrap();
        prop_assert!((l - lt).abs() < 1e-6 * l);
        prop_assert!((l - lr).abs() < 1e-6 * l);
    }

    #[test]
    fn theorem1_bound(roots in prop::collection::vec(root(), 1..6)) {
        let p = MonicPolynomial::from_roots(&roots).unwrap();
        let l = measure::length_integral(&p, 1e-8).unwrap();
        prop_assert!(l <= measure::alpha0_bound() * roots.len() as f64);
    }
}
