mod common;

use common::{c, grid_components, product};
use lemni::levelset::{self, cycles};
use lemni::{Complex64, MonicPolynomial, TraceOptions};
use proptest::prelude::*;

#[test]
fn component_counts_match_grid() {
    let p = MonicPolynomial::from_roots(&[c(2.0, 0.0), c(-2.0, 0.0)]).unwrap();
    assert_eq!(levelset::component_count(&p).unwrap(), 2);
    assert_eq!(grid_components(p.roots(), 600, 1e-3), 2);
    for d in 2..=5 {
        let p = MonicPolynomial::power_plus(d, c(1.0, 0.0)).unwrap();
        assert_eq!(levelset::component_count(&p).unwrap(), 1, "d = {d}");
        assert_eq!(grid_components(p.roots(), 600, 1e-2), 1, "d = {d}");
    }
}

#[test]
fn monodromy_of_monomial_is_a_full_cycle() {
    for d in 1..=6 {
        let m = levelset::monodromy(&MonicPolynomial::monomial(d).unwrap()).unwrap();
        let cyc = cycles(&m.permutation);
        assert_eq!(cyc.len(), 1);
        assert_eq!(cyc[0].len(), d);
    }
}

#[test]
fn figure_eight_has_one_touch_point() {
    let p = MonicPolynomial::from_roots(&[c(0.0, 1.0), c(0.0, -1.0)]).unwrap();
    let curve = levelset::trace(&p, &TraceOptions::default()).unwrap();
    assert_eq!(curve.component_count(), 1);
    assert_eq!(curve.touch_points.len(), 1);
    assert!(curve.touch_points[0].norm() < 1e-8);
}

fn root() -> impl Strategy<Value = Complex64> {
    (-1.5..1.5f64, -1.5..1.5f64).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn vertices_lie_on_the_curve(roots in prop::collection::vec(root(), 1..5)) {
        let p = MonicPolynomial::from_roots(&roots).unwrap();
        let curve = levelset::trace(&p, &TraceOptions::default()).unwrap();
        for z in curve.points() {
            prop_assert!((product(&roots, z).norm() - 1.0).abs() < 1e-7);
        }
        prop_assert_eq!(curve.vertex_count(), curve.points().count());
    }

    #[test]
    fn components_agree_with_grid(roots in prop::collection::vec(root(), 1..5)) {
        let p = MonicPolynomial::from_roots(&roots).unwrap();
        let near = p.critical_values().unwrap().iter().any(|w| (w.norm() - 1.0).abs() < 0.05);
        prop_assume!(!near);
        let n = levelset::component_count(&p).unwrap();
        prop_assert_eq!(n, grid_components(&roots, 500, 1e-4));
    }

    #[test]
    fn count_is_invariant_under_rigid_motion(
        roots in prop::collection::vec(root(), 1..5),
        shift in root(),
        alpha in 0.0..std::f64::consts::TAU,
    ) {
        let p = MonicPolynomial::from_roots(&roots).unwrap();
        let near = p.critical_values().unwrap().iter().any(|w| (w.norm() - 1.0).abs() < 1e-3);
        prop_assume!(!near);
        let n = levelset::component_count(&p).unwrap();
        prop_assert_eq!(n, levelset::component_count(&p.translated(shift)).unwrap());
        prop_assert_eq!(n, levelset::component_count(&p.rotated(alpha)).unwrap());
    }
}
