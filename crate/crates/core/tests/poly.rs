mod common;

use common::{c, product};
use lemni::{Complex64, Error, MonicPolynomial};
use proptest::prelude::*;

fn root() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #[test]
    fn evaluation_matches_product(roots in prop::collection::vec(root(), 1..8), z in root()) {
        let p = MonicPolynomial::from_roots(&roots).unwrap();
        let want = product(&roots, z);
        prop_assert!((p.evaluate(z) - want).norm() <= 1e-10 * (1.0 + want.norm()));
    }

    #[test]
    fn coefficients_recover_roots(roots in prop::collection::vec(root(), 1..6)) {
        let p = MonicPolynomial::from_roots(&roots).unwrap();
        let q = MonicPolynomial::from_coefficients(p.coefficients()).unwrap();
        for r in q.roots() {
            prop_assert!(p.evaluate(*r).norm() < 1e-7);
        }
    }

    #[test]
    fn critical_points_annihilate_derivative(roots in prop::collection::vec(root(), 2..7)) {
        let p = MonicPolynomial::from_roots(&roots).unwrap();
        let crit = p.critical_points().unwrap();
        prop_assert_eq!(crit.len(), p.degree() - 1);
        let scale = 1.0 + p.max_root_modulus().powi(p.degree() as i32);
        for z in crit {
            prop_assert!(p.derivative_at(z).norm() < 1e-6 * scale);
        }
    }
}

#[test]
fn rejects_bad_input() {
    assert!(matches!(MonicPolynomial::from_coefficients(&[c(1.0, 0.0), c(2.0, 0.0)]), Err(Error::NonMonic { .. })));
    assert!(matches!(MonicPolynomial::from_roots(&[]), Err(Error::DegreeZero)));
    assert!(matches!(MonicPolynomial::from_roots(&[c(f64::NAN, 0.0)]), Err(Error::NonFinite(_))));
    assert!(MonicPolynomial::from_roots(&vec![c(0.0, 0.0); 65]).is_err());
}

#[test]
fn preimages_lie_on_fibre() {
    let p = MonicPolynomial::from_roots(&[c(0.3, 0.1), c(-1.0, 0.4), c(0.5, -0.9)]).unwrap();
    let w = Complex64::from_polar(1.0, 0.7);
    let zs = p.solve_preimages(w, None).unwrap();
    assert_eq!(zs.len(), 3);
    for z in zs {
        assert!((product(p.roots(), z) - w).norm() < 1e-10);
    }
}
