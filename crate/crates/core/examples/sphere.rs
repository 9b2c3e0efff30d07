//! Spherical length of circle preimages under rational maps, with the Poincaré estimate.

use lemni::spherical::{self, CircleOnSphere, RationalFunction};
use lemni::Complex64;

fn main() -> lemni::Result<()> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let cases = [
        ("z^3, real line", RationalFunction::monomial(3)?, CircleOnSphere::real_line()),
        ("z^3, unit circle", RationalFunction::monomial(3)?, CircleOnSphere::unit_circle()),
        (
            "(z^2+1)/z, unit circle",
            RationalFunction::new(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)])?,
            CircleOnSphere::unit_circle(),
        ),
        (
            "mobius, circle",
            RationalFunction::mobius(c(1.0, 0.0), c(0.5, 0.0), c(0.2, 0.0), c(1.0, 0.0))?,
            CircleOnSphere::Circle { center: c(0.3, 0.0), radius: 0.7 },
        ),
    ];
    for (name, f, circle) in cases {
        let curve = spherical::preimage_trace(&f, &circle)?;
        let est = spherical::poincare_length(&curve, 10_000, 0)?;
        println!(
            "{name:<24} length {:.6}  bound {:.6}  poincare {:.4} +- {:.4}",
            curve.spherical_length,
            std::f64::consts::TAU * f.degree() as f64,
            est.length,
            est.stderr
        );
    }
    Ok(())
}
