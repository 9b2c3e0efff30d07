//! A line meets a degree-d lemniscate in at most 2d points.

use lemni::measure::{self, Line};
use lemni::{levelset, Complex64, MonicPolynomial, TraceOptions};

fn main() -> lemni::Result<()> {
    let p = MonicPolynomial::from_roots(&[Complex64::i(), -Complex64::i()])?;
    let curve = levelset::trace(&p, &TraceOptions::default())?;

    for (name, line) in [
        ("real axis", Line::new(std::f64::consts::FRAC_PI_2, 0.0)),
        ("imaginary axis", Line::new(0.0, 0.0)),
        ("Re z = 0.5", Line::new(0.0, 0.5)),
        ("Im z = 0.3", Line::new(std::f64::consts::FRAC_PI_2, 0.3)),
    ] {
        let hit = measure::line_intersections(&curve, &line);
        println!("{name:<15} {} points (tangent shift: {})", hit.points.len(), hit.perturbed);
    }

    let (px, py) = measure::projection_lengths(&curve);
    println!("projections {px:.4} {py:.4}, corollary holds: {}", measure::verify_projection_corollary(&curve, 2));
    Ok(())
}
