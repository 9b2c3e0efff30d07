//! Convex hull perimeters of connected lemniscates stay below 9.1723.

use lemni::geometry;
use lemni::{levelset, Complex64, MonicPolynomial, TraceOptions};

fn main() -> lemni::Result<()> {
    for d in 1..=6 {
        let p = MonicPolynomial::power_plus(d, Complex64::new(1.0, 0.0))?;
        let curve = levelset::trace(&p, &TraceOptions::default())?;
        let check = geometry::hull_check(&curve);
        let hull = geometry::convex_hull(&curve.points().collect::<Vec<_>>());
        println!(
            "z^{d}+1  perimeter {:.4}  diameter {:.4}  bound {:.4}  holds {}",
            check.perimeter, hull.diameter, check.bound, check.holds
        );
    }
    Ok(())
}
