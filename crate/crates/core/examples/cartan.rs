//! Disc covers of sublevel sets {|p| < M} with total radius 2e M^{1/d}.

use lemni::measure;
use lemni::{Complex64, MonicPolynomial};

fn main() -> lemni::Result<()> {
    let roots = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.1, 0.05),
        Complex64::new(1.5, 0.0),
        Complex64::new(-1.0, 1.0),
    ];
    let p = MonicPolynomial::from_roots(&roots)?;
    for m in [0.01, 0.25, 1.0, 4.0] {
        let cover = measure::cartan_cover(&p, m)?;
        println!("M = {m:<5} total radius {:.4} (bound {:.4}), {} discs", cover.total_radius, cover.bound, cover.discs.len());
        for disc in &cover.discs {
            println!("    centre {:.3}, radius {:.4}", disc.center, disc.radius);
        }
    }
    Ok(())
}
