//! Exact integral, polyline and Crofton estimates side by side on random polynomials.

use lemni::measure;
use lemni::{levelset, Complex64, MonicPolynomial, TraceOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> lemni::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    println!("{:>2} {:>12} {:>12} {:>12} {:>9}", "d", "integral", "polyline", "crofton", "stderr");
    for _ in 0..8 {
        let d = rng.random_range(2..=5);
        let roots: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)))
            .collect();
        let p = MonicPolynomial::from_roots(&roots)?;
        let curve = levelset::trace(&p, &TraceOptions::default())?;
        let exact = measure::length_integral(&p, 1e-10)?;
        let crofton = measure::crofton_length(&curve, 256, 256)?;
        println!(
            "{d:>2} {exact:>12.6} {:>12.6} {:>12.6} {:>9.2e}",
            measure::length_polyline(&curve),
            crofton.length,
            crofton.stderr
        );
    }
    Ok(())
}
