//! Length of Bernoulli's lemniscate |z^2 + 1| = 1 by three independent routes.

use lemni::measure;
use lemni::{levelset, Complex64, MonicPolynomial, TraceOptions};

fn main() -> lemni::Result<()> {
    let p = MonicPolynomial::from_roots(&[Complex64::i(), -Complex64::i()])?;
    let curve = levelset::trace(&p, &TraceOptions::default())?;

    let exact = measure::length_integral(&p, 1e-12)?;
    let polyline = measure::length_polyline(&curve);
    let crofton = measure::crofton_length(&curve, 256, 256)?;

    println!("components      {}", curve.component_count());
    println!("touch points    {:?}", curve.touch_points);
    println!("exact integral  {exact:.12}");
    println!("polyline        {polyline:.12}  ({} vertices)", curve.vertex_count());
    println!("crofton         {:.6} +- {:.6}", crofton.length, crofton.stderr);
    println!("bound 2 alpha0  {:.6}", 2.0 * measure::alpha0_bound());
    Ok(())
}
