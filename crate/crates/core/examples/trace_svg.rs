//! Trace a lemniscate and write it as SVG.
//!
//!     cargo run --example trace_svg -- "1,-1,0.5i" out.svg

use lemni::cli::output::level_curve_svg;
use lemni::cli::parse::complex_list;
use lemni::{levelset, MonicPolynomial, TraceOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let roots = args.next().unwrap_or_else(|| "1,-1,0.9i".into());
    let path = args.next().unwrap_or_else(|| "lemniscate.svg".into());

    let p = MonicPolynomial::from_roots(&complex_list(&roots)?)?;
    let curve = levelset::trace(&p, &TraceOptions::default())?;
    std::fs::write(&path, level_curve_svg(&curve))?;

    println!(
        "{} components, {} vertices, monodromy cycles {:?} -> {path}",
        curve.component_count(),
        curve.vertex_count(),
        curve.monodromy_cycles()
    );
    Ok(())
}
