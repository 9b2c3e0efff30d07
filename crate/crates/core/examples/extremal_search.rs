//! Search for the longest lemniscate of a given degree.
//!
//!     cargo run --release --example extremal_search -- 3 4000

use lemni::extremal;

fn main() -> lemni::Result<()> {
    let mut args = std::env::args().skip(1);
    let d: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    let budget: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);

    let res = extremal::search(d, budget, 0)?;
    println!("best length {:.9} after {} evaluations", res.best_length, res.evaluations);
    println!("roots {:?}", res.best.roots());
    println!("| |a| - 1 | over critical values {:?}", res.critical_value_moduli);
    println!("connected {}", res.connected);
    for (k, len) in res.history.iter().rev().take(5) {
        println!("  eval {k:>5}: {len:.9}");
    }
    Ok(())
}
