//! z^d + 1 against the best lemniscate the search finds, d = 2..=5.

use lemni::extremal::{self, SearchOptions};

fn main() -> lemni::Result<()> {
    for d in 2..=5 {
        let cmp = extremal::erdos_comparison_with(d, &SearchOptions { budget: 1500, ..Default::default() })?;
        println!(
            "d = {d}: z^d+1 {:.6}  search {:.6}  margin {:+.2e}",
            cmp.candidate_length, cmp.search_length, cmp.margin
        );
    }
    for row in lemni::cli::sweep("zd+1", 6, 1e-10)? {
        println!("d = {}: length/d = {:.4}", row.d, row.length_over_d);
    }
    Ok(())
}
