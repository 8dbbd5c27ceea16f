//! Exact tests on success counts, with and without Bonferroni correction.
//!
//! cargo run --example fisher

use flyevo::stats::{bonferroni, fisher_exact_2x2};

fn main() -> flyevo::Result<()> {
    // Runs out of 30 that produced a flying machine.
    let tables = [
        ("observer: ME.PO vs PF", 28, 14),
        ("original: ME.PO vs PF", 21, 9),
        ("balanced", 15, 15),
    ];
    let pairs = 6; // four methods
    for (name, a, b) in tables {
        let p = fisher_exact_2x2(a, 30 - a, b, 30 - b)?;
        println!("{name:<24} {a:>2}/30 vs {b:>2}/30  p = {p:.3e}  x{pairs} = {:.3e}", bonferroni(p, pairs));
    }
    Ok(())
}
