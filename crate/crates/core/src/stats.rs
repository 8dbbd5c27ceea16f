//! Exact two-sided Fisher test for 2×2 tables and Bonferroni adjustment.

use crate::error::{Error, Result};

fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Two-sided p-value of the table `[[a, b], [c, d]]`: the total hypergeometric
/// probability (fixed margins) of every table no more probable than the
/// observed one.
pub fn fisher_exact_2x2(a: u64, b: u64, c: u64, d: u64) -> Result<f64> {
    let n = a + b + c + d;
    if n == 0 {
        return Err(Error::DegenerateTable);
    }
    let (row1, col1) = (a + b, a + c);
    let row2 = n - row1;
    let base = ln_factorial(row1) + ln_factorial(row2) + ln_factorial(col1)
        + ln_factorial(n - col1)
        - ln_factorial(n);
    let ln_p = |x: u64| {
        base - ln_factorial(x)
            - ln_factorial(row1 - x)
            - ln_factorial(col1 - x)
            - ln_factorial(row2 + x - col1)
    };
    let lo = col1.saturating_sub(row2);
    let hi = row1.min(col1);
    let observed = ln_p(a);
    // Relative slack so tables tied with the observed one in exact arithmetic
    // are not lost to rounding.
    let cutoff = observed + 1e-7;
    let p: f64 = (lo..=hi)
        .map(ln_p)
        .filter(|&lp| lp <= cutoff)
        .map(f64::exp)
        .sum();
    Ok(p.min(1.0))
}

/// Multiplies `p` by the number of comparisons, capped at 1.
pub fn bonferroni(p: f64, comparisons: usize) -> f64 {
    (p * comparisons as f64).min(1.0)
}
