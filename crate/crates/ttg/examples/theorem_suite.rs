//! Run the theorem suite: every proven statement about the modeled
//! constructions, checked on every enumerated instance up to a size bound.
//! A failure of any entry on an applicable instance would mean a bug in the
//! implementation, never new mathematics.
//!
//! Run with: cargo run --example theorem_suite

use ttg::explorer::{galois_identity_sweep, run_suite_over_bounds};

fn main() -> ttg::Result<()> {
    let max = 3;
    let summary = run_suite_over_bounds(max, max)?;
    println!(
        "checked {} instances with spaces up to {max} points",
        summary.instances
    );
    for entry in &summary.entries {
        println!(
            "  {:<42} pass={:<6} fail={:<3} n/a={}",
            entry.name, entry.pass, entry.fail, entry.not_applicable
        );
    }
    let galois = galois_identity_sweep(max)?;
    println!("  {:<42} violations={galois}", "galois-identity");
    println!("total violations: {}", summary.violations() + galois);
    Ok(())
}
