//! Counterexample search over enumerated instances.
//!
//! Each registered predicate scans a family and reports witnesses in
//! enumeration order, so the first witness is size-minimal. The searches
//! here rediscover the bundled fixtures: the smallest support whose
//! extension is not faithful, the smallest non-tensorial pushforward, and
//! the smallest non-closed defining surjection. The last predicate is
//! forbidden by a theorem, so it must come back empty.
//!
//! Run with: cargo run --example counterexample_search

use ttg::explorer::{search_counterexamples, DedupMode, InstanceFamily, InstanceKind};

fn main() -> ttg::Result<()> {
    let family = InstanceFamily::new(InstanceKind::PullbackInjective, 3, 3)
        .with_dedup(DedupMode::UpToIso);

    for predicate in [
        "non-faithful-extension",
        "non-tensorial-pushforward",
        "non-closed-rho",
        "strict-sigma-hat-containment",
        "comparative-but-nonfaithful-extension",
    ] {
        let outcome = search_counterexamples(predicate, &family)?;
        println!(
            "{}: {} witness class(es) in {} instances",
            outcome.predicate,
            outcome.witnesses.len(),
            outcome.instances_scanned
        );
        if let Some(first) = outcome.witnesses.first() {
            println!("minimal witness: {}", first.detail);
            for line in first.instance.render().lines() {
                println!("  {line}");
            }
        }
        if outcome.expect_empty {
            assert!(
                outcome.witnesses.is_empty(),
                "a theorem forbids witnesses for this predicate"
            );
            println!("empty, as the theory requires");
        }
        println!();
    }
    Ok(())
}
