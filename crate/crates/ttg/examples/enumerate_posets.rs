//! Complete enumeration of finite spectral spaces and instances.
//!
//! Finite spectral spaces are exactly finite posets under specialization,
//! so labeled posets enumerate them exhaustively: 1, 3, 19, 219, 4231 for
//! one to five points. Instances pair a base with a target and a structure
//! map; dedup mode collapses them to isomorphism classes.
//!
//! Run with: cargo run --example enumerate_posets

use ttg::explorer::{
    enumerate_instances, enumerate_posets, DedupMode, InstanceFamily, InstanceKind,
};

fn main() -> ttg::Result<()> {
    for n in 1..=5 {
        println!("labeled posets on {n} points: {}", enumerate_posets(n)?.len());
    }

    let family = InstanceFamily::new(InstanceKind::PullbackInjective, 3, 2);
    let labeled = enumerate_instances(&family)?;
    let classes = enumerate_instances(&family.with_dedup(DedupMode::UpToIso))?;
    println!(
        "pullback instances (base <= 3, target <= 2): {} labeled, {} up to isomorphism",
        labeled.len(),
        classes.len()
    );

    println!("\nfirst five representatives:");
    for instance in classes.iter().take(5) {
        println!("---\n{}", instance.render());
    }
    Ok(())
}
