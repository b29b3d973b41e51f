//! Build a support datum from scratch and run every decision procedure on
//! it: axioms, tensoriality, faithfulness, realization, comparativeness.
//!
//! The instance is a three-point base space (one generic point sitting over
//! two closed points) and a discrete two-point target hitting the closed
//! points. The pulled-back support satisfies every axiom and is tensorial,
//! faithful and realizing, yet admits no comparison map.
//!
//! Run with: cargo run --example check_support

use std::sync::Arc;

use ttg::space::{FinSpace, SpaceMap};
use ttg::support::SupportDatum;

fn main() -> ttg::Result<()> {
    let base = FinSpace::new("S", &["x", "y", "z"], &[("y", "x"), ("z", "x")])?;
    let target = FinSpace::new("X", &["yh", "zh"], &[])?;
    let eta = SpaceMap::from_pairs(
        "eta",
        Arc::clone(&target),
        Arc::clone(&base),
        &[("yh", "y"), ("zh", "z")],
    )?;
    let sigma = SupportDatum::pullback(eta)?;

    println!("{}", base.render());
    println!("{}", target.render());
    println!("sigma = preimage along eta\n");

    let axioms = sigma.check_axioms();
    for entry in &axioms.properties {
        let mark = if entry.verdict == ttg::report::Verdict::True { "ok" } else { "FAIL" };
        println!("{:<28} {mark}", entry.name);
    }

    println!("tensorial: {}", sigma.is_tensorial().holds);
    println!("faithful:  {}", sigma.is_faithful().holds);
    println!("realizing: {}", sigma.is_realizing().holds);

    let comparative = sigma.is_comparative()?;
    match comparative.witness {
        Some(p) => println!(
            "comparative: false — the preimage of closure({}) has no unique generic point",
            base.point_name(p)
        ),
        None => println!("comparative: true"),
    }

    // the closed-point criterion agrees with the direct faithfulness check
    println!(
        "faithful via closed points: {}",
        sigma.faithful_via_closed_points()?
    );
    Ok(())
}
