//! The universal map and the comparison map.
//!
//! A tensorial realizing support determines a unique continuous map from
//! its target into the base with the support as preimage; tabulating a
//! pullback support and recovering the map from the table alone
//! demonstrates the reconstruction. When every preimage of a point closure
//! has a unique generic point, the support also carries a comparison map
//! going the other way, computed here for the comparative diamond instance.
//!
//! Run with: cargo run --example universal_and_comparison

use ttg::fixtures;

fn main() -> ttg::Result<()> {
    // recover eta from the tabulated values only
    for fixture in [fixtures::p1(), fixtures::p3()] {
        let table = fixture.datum.tabulate();
        let eta = table.universal_eta()?;
        print!("recovered eta from the table:");
        for x in 0..fixture.target.len() {
            print!(
                " {} -> {}",
                fixture.target.point_name(x),
                fixture.base.point_name(eta.apply(x))
            );
        }
        println!(
            "  (matches the defining map: {})",
            eta.assignment() == fixture.map.assignment()
        );
    }

    // the comparative instance: rho sends each base point to the unique
    // generic point of the preimage of its closure
    let p3 = fixtures::p3();
    let check = p3.datum.is_comparative()?;
    let rho = check.rho.expect("this instance is comparative");
    print!("comparison map rho:");
    for p in 0..p3.base.len() {
        print!(
            " {} -> {}",
            p3.base.point_name(p),
            p3.target.point_name(rho.apply(p))
        );
    }
    println!();
    println!("rho is a closed map: {}", rho.predicates().closed);
    for &w in p3.base.down_sets() {
        assert_eq!(p3.datum.sigma(w), rho.image(w), "support = image of rho");
    }
    println!("sigma(W) = rho(W) verified on every closed W");

    // the non-comparative instance reports its witness instead
    let p1 = fixtures::p1();
    let check = p1.datum.is_comparative()?;
    println!(
        "first instance comparative? {} (witness {})",
        check.comparative,
        p1.base.point_name(check.witness.expect("not comparative")),
    );
    Ok(())
}
