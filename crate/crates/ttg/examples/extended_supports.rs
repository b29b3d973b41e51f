//! The idempotent calculus: supports of the acyclization/localization
//! idempotents, building big objects, and the two extensions of a support.
//!
//! Reproduces the worked computation on the three-point base: the unit
//! localized away from the closed points is nonzero with support exactly
//! the generic point, yet its extended support under the two-closed-point
//! datum is empty — the extension fails to detect the zero object.
//!
//! Run with: cargo run --example extended_supports

use std::sync::Arc;

use ttg::fixtures;
use ttg::rickard::{
    eta_pullback_extension, extended_support, gamma_ideal_support, gamma_point_support,
    BigObject, IdempotentSpec,
};
use ttg::support::SupportDatum;

fn main() -> ttg::Result<()> {
    let p1 = fixtures::p1();
    let show = |s| p1.base.render_set(s);
    let show_target = |s| p1.target.render_set(s);

    // supports of the idempotents attached to closed subsets of the target
    for &v in p1.target.down_sets() {
        let gamma = gamma_ideal_support(&p1.datum, v)?;
        println!(
            "gamma support of {:<8} = {:<8} (l support = {})",
            show_target(v),
            show(gamma),
            show(p1.base.complement(gamma)),
        );
    }

    // point-local idempotents
    for x in 0..p1.target.len() {
        println!(
            "point idempotent at {}: support {}",
            p1.target.point_name(x),
            show(gamma_point_support(&p1.datum, x)?)
        );
    }

    // the unit localized away from {y, z}, built through the universal
    // support of the base itself
    let sb = SupportDatum::balmer(Arc::clone(&p1.base));
    let yz = p1.base.set_from_names(&["y", "z"])?;
    let object = BigObject::unit(Arc::clone(&p1.base))
        .tensor_idem(IdempotentSpec::l_ideal(sb, yz)?)?;
    println!("\nlocalized unit: supp = {}", show(object.supp()));
    println!("zero object? {}", object.is_zero());
    println!(
        "extended support (sigma-tilde) = {}",
        show_target(extended_support(&p1.datum, &object)?)
    );
    println!(
        "preimage extension (sigma-hat) = {}",
        show_target(eta_pullback_extension(&p1.datum, &object)?)
    );
    Ok(())
}
