//! Built-in worked examples used across tests, the runnable examples, and
//! the bundled `.ttg` files. Hatted points are spelled with an `h` suffix.

use std::sync::Arc;

use crate::rickard::{BigObject, IdempotentSpec};
use crate::space::{FinSpace, SpaceMap};
use crate::support::SupportDatum;

/// One instance: a base space, a target space, the defining map and the
/// support datum built from it.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub base: Arc<FinSpace>,
    pub target: Arc<FinSpace>,
    pub map: SpaceMap,
    pub datum: Arc<SupportDatum>,
}

/// Three-point base (a generic point over two closed points) with a discrete
/// two-point target hitting the closed points. Tensorial, faithful and
/// realizing, but not comparative: the extension misses the generic point.
pub fn p1() -> Fixture {
    let base = FinSpace::new("S", &["x", "y", "z"], &[("y", "x"), ("z", "x")]).unwrap();
    let target = FinSpace::new("X", &["yh", "zh"], &[]).unwrap();
    let map = SpaceMap::from_pairs(
        "eta",
        Arc::clone(&target),
        Arc::clone(&base),
        &[("yh", "y"), ("zh", "z")],
    )
    .unwrap();
    let datum = SupportDatum::pullback(map.clone()).unwrap();
    Fixture {
        base,
        target,
        map,
        datum,
    }
}

/// Diamond base with the target hitting everything except the generic point;
/// the preimage of the generic point's closure has two generic points.
pub fn p2() -> Fixture {
    let base = p2_base();
    let target = FinSpace::new("X", &["bh", "ch", "dh"], &[("dh", "bh"), ("dh", "ch")]).unwrap();
    let map = SpaceMap::from_pairs(
        "eta",
        Arc::clone(&target),
        Arc::clone(&base),
        &[("bh", "b"), ("ch", "c"), ("dh", "d")],
    )
    .unwrap();
    let datum = SupportDatum::pullback(map.clone()).unwrap();
    Fixture {
        base,
        target,
        map,
        datum,
    }
}

/// Same base as [`p2`] with a two-point chain target; every preimage of a
/// point closure has a unique generic point, so this one is comparative.
pub fn p3() -> Fixture {
    let base = p2_base();
    let target = FinSpace::new("X", &["bh", "dh"], &[("dh", "bh")]).unwrap();
    let map = SpaceMap::from_pairs(
        "eta",
        Arc::clone(&target),
        Arc::clone(&base),
        &[("bh", "b"), ("dh", "d")],
    )
    .unwrap();
    let datum = SupportDatum::pullback(map.clone()).unwrap();
    Fixture {
        base,
        target,
        map,
        datum,
    }
}

/// Two discrete points collapsed onto a single point: the induced support is
/// faithful and realizing but not tensorial.
pub fn p4() -> Fixture {
    let base = FinSpace::new("S", &["y", "z"], &[]).unwrap();
    let target = FinSpace::new("X", &["pt"], &[]).unwrap();
    let map = SpaceMap::from_pairs(
        "rho",
        Arc::clone(&base),
        Arc::clone(&target),
        &[("y", "pt"), ("z", "pt")],
    )
    .unwrap();
    let datum = SupportDatum::pushforward(map.clone()).unwrap();
    Fixture {
        base,
        target,
        map,
        datum,
    }
}

/// Discrete two-point base collapsing onto a chain; the defining surjection
/// is continuous but not closed, so the canonical extension disagrees with
/// the induced support on some compact.
pub fn non_closed_pushforward() -> Fixture {
    let base = FinSpace::new("S", &["u", "v"], &[]).unwrap();
    let target = FinSpace::new("X", &["uh", "vh"], &[("uh", "vh")]).unwrap();
    let map = SpaceMap::from_pairs(
        "rho",
        Arc::clone(&base),
        Arc::clone(&target),
        &[("u", "uh"), ("v", "vh")],
    )
    .unwrap();
    let datum = SupportDatum::pushforward(map.clone()).unwrap();
    Fixture {
        base,
        target,
        map,
        datum,
    }
}

/// The nonzero object over the [`p1`] base whose extended support under the
/// fixture's datum is empty: the unit localized away from the closed points,
/// with support exactly the generic point.
pub fn p1_witness_object() -> BigObject {
    let p1 = p1();
    let sb = SupportDatum::balmer(Arc::clone(&p1.base));
    let yz = p1.base.set_from_names(&["y", "z"]).unwrap();
    BigObject::unit(Arc::clone(&p1.base))
        .tensor_idem(IdempotentSpec::l_ideal(sb, yz).unwrap())
        .unwrap()
}

fn p2_base() -> Arc<FinSpace> {
    FinSpace::new(
        "S",
        &["a", "b", "c", "d"],
        &[("b", "a"), ("c", "a"), ("d", "b"), ("d", "c")],
    )
    .unwrap()
}
