//! Support data on the modeled compact category.
//!
//! Compact objects over a base space `S` are identified with their supports,
//! which the classification of thick ideals makes legitimate: closed subsets
//! of `S` stand for compact objects and thick ideals are recorded by the
//! union of their members' supports. A support datum assigns to each closed
//! set of `S` a closed set of a target space `X`; the assignment is either a
//! preimage along a continuous map `eta : X -> S`, a closure-of-image along a
//! continuous surjection `rho : S -> X`, or an explicit table.
//!
//! At this level the support axioms collapse to lattice conditions: the
//! endpoints are preserved, binary unions are preserved (which also absorbs
//! the triangle condition, since object cones are not represented), and
//! binary intersections are bounded above. The tensor-product property
//! likewise collapses to on-the-nose preservation of binary intersections,
//! the unique reading consistent with the tensoriality of the universal
//! support and with the worked examples this crate reproduces.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::report::{Report, Verdict};
use crate::space::{FinSpace, PointSet, SpaceMap};

/// A compact object, identified with its closed support in the base space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactObject {
    base: Arc<FinSpace>,
    supp: PointSet,
}

impl CompactObject {
    pub fn new(base: Arc<FinSpace>, supp: PointSet) -> Result<CompactObject> {
        if !base.is_down_set(supp) {
            return Err(Error::input(format!(
                "compact object support {} is not closed in {}",
                base.render_set(supp),
                base.name()
            )));
        }
        Ok(CompactObject { base, supp })
    }

    /// The tensor unit: support is the whole base space.
    pub fn unit(base: Arc<FinSpace>) -> CompactObject {
        let supp = base.full_set();
        CompactObject { base, supp }
    }

    /// The zero object: empty support.
    pub fn zero(base: Arc<FinSpace>) -> CompactObject {
        CompactObject {
            base,
            supp: PointSet::EMPTY,
        }
    }

    pub fn base(&self) -> &Arc<FinSpace> {
        &self.base
    }

    pub fn supp(&self) -> PointSet {
        self.supp
    }

    pub fn is_zero(&self) -> bool {
        self.supp.is_empty()
    }
}

/// A thick ideal of the compact category, recorded by the union of its
/// members' supports. Membership of a compact object is support containment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThickIdeal {
    base: Arc<FinSpace>,
    phi: PointSet,
}

impl ThickIdeal {
    pub fn new(base: Arc<FinSpace>, phi: PointSet) -> Result<ThickIdeal> {
        if !base.is_down_set(phi) {
            return Err(Error::input(format!(
                "thick ideal value {} is not closed in {}",
                base.render_set(phi),
                base.name()
            )));
        }
        Ok(ThickIdeal { base, phi })
    }

    pub fn base(&self) -> &Arc<FinSpace> {
        &self.base
    }

    pub fn phi(&self) -> PointSet {
        self.phi
    }

    pub fn contains(&self, a: &CompactObject) -> Result<bool> {
        if a.base() != &self.base {
            return Err(Error::input("thick ideal membership across different base spaces"));
        }
        Ok(a.supp().is_subset(self.phi))
    }

    /// The ideal generated by two ideals; its support value is the union.
    pub fn join(&self, other: &ThickIdeal) -> Result<ThickIdeal> {
        if self.base != other.base {
            return Err(Error::input("thick ideal join across different base spaces"));
        }
        Ok(ThickIdeal {
            base: Arc::clone(&self.base),
            phi: self.phi.union(other.phi),
        })
    }
}

/// How a support datum computes its values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportKind {
    /// `sigma(W) = eta^{-1}(W)` for a continuous `eta : X -> S`.
    Pullback(SpaceMap),
    /// `sigma(W) = closure(rho(W))` for a continuous surjection `rho : S -> X`.
    Pushforward(SpaceMap),
    /// Explicit values on the principal closed sets of `S`, indexed by
    /// point: `table[p] = sigma(closure{p})`, extended to all closed sets by
    /// union. Union-preservation makes the principal values a complete basis.
    Table(Vec<PointSet>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct PropertyFlags {
    tensorial: (bool, Option<(PointSet, PointSet)>),
    faithful: (bool, Option<PointSet>),
    realizing: (bool, Option<PointSet>),
}

/// Outcome of a boolean decision procedure together with a counterexample
/// when the property fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checked<W> {
    pub holds: bool,
    pub witness: Option<W>,
}

/// Result of the comparativeness decision. When the datum is comparative the
/// comparison map `rho` is returned; otherwise `witness` is a base point
/// whose preimage closure has no unique generic point.
#[derive(Clone, Debug)]
pub struct ComparativeCheck {
    pub comparative: bool,
    pub rho: Option<SpaceMap>,
    pub witness: Option<usize>,
}

/// A support datum on the compact category over `base`, valued in closed
/// subsets of `target`. Immutable after construction; the property deciders
/// cache their verdicts behind a transparent once-cell.
pub struct SupportDatum {
    base: Arc<FinSpace>,
    target: Arc<FinSpace>,
    kind: SupportKind,
    flags: OnceLock<PropertyFlags>,
}

impl fmt::Debug for SupportDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SupportDatum({} -> {}, {:?})",
            self.base.name(),
            self.target.name(),
            self.kind
        )
    }
}

impl PartialEq for SupportDatum {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.target == other.target && self.kind == other.kind
    }
}

impl Eq for SupportDatum {}

impl SupportDatum {
    /// The support pulled back along a continuous `eta : X -> S`.
    pub fn pullback(eta: SpaceMap) -> Result<Arc<SupportDatum>> {
        if !eta.is_monotone() {
            return Err(Error::input(format!("map {} is not continuous", eta.name())));
        }
        Ok(Arc::new(SupportDatum {
            base: Arc::clone(eta.codomain()),
            target: Arc::clone(eta.domain()),
            kind: SupportKind::Pullback(eta),
            flags: OnceLock::new(),
        }))
    }

    /// The support induced by a continuous surjection `rho : S -> X`.
    pub fn pushforward(rho: SpaceMap) -> Result<Arc<SupportDatum>> {
        if !rho.is_monotone() {
            return Err(Error::input(format!("map {} is not continuous", rho.name())));
        }
        if !rho.is_surjective() {
            return Err(Error::input(format!("map {} is not surjective", rho.name())));
        }
        Ok(Arc::new(SupportDatum {
            base: Arc::clone(rho.domain()),
            target: Arc::clone(rho.codomain()),
            kind: SupportKind::Pushforward(rho),
            flags: OnceLock::new(),
        }))
    }

    /// An explicit table of principal values: `principal[p]` is the value on
    /// `closure{p}` and must be closed in the target.
    pub fn table(
        base: Arc<FinSpace>,
        target: Arc<FinSpace>,
        principal: Vec<PointSet>,
    ) -> Result<Arc<SupportDatum>> {
        if principal.len() != base.len() {
            return Err(Error::input(format!(
                "table has {} entries for {} base points",
                principal.len(),
                base.len()
            )));
        }
        for (p, v) in principal.iter().enumerate() {
            if !target.is_down_set(*v) {
                return Err(Error::input(format!(
                    "table value {} at point {} is not closed in {}",
                    target.render_set(*v),
                    base.point_name(p),
                    target.name()
                )));
            }
        }
        Ok(Arc::new(SupportDatum {
            base,
            target,
            kind: SupportKind::Table(principal),
            flags: OnceLock::new(),
        }))
    }

    /// The universal support of the base space itself: the pullback along
    /// the identity map, whose value on every closed set is that set.
    pub fn balmer(space: Arc<FinSpace>) -> Arc<SupportDatum> {
        SupportDatum::pullback(SpaceMap::identity(space)).expect("identity is continuous")
    }

    pub fn base(&self) -> &Arc<FinSpace> {
        &self.base
    }

    pub fn target(&self) -> &Arc<FinSpace> {
        &self.target
    }

    pub fn kind(&self) -> &SupportKind {
        &self.kind
    }

    pub fn is_pullback(&self) -> bool {
        matches!(self.kind, SupportKind::Pullback(_))
    }

    pub fn is_pushforward(&self) -> bool {
        matches!(self.kind, SupportKind::Pushforward(_))
    }

    /// Value of the support on a closed subset of the base. Callers own the
    /// down-set precondition; [`SupportDatum::sigma_of`] is the checked form.
    pub fn sigma(&self, w: PointSet) -> PointSet {
        debug_assert!(self.base.is_down_set(w));
        match &self.kind {
            SupportKind::Pullback(eta) => eta.preimage(w),
            SupportKind::Pushforward(rho) => self
                .target
                .closure(rho.image(w))
                .expect("image of a valid set is valid"),
            SupportKind::Table(principal) => {
                let mut out = PointSet::EMPTY;
                for p in w.iter() {
                    out = out.union(principal[p]);
                }
                out
            }
        }
    }

    /// Support of a compact object.
    pub fn sigma_of(&self, a: &CompactObject) -> Result<PointSet> {
        if a.base() != &self.base {
            return Err(Error::input(format!(
                "object over {} applied to a support datum over {}",
                a.base().name(),
                self.base.name()
            )));
        }
        Ok(self.sigma(a.supp()))
    }

    /// The same datum with its values tabulated on principal closed sets.
    pub fn tabulate(&self) -> Arc<SupportDatum> {
        let principal = (0..self.base.len())
            .map(|p| self.sigma(self.base.v_of(p).expect("point in range")))
            .collect();
        Arc::new(SupportDatum {
            base: Arc::clone(&self.base),
            target: Arc::clone(&self.target),
            kind: SupportKind::Table(principal),
            flags: OnceLock::new(),
        })
    }

    /// Exhaustive check of the support axioms over all closed sets of the
    /// base: values are closed, the endpoints are right, binary unions are
    /// preserved and binary intersections are bounded. Failures become
    /// report entries with witnesses, not errors.
    pub fn check_axioms(&self) -> Report {
        let mut report = Report::new();
        let ds = self.base.down_sets();

        let mut closed_witness = None;
        for &w in ds {
            if !self.target.is_down_set(self.sigma(w)) {
                closed_witness = Some(self.base.render_set(w));
                break;
            }
        }
        report.property_opt_witness("axiom-closed-values", closed_witness.is_none(), closed_witness);

        let unit_ok = self.sigma(self.base.full_set()) == self.target.full_set();
        let zero_ok = self.sigma(PointSet::EMPTY).is_empty();
        let witness = if !unit_ok {
            Some(self.base.render_set(self.base.full_set()))
        } else if !zero_ok {
            Some(self.base.render_set(PointSet::EMPTY))
        } else {
            None
        };
        report.property_opt_witness("axiom-unit-and-zero", unit_ok && zero_ok, witness);

        let mut union_witness = None;
        'outer: for &w1 in ds {
            for &w2 in ds {
                if self.sigma(w1.union(w2)) != self.sigma(w1).union(self.sigma(w2)) {
                    union_witness = Some(self.render_pair(w1, w2));
                    break 'outer;
                }
            }
        }
        report.property_opt_witness("axiom-union", union_witness.is_none(), union_witness);

        let mut inter_witness = None;
        'outer: for &w1 in ds {
            for &w2 in ds {
                let lhs = self.sigma(w1.intersect(w2));
                if !lhs.is_subset(self.sigma(w1).intersect(self.sigma(w2))) {
                    inter_witness = Some(self.render_pair(w1, w2));
                    break 'outer;
                }
            }
        }
        report.property_opt_witness(
            "axiom-intersection-bound",
            inter_witness.is_none(),
            inter_witness,
        );

        report
    }

    fn render_pair(&self, w1: PointSet, w2: PointSet) -> String {
        format!("({},{})", self.base.render_set(w1), self.base.render_set(w2))
    }

    fn flags(&self) -> &PropertyFlags {
        self.flags.get_or_init(|| {
            let ds = self.base.down_sets();

            let mut tensorial = (true, None);
            'tens: for &w1 in ds {
                for &w2 in ds {
                    if self.sigma(w1.intersect(w2)) != self.sigma(w1).intersect(self.sigma(w2)) {
                        tensorial = (false, Some((w1, w2)));
                        break 'tens;
                    }
                }
            }

            let mut faithful = (true, None);
            for &w in ds {
                if !w.is_empty() && self.sigma(w).is_empty() {
                    faithful = (false, Some(w));
                    break;
                }
            }

            let mut realizing = (true, None);
            for &v in self.target.down_sets() {
                if !ds.iter().any(|&w| self.sigma(w) == v) {
                    realizing = (false, Some(v));
                    break;
                }
            }

            PropertyFlags {
                tensorial,
                faithful,
                realizing,
            }
        })
    }

    /// Whether the datum preserves binary intersections of closed sets; the
    /// witness is a violating pair.
    pub fn is_tensorial(&self) -> Checked<(PointSet, PointSet)> {
        let f = self.flags();
        Checked {
            holds: f.tensorial.0,
            witness: f.tensorial.1,
        }
    }

    /// Whether every nonempty closed set has nonempty support; the witness
    /// is a nonempty closed set with empty value.
    pub fn is_faithful(&self) -> Checked<PointSet> {
        let f = self.flags();
        Checked {
            holds: f.faithful.0,
            witness: f.faithful.1,
        }
    }

    /// Whether every closed subset of the target is attained; the witness is
    /// an unattained closed set.
    pub fn is_realizing(&self) -> Checked<PointSet> {
        let f = self.flags();
        Checked {
            holds: f.realizing.0,
            witness: f.realizing.1,
        }
    }

    /// Faithfulness via the closed-point criterion: a realizing tensorial
    /// datum is faithful exactly when the image of the universal map
    /// contains every closed point of the base.
    pub fn faithful_via_closed_points(&self) -> Result<bool> {
        if !self.is_tensorial().holds || !self.is_realizing().holds {
            return Err(Error::contract(
                "faithful_via_closed_points requires a tensorial realizing support",
            ));
        }
        let eta = self.universal_eta()?;
        let image = eta.image(self.target.full_set());
        Ok(self.base.closed_points().is_subset(image))
    }

    /// The universal continuous map `eta : X -> S` with
    /// `sigma(W) = eta^{-1}(W)` for every closed `W`.
    ///
    /// For a pullback datum this is the stored map. Otherwise `eta(x)` is
    /// recovered as the unique base point `P` whose largest avoiding closed
    /// set equals the union of all closed sets whose support misses `x`; if
    /// some `x` matches no base point the datum is rejected as not
    /// spectrally representable rather than repaired.
    pub fn universal_eta(&self) -> Result<SpaceMap> {
        if !self.is_tensorial().holds || !self.is_realizing().holds {
            return Err(Error::contract(
                "universal_eta requires a tensorial realizing support",
            ));
        }
        if let SupportKind::Pullback(eta) = &self.kind {
            return Ok(eta.clone());
        }
        let ds = self.base.down_sets();
        let mut assignment = Vec::with_capacity(self.target.len());
        for x in 0..self.target.len() {
            let mut avoided = PointSet::EMPTY;
            for &w in ds {
                if !self.sigma(w).contains(x) {
                    avoided = avoided.union(w);
                }
            }
            let p = (0..self.base.len())
                .find(|&p| self.base.z_of(p).expect("point in range") == avoided)
                .ok_or_else(|| {
                    Error::NotRepresentable(format!(
                        "no base point of {} matches target point {}",
                        self.base.name(),
                        self.target.point_name(x)
                    ))
                })?;
            assignment.push(p);
        }
        let eta = SpaceMap::new(
            "eta",
            Arc::clone(&self.target),
            Arc::clone(&self.base),
            assignment,
        )?;
        debug_assert!(self
            .base
            .down_sets()
            .iter()
            .all(|&w| eta.preimage(w) == self.sigma(w)));
        Ok(eta)
    }

    /// Decides whether a tensorial realizing datum admits a comparison map:
    /// the preimage of every point closure must have a unique generic point.
    /// When it does, the returned `rho` sends each base point to that
    /// generic point; it is a section of the universal map and pushes every
    /// point into its own closure (both are rechecked here).
    pub fn is_comparative(&self) -> Result<ComparativeCheck> {
        let eta = self.universal_eta()?;
        let mut assignment = Vec::with_capacity(self.base.len());
        for p in 0..self.base.len() {
            let pre = eta.preimage(self.base.v_of(p)?);
            let generic = self.target.generic_points(pre)?;
            if generic.len() != 1 {
                return Ok(ComparativeCheck {
                    comparative: false,
                    rho: None,
                    witness: Some(p),
                });
            }
            assignment.push(generic.iter().next().expect("singleton"));
        }
        let rho = SpaceMap::new(
            "rho",
            Arc::clone(&self.base),
            Arc::clone(&self.target),
            assignment,
        )?;
        for x in 0..self.target.len() {
            assert_eq!(rho.apply(eta.apply(x)), x, "comparison map must section eta");
        }
        for p in 0..self.base.len() {
            assert!(
                self.base.v_of(p)?.contains(eta.apply(rho.apply(p))),
                "eta∘rho must land in the point's closure"
            );
        }
        Ok(ComparativeCheck {
            comparative: true,
            rho: Some(rho),
            witness: None,
        })
    }

    /// Canonical one-line declaration given a name for this support and the
    /// name under which its defining map was declared.
    pub fn render_decl(&self, name: &str) -> String {
        match &self.kind {
            SupportKind::Pullback(eta) => format!("support {name} = pullback({})", eta.name()),
            SupportKind::Pushforward(rho) => {
                format!("support {name} = pushforward({})", rho.name())
            }
            SupportKind::Table(principal) => {
                let mut out = format!("support {name} = table {{ ");
                for (p, v) in principal.iter().enumerate() {
                    let key = self.base.v_of(p).expect("point in range");
                    out.push_str(&format!(
                        "{} -> {} ; ",
                        self.base.render_set(key),
                        self.target.render_set(*v)
                    ));
                }
                out.push('}');
                out
            }
        }
    }

    /// Short human-readable description of the defining construction.
    pub fn describe(&self) -> String {
        match &self.kind {
            SupportKind::Pullback(eta) => format!(
                "pullback along {} : {} -> {}",
                eta.name(),
                self.target.name(),
                self.base.name()
            ),
            SupportKind::Pushforward(rho) => format!(
                "pushforward along {} : {} -> {}",
                rho.name(),
                self.base.name(),
                self.target.name()
            ),
            SupportKind::Table(_) => format!(
                "table from {} to {}",
                self.base.name(),
                self.target.name()
            ),
        }
    }
}

/// Support-level Galois pair for a support datum: `theta_of` is the thick
/// ideal of compacts whose support lies in `v`, and `phi_of` recovers the
/// union of supports of an ideal's members.
pub fn theta_of(sd: &SupportDatum, v: PointSet) -> Result<ThickIdeal> {
    let phi = crate::rickard::gamma_ideal_support(sd, v)?;
    ThickIdeal::new(Arc::clone(sd.base()), phi)
}

pub fn phi_of(sd: &SupportDatum, ideal: &ThickIdeal) -> Result<PointSet> {
    if ideal.base() != sd.base() {
        return Err(Error::input("ideal over a different base space"));
    }
    Ok(sd.sigma(ideal.phi()))
}

impl Report {
    fn property_opt_witness(&mut self, name: &str, pass: bool, witness: Option<String>) {
        self.push_property(
            name,
            if pass { Verdict::True } else { Verdict::False },
            witness,
        );
    }
}
