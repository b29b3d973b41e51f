//! Finite spectral spaces presented as specialization posets.
//!
//! A finite spectral space is completely determined by its specialization
//! order `p <= q  iff  p ∈ closure{q}`, so a space here is a finite poset.
//! Closed sets are exactly the down-sets of that order. Every finite space
//! is automatically Noetherian and sober, and specialization-closed,
//! Thomason-closed and closed subsets all coincide, so no runtime check for
//! any of those hypotheses is performed.
//!
//! Point sets are fixed-width bit vectors indexed by the point list, so the
//! exhaustive sweeps over all down-sets that the rest of the crate relies on
//! stay cheap.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Spaces are capped at the width of the bit-set representation.
pub const MAX_POINTS: usize = 64;

/// A subset of the points of some [`FinSpace`], as a bit vector.
///
/// The set does not know which space it belongs to; operations that need the
/// universe (complement, rendering) live on [`FinSpace`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PointSet(u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn singleton(i: usize) -> PointSet {
        PointSet(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> PointSet {
        let mut bits = 0u64;
        for i in iter {
            bits |= 1 << i;
        }
        PointSet(bits)
    }

    pub fn from_bits(bits: u64) -> PointSet {
        PointSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn union(self, other: PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn intersect(self, other: PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    pub fn minus(self, other: PointSet) -> PointSet {
        PointSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointSet{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A finite spectral space: named points plus their specialization order.
///
/// `leq(p, q)` means `p ∈ closure{q}`. The order is stored as one down-set
/// per point: `down[q] = {p : p <= q}` is the closure of `{q}`.
pub struct FinSpace {
    name: String,
    points: Vec<String>,
    down: Vec<PointSet>,
    down_sets: OnceLock<Vec<PointSet>>,
}

impl Clone for FinSpace {
    fn clone(&self) -> Self {
        FinSpace {
            name: self.name.clone(),
            points: self.points.clone(),
            down: self.down.clone(),
            down_sets: OnceLock::new(),
        }
    }
}

impl PartialEq for FinSpace {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.points == other.points && self.down == other.down
    }
}

impl Eq for FinSpace {}

impl fmt::Debug for FinSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinSpace({})", self.render())
    }
}

impl FinSpace {
    /// Builds a space from named points and generating relations `a < b`
    /// (meaning `a ∈ closure{b}`). The reflexive-transitive closure of the
    /// generators is taken automatically; a violation of antisymmetry is an
    /// input error.
    pub fn new(name: &str, points: &[&str], relations: &[(&str, &str)]) -> Result<Arc<FinSpace>> {
        let points: Vec<String> = points.iter().map(|p| p.to_string()).collect();
        if points.is_empty() {
            return Err(Error::input(format!("space {name}: empty point list")));
        }
        if points.len() > MAX_POINTS {
            return Err(Error::input(format!(
                "space {name}: {} points exceeds the supported maximum of {MAX_POINTS}",
                points.len()
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::input(format!("space {name}: duplicate point {p}")));
            }
        }
        let index = |id: &str| -> Result<usize> {
            points
                .iter()
                .position(|p| p == id)
                .ok_or_else(|| Error::input(format!("space {name}: unknown point {id}")))
        };
        let mut leq = vec![PointSet::EMPTY; points.len()];
        for (i, row) in leq.iter_mut().enumerate() {
            row.insert(i);
        }
        for (a, b) in relations {
            let (a, b) = (index(a)?, index(b)?);
            leq[b].insert(a);
        }
        Self::from_down_closure(name.to_string(), points, leq)
    }

    /// Builds a space whose points are `p0 .. p{n-1}` from a raw `leq`
    /// bit-matrix (`bit i*n+j` set iff `p_i <= p_j`), as produced by the
    /// instance enumerator.
    pub fn from_leq_matrix(name: &str, n: usize, matrix: u64) -> Result<Arc<FinSpace>> {
        Self::from_leq_matrix_named(name, "p", n, matrix)
    }

    /// Like [`FinSpace::from_leq_matrix`] with a chosen point-name prefix, so
    /// enumerated base and target spaces keep disjoint vocabularies.
    pub fn from_leq_matrix_named(
        name: &str,
        prefix: &str,
        n: usize,
        matrix: u64,
    ) -> Result<Arc<FinSpace>> {
        let points: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
        let mut down = vec![PointSet::EMPTY; n];
        for i in 0..n {
            for (j, row) in down.iter_mut().enumerate() {
                if matrix >> (i * n + j) & 1 == 1 {
                    // p_i <= p_j: i belongs to the down-set of j
                    row.insert(i);
                }
            }
        }
        for (i, row) in down.iter_mut().enumerate() {
            row.insert(i);
        }
        Self::from_down_closure(name.to_string(), points, down)
    }

    fn from_down_closure(
        name: String,
        points: Vec<String>,
        mut down: Vec<PointSet>,
    ) -> Result<Arc<FinSpace>> {
        let n = points.len();
        // transitive closure: propagate down-sets until stable
        loop {
            let mut changed = false;
            for q in 0..n {
                let mut acc = down[q];
                for p in down[q].iter() {
                    acc = acc.union(down[p]);
                }
                if acc != down[q] {
                    down[q] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for p in 0..n {
            for q in 0..n {
                if p != q && down[q].contains(p) && down[p].contains(q) {
                    return Err(Error::input(format!(
                        "space {name}: order is not antisymmetric ({} and {} specialize to each other)",
                        points[p], points[q]
                    )));
                }
            }
        }
        Ok(Arc::new(FinSpace {
            name,
            points,
            down,
            down_sets: OnceLock::new(),
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point_names(&self) -> &[String] {
        &self.points
    }

    pub fn point_name(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn point_index(&self, id: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == id)
            .ok_or_else(|| Error::input(format!("unknown point {id} in space {}", self.name)))
    }

    pub fn set_from_names(&self, ids: &[&str]) -> Result<PointSet> {
        let mut out = PointSet::EMPTY;
        for id in ids {
            out.insert(self.point_index(id)?);
        }
        Ok(out)
    }

    pub fn full_set(&self) -> PointSet {
        if self.points.len() == 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << self.points.len()) - 1)
        }
    }

    pub fn complement(&self, s: PointSet) -> PointSet {
        self.full_set().minus(s)
    }

    /// `p <= q`, i.e. `p ∈ closure{q}`.
    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.down[q].contains(p)
    }

    fn check_subset(&self, s: PointSet) -> Result<()> {
        if !s.is_subset(self.full_set()) {
            return Err(Error::input(format!(
                "point set {:?} is not a subset of space {}",
                s, self.name
            )));
        }
        Ok(())
    }

    /// Smallest closed (down-) set containing `subset`.
    pub fn closure(&self, subset: PointSet) -> Result<PointSet> {
        self.check_subset(subset)?;
        let mut out = PointSet::EMPTY;
        for p in subset.iter() {
            out = out.union(self.down[p]);
        }
        Ok(out)
    }

    /// The closure of the point `x`.
    pub fn v_of(&self, x: usize) -> Result<PointSet> {
        if x >= self.len() {
            return Err(Error::input(format!(
                "point index {x} out of range for space {}",
                self.name
            )));
        }
        Ok(self.down[x])
    }

    /// `{y : x ∉ closure{y}}`, the largest closed set avoiding `x`.
    pub fn z_of(&self, x: usize) -> Result<PointSet> {
        if x >= self.len() {
            return Err(Error::input(format!(
                "point index {x} out of range for space {}",
                self.name
            )));
        }
        let up = PointSet::from_indices((0..self.len()).filter(|&y| self.down[y].contains(x)));
        Ok(self.complement(up))
    }

    /// The closed points, i.e. the minimal elements of the order.
    pub fn closed_points(&self) -> PointSet {
        PointSet::from_indices((0..self.len()).filter(|&p| self.down[p] == PointSet::singleton(p)))
    }

    /// Maximal elements of a closed set. The result is a singleton exactly
    /// when the closed set is irreducible.
    pub fn generic_points(&self, closed: PointSet) -> Result<PointSet> {
        if !self.is_down_set(closed) {
            return Err(Error::contract(format!(
                "generic_points: {} is not closed in space {}",
                self.render_set(closed),
                self.name
            )));
        }
        Ok(self.maximal_in(closed))
    }

    fn maximal_in(&self, s: PointSet) -> PointSet {
        PointSet::from_indices(s.iter().filter(|&p| {
            s.iter().all(|q| q == p || !self.down[q].contains(p))
        }))
    }

    pub fn is_down_set(&self, s: PointSet) -> bool {
        s.is_subset(self.full_set()) && s.iter().all(|p| self.down[p].is_subset(s))
    }

    /// All closed sets, in increasing bit order. Computed once per space.
    pub fn down_sets(&self) -> &[PointSet] {
        self.down_sets.get_or_init(|| {
            let full = self.full_set().bits();
            let mut out = Vec::new();
            let mut mask = 0u64;
            loop {
                let s = PointSet(mask);
                if self.is_down_set(s) {
                    out.push(s);
                }
                if mask == full {
                    break;
                }
                mask += 1;
            }
            out
        })
    }

    /// A closed set is irreducible iff it has exactly one generic point;
    /// decided here by that criterion (soberness of finite spaces).
    pub fn is_irreducible(&self, closed: PointSet) -> Result<bool> {
        Ok(self.generic_points(closed)?.len() == 1)
    }

    /// Renders a point set in declaration syntax, points in index order.
    pub fn render_set(&self, s: PointSet) -> String {
        let mut out = String::from("{");
        for (k, i) in s.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            out.push_str(&self.points[i]);
        }
        out.push('}');
        out
    }

    /// Covering pairs `(a, b)` with `a < b` and no point strictly between.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.down[b].contains(a) {
                    continue;
                }
                let between = (0..n).any(|c| {
                    c != a && c != b && self.down[b].contains(c) && self.down[c].contains(a)
                });
                if !between {
                    out.push((a, b));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Canonical one-line declaration, stable under parse/render round-trips.
    pub fn render(&self) -> String {
        let mut out = format!("space {} {{ points:", self.name);
        for p in &self.points {
            out.push(' ');
            out.push_str(p);
        }
        out.push_str(" ; order:");
        let covers = self.covering_pairs();
        for (k, (a, b)) in covers.iter().enumerate() {
            out.push_str(if k == 0 { " " } else { ", " });
            out.push_str(&format!("{} < {}", self.points[*a], self.points[*b]));
        }
        out.push_str(" ; }");
        out
    }

    /// The `leq` relation as a row-major bit matrix (`bit i*n+j` iff `i <= j`).
    pub fn leq_matrix(&self) -> u64 {
        let n = self.len();
        let mut m = 0u64;
        for i in 0..n {
            for j in 0..n {
                if self.leq(i, j) {
                    m |= 1 << (i * n + j);
                }
            }
        }
        m
    }
}

/// Continuity/closedness/surjectivity/injectivity of a [`SpaceMap`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MapPredicates {
    pub continuous: bool,
    pub closed: bool,
    pub surjective: bool,
    pub injective: bool,
}

/// A total function between finite spectral spaces.
///
/// Continuity is equivalent to monotonicity of the assignment and is *not*
/// enforced here; constructions that require it (support data, the DSL
/// loader) check it explicitly.
#[derive(Clone, PartialEq, Eq)]
pub struct SpaceMap {
    name: String,
    domain: Arc<FinSpace>,
    codomain: Arc<FinSpace>,
    assignment: Vec<usize>,
}

impl fmt::Debug for SpaceMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpaceMap({})", self.render())
    }
}

impl SpaceMap {
    pub fn new(
        name: &str,
        domain: Arc<FinSpace>,
        codomain: Arc<FinSpace>,
        assignment: Vec<usize>,
    ) -> Result<SpaceMap> {
        if assignment.len() != domain.len() {
            return Err(Error::input(format!(
                "map {name}: assignment covers {} of {} domain points",
                assignment.len(),
                domain.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&v| v >= codomain.len()) {
            return Err(Error::input(format!(
                "map {name}: image index {bad} out of range for space {}",
                codomain.name()
            )));
        }
        Ok(SpaceMap {
            name: name.to_string(),
            domain,
            codomain,
            assignment,
        })
    }

    pub fn from_pairs(
        name: &str,
        domain: Arc<FinSpace>,
        codomain: Arc<FinSpace>,
        pairs: &[(&str, &str)],
    ) -> Result<SpaceMap> {
        let mut assignment = vec![usize::MAX; domain.len()];
        for (from, to) in pairs {
            let i = domain.point_index(from)?;
            if assignment[i] != usize::MAX {
                return Err(Error::input(format!("map {name}: point {from} mapped twice")));
            }
            assignment[i] = codomain.point_index(to)?;
        }
        if let Some(i) = assignment.iter().position(|&v| v == usize::MAX) {
            return Err(Error::input(format!(
                "map {name}: no image for point {}",
                domain.point_name(i)
            )));
        }
        Self::new(name, domain, codomain, assignment)
    }

    pub fn identity(space: Arc<FinSpace>) -> SpaceMap {
        let n = space.len();
        SpaceMap {
            name: format!("id_{}", space.name()),
            domain: Arc::clone(&space),
            codomain: space,
            assignment: (0..n).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Arc<FinSpace> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FinSpace> {
        &self.codomain
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn apply(&self, p: usize) -> usize {
        self.assignment[p]
    }

    pub fn image(&self, s: PointSet) -> PointSet {
        PointSet::from_indices(s.iter().map(|p| self.assignment[p]))
    }

    pub fn preimage(&self, s: PointSet) -> PointSet {
        PointSet::from_indices((0..self.domain.len()).filter(|&p| s.contains(self.assignment[p])))
    }

    pub fn is_monotone(&self) -> bool {
        let n = self.domain.len();
        (0..n).all(|p| {
            (0..n).all(|q| !self.domain.leq(p, q) || self.codomain.leq(self.assignment[p], self.assignment[q]))
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.image(self.domain.full_set()) == self.codomain.full_set()
    }

    pub fn is_injective(&self) -> bool {
        self.image(self.domain.full_set()).len() == self.domain.len()
    }

    /// Closedness is decided on principal down-sets only: every closed set
    /// is a finite union of point closures and images distribute over
    /// unions, so this is equivalent to the image of every closed set being
    /// closed (the brute-force form is kept as a test oracle).
    pub fn is_closed_map(&self) -> bool {
        (0..self.domain.len()).all(|p| {
            let img = self.image(self.domain.v_of(p).expect("point in range"));
            self.codomain.is_down_set(img)
        })
    }

    pub fn predicates(&self) -> MapPredicates {
        MapPredicates {
            continuous: self.is_monotone(),
            closed: self.is_closed_map(),
            surjective: self.is_surjective(),
            injective: self.is_injective(),
        }
    }

    /// Whether the map is an isomorphism onto its codomain: a continuous
    /// closed bijection, i.e. `p <= q  iff  f(p) <= f(q)` with every point hit.
    pub fn is_order_isomorphism(&self) -> bool {
        if !self.is_surjective() || !self.is_injective() {
            return false;
        }
        let n = self.domain.len();
        (0..n).all(|p| {
            (0..n).all(|q| {
                self.domain.leq(p, q) == self.codomain.leq(self.assignment[p], self.assignment[q])
            })
        })
    }

    /// Canonical one-line declaration.
    pub fn render(&self) -> String {
        let mut out = format!(
            "map {} : {} -> {} {{ ",
            self.name,
            self.domain.name(),
            self.codomain.name()
        );
        for (i, &v) in self.assignment.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&format!(
                "{} -> {}",
                self.domain.point_name(i),
                self.codomain.point_name(v)
            ));
        }
        out.push_str(" }");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    /// Test oracle: closedness by checking the image of every down-set.
    fn closed_brute_force(f: &SpaceMap) -> bool {
        f.domain()
            .down_sets()
            .iter()
            .all(|&w| f.codomain().is_down_set(f.image(w)))
    }

    /// Test oracle: irreducibility of a closed set by scanning all proper
    /// closed subsets for a decomposition.
    fn irreducible_brute_force(space: &FinSpace, closed: PointSet) -> bool {
        if closed.is_empty() {
            return false;
        }
        let parts: Vec<PointSet> = space
            .down_sets()
            .iter()
            .copied()
            .filter(|w| w.is_subset(closed) && *w != closed)
            .collect();
        !parts
            .iter()
            .any(|a| parts.iter().any(|b| a.union(*b) == closed))
    }

    #[test]
    fn closure_on_fixtures() {
        let p1 = fixtures::p1();
        let s = &p1.base;
        let x = s.point_index("x").unwrap();
        assert_eq!(
            s.closure(PointSet::singleton(x)).unwrap(),
            s.full_set(),
            "closure of the generic point is the whole space"
        );
        assert_eq!(s.closure(PointSet::EMPTY).unwrap(), PointSet::EMPTY);

        let p2 = fixtures::p2();
        let b = p2.base.point_index("b").unwrap();
        let expected = p2.base.set_from_names(&["b", "d"]).unwrap();
        assert_eq!(p2.base.closure(PointSet::singleton(b)).unwrap(), expected);
    }

    #[test]
    fn closure_rejects_unknown_points() {
        let p1 = fixtures::p1();
        let bogus = PointSet::from_indices([7]);
        assert!(p1.base.closure(bogus).is_err());
        assert!(p1.base.point_index("nope").is_err());
    }

    #[test]
    fn v_and_z_on_fixtures() {
        let p1 = fixtures::p1();
        let yh = p1.target.point_index("yh").unwrap();
        assert_eq!(p1.target.v_of(yh).unwrap(), PointSet::singleton(yh));
        assert_eq!(
            p1.target.z_of(yh).unwrap(),
            p1.target.set_from_names(&["zh"]).unwrap()
        );

        let p2 = fixtures::p2();
        let bh = p2.target.point_index("bh").unwrap();
        assert_eq!(
            p2.target.v_of(bh).unwrap(),
            p2.target.set_from_names(&["bh", "dh"]).unwrap()
        );
        assert_eq!(
            p2.target.z_of(bh).unwrap(),
            p2.target.set_from_names(&["ch", "dh"]).unwrap()
        );
    }

    #[test]
    fn v_minus_z_is_the_point() {
        for space in fixture_spaces() {
            for x in 0..space.len() {
                let v = space.v_of(x).unwrap();
                let z = space.z_of(x).unwrap();
                assert!(space.is_down_set(v));
                assert!(space.is_down_set(z));
                assert_eq!(v.minus(z), PointSet::singleton(x));
            }
        }
    }

    #[test]
    fn closed_points_on_fixtures() {
        let p1 = fixtures::p1();
        assert_eq!(
            p1.base.closed_points(),
            p1.base.set_from_names(&["y", "z"]).unwrap()
        );
        let p2 = fixtures::p2();
        assert_eq!(
            p2.base.closed_points(),
            p2.base.set_from_names(&["d"]).unwrap()
        );
        let one = FinSpace::new("O", &["p"], &[]).unwrap();
        assert_eq!(one.closed_points(), PointSet::singleton(0));
    }

    #[test]
    fn generic_points_on_fixtures() {
        let p1 = fixtures::p1();
        assert_eq!(
            p1.target.generic_points(p1.target.full_set()).unwrap(),
            p1.target.full_set(),
            "discrete two-point space has no unique generic point"
        );
        let p3 = fixtures::p3();
        assert_eq!(
            p3.target.generic_points(p3.target.full_set()).unwrap(),
            p3.target.set_from_names(&["bh"]).unwrap()
        );
        // principal down-sets have their point as unique generic point
        for space in fixture_spaces() {
            for x in 0..space.len() {
                let v = space.v_of(x).unwrap();
                assert_eq!(space.generic_points(v).unwrap(), PointSet::singleton(x));
            }
        }
    }

    #[test]
    fn generic_points_requires_closed_input() {
        let p1 = fixtures::p1();
        let x = p1.base.point_index("x").unwrap();
        let err = p1.base.generic_points(PointSet::singleton(x)).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn map_predicates_on_fixtures() {
        let p1 = fixtures::p1();
        assert_eq!(
            p1.map.predicates(),
            MapPredicates {
                continuous: true,
                closed: true,
                surjective: false,
                injective: true,
            }
        );
        let id = SpaceMap::identity(Arc::clone(&p1.base));
        assert_eq!(
            id.predicates(),
            MapPredicates {
                continuous: true,
                closed: true,
                surjective: true,
                injective: true,
            }
        );
        let p4 = fixtures::p4();
        assert_eq!(
            p4.map.predicates(),
            MapPredicates {
                continuous: true,
                closed: true,
                surjective: true,
                injective: false,
            }
        );
    }

    #[test]
    fn closed_predicate_matches_brute_force_on_small_spaces() {
        // all maps between all posets with |domain|, |codomain| <= 3, plus
        // the fixture maps; the principal-down-set criterion must agree with
        // the all-down-sets definition
        let spaces: Vec<Arc<FinSpace>> = (1..=3)
            .flat_map(|n| crate::explorer::enumerate_posets(n).unwrap())
            .collect();
        for dom in &spaces {
            for cod in &spaces {
                let total = cod.len().pow(dom.len() as u32);
                for code in 0..total {
                    let mut c = code;
                    let assignment: Vec<usize> = (0..dom.len())
                        .map(|_| {
                            let v = c % cod.len();
                            c /= cod.len();
                            v
                        })
                        .collect();
                    let f = SpaceMap::new("f", Arc::clone(dom), Arc::clone(cod), assignment)
                        .unwrap();
                    assert_eq!(f.is_closed_map(), closed_brute_force(&f));
                }
            }
        }
        for fx in [fixtures::p1(), fixtures::p2(), fixtures::p3(), fixtures::p4()] {
            assert_eq!(fx.map.is_closed_map(), closed_brute_force(&fx.map));
        }
    }

    #[test]
    fn irreducible_down_sets_have_unique_generic_point() {
        for space in fixture_spaces() {
            for &w in space.down_sets() {
                if w.is_empty() {
                    continue;
                }
                assert_eq!(
                    space.is_irreducible(w).unwrap(),
                    irreducible_brute_force(&space, w),
                    "soberness mismatch on {} in {}",
                    space.render_set(w),
                    space.name()
                );
            }
        }
    }

    #[test]
    fn antisymmetry_violation_is_rejected() {
        let err = FinSpace::new("B", &["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn oversized_spaces_are_rejected() {
        let names: Vec<String> = (0..=MAX_POINTS).map(|i| format!("p{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let err = FinSpace::new("B", &refs, &[]).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn declared_order_is_transitively_closed() {
        let s = FinSpace::new("C", &["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let (a, c) = (s.point_index("a").unwrap(), s.point_index("c").unwrap());
        assert!(s.leq(a, c));
    }

    fn fixture_spaces() -> Vec<Arc<FinSpace>> {
        [fixtures::p1(), fixtures::p2(), fixtures::p3(), fixtures::p4()]
            .into_iter()
            .flat_map(|f| [f.base, f.target])
            .collect()
    }
}
