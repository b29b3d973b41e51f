//! Exhaustive enumeration of small instances, the theorem suite, and
//! counterexample search.
//!
//! Finite spectral spaces are determined by their specialization posets, so
//! enumerating labeled posets enumerates the spaces exhaustively. An
//! *instance* is a pair of spaces with a structure map: an injective or
//! arbitrary continuous map into the base (support by preimage) or a
//! continuous surjection out of it (support by image closure).
//!
//! Enumeration order is size-lexicographic: base size, then target size,
//! then the relation matrices and the assignment vector, so the first
//! witness any search reports is size-minimal. Labeled mode is the default
//! for suite runs; isomorphism dedup canonicalizes by minimizing the
//! relation matrices and assignment over all relabelings of both spaces.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::report::{InstanceBlock, Report, Verdict};
use crate::rickard::{
    gamma_ideal_support, idempotent_identities_check, ExtensionCalculator, SearchConfig,
};
use crate::space::{FinSpace, PointSet, SpaceMap};
use crate::support::SupportDatum;

/// Default ceiling on enumerated space sizes; the `TTG_MAX_BASE` environment
/// variable overrides it.
pub const DEFAULT_ENUMERATION_CAP: usize = 6;

pub fn enumeration_cap() -> usize {
    std::env::var("TTG_MAX_BASE")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ENUMERATION_CAP)
}

/// Which structure maps an [`InstanceFamily`] ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    /// Injective continuous maps `eta : X -> S`; support by preimage.
    PullbackInjective,
    /// Arbitrary continuous maps `eta : X -> S`; support by preimage.
    PullbackGeneral,
    /// Continuous surjections `rho : S -> X`; support by image closure.
    PushforwardSurjective,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DedupMode {
    Labeled,
    UpToIso,
}

/// Bounds and filters for one enumeration run.
#[derive(Clone, Copy, Debug)]
pub struct InstanceFamily {
    pub kind: InstanceKind,
    pub max_base: usize,
    pub max_target: usize,
    pub dedup: DedupMode,
}

impl InstanceFamily {
    pub fn new(kind: InstanceKind, max_base: usize, max_target: usize) -> InstanceFamily {
        InstanceFamily {
            kind,
            max_base,
            max_target,
            dedup: DedupMode::Labeled,
        }
    }

    pub fn with_dedup(mut self, dedup: DedupMode) -> InstanceFamily {
        self.dedup = dedup;
        self
    }

    fn validate(&self) -> Result<()> {
        let cap = enumeration_cap();
        if self.max_base == 0 || self.max_target == 0 {
            return Err(Error::input("instance family bounds must be at least 1"));
        }
        if self.max_base > cap || self.max_target > cap {
            return Err(Error::CapExceeded(format!(
                "requested bounds {}x{} exceed the enumeration cap {cap} (set TTG_MAX_BASE to raise it)",
                self.max_base, self.max_target
            )));
        }
        Ok(())
    }
}

/// One enumerated instance: base and target spaces plus the structure map
/// (`X -> S` for pullbacks, `S -> X` for pushforwards).
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub kind: InstanceKind,
    pub base: Arc<FinSpace>,
    pub target: Arc<FinSpace>,
    pub map: SpaceMap,
}

impl Instance {
    pub fn support(&self) -> Result<Arc<SupportDatum>> {
        match self.kind {
            InstanceKind::PullbackInjective | InstanceKind::PullbackGeneral => {
                SupportDatum::pullback(self.map.clone())
            }
            InstanceKind::PushforwardSurjective => SupportDatum::pushforward(self.map.clone()),
        }
    }

    /// Canonical declarations; the result is loadable as a workbench file.
    pub fn render(&self) -> String {
        let support = match self.kind {
            InstanceKind::PullbackInjective | InstanceKind::PullbackGeneral => {
                format!("support sigma = pullback({})", self.map.name())
            }
            InstanceKind::PushforwardSurjective => {
                format!("support sigma = pushforward({})", self.map.name())
            }
        };
        format!(
            "{}\n{}\n{}\n{}",
            self.base.render(),
            self.target.render(),
            self.map.render(),
            support
        )
    }

    /// Canonical form under simultaneous relabeling of both spaces: the
    /// lexicographically minimal (base matrix, target matrix, assignment)
    /// triple. Two instances are isomorphic iff their keys agree.
    pub fn canonical_key(&self) -> (u64, u64, Vec<usize>) {
        let n = self.base.len();
        let m = self.target.len();
        let mut best: Option<(u64, u64, Vec<usize>)> = None;
        for ps in permutations(n) {
            let base_key = permuted_matrix(&self.base, &ps);
            if let Some((b, _, _)) = &best {
                if base_key > *b {
                    continue;
                }
            }
            for px in permutations(m) {
                let target_key = permuted_matrix(&self.target, &px);
                let assign_key = match self.kind {
                    InstanceKind::PullbackInjective | InstanceKind::PullbackGeneral => {
                        // assignment X -> S
                        let mut v = vec![0usize; m];
                        for x in 0..m {
                            v[px[x]] = ps[self.map.apply(x)];
                        }
                        v
                    }
                    InstanceKind::PushforwardSurjective => {
                        let mut v = vec![0usize; n];
                        for p in 0..n {
                            v[ps[p]] = px[self.map.apply(p)];
                        }
                        v
                    }
                };
                let key = (base_key, target_key, assign_key);
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            }
        }
        best.expect("nonempty permutation set")
    }

    pub fn isomorphic_to(&self, other: &Instance) -> bool {
        self.kind == other.kind && self.canonical_key() == other.canonical_key()
    }

    pub fn instance_block(&self) -> InstanceBlock {
        InstanceBlock {
            spaces: vec![self.base.render(), self.target.render()],
            maps: vec![self.map.render()],
            supports: vec![match self.kind {
                InstanceKind::PullbackInjective | InstanceKind::PullbackGeneral => {
                    format!("support sigma = pullback({})", self.map.name())
                }
                InstanceKind::PushforwardSurjective => {
                    format!("support sigma = pushforward({})", self.map.name())
                }
            }],
            objects: Vec::new(),
        }
    }
}

fn permuted_matrix(space: &FinSpace, perm: &[usize]) -> u64 {
    let n = space.len();
    let mut out = 0u64;
    for i in 0..n {
        for j in 0..n {
            if space.leq(i, j) {
                out |= 1 << (perm[i] * n + perm[j]);
            }
        }
    }
    out
}

type PermCache = Mutex<BTreeMap<usize, Arc<Vec<Vec<usize>>>>>;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    static CACHE: OnceLock<PermCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    let mut guard = cache.lock().expect("permutation cache poisoned");
    let entry = guard.entry(n).or_insert_with(|| {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        gen_permutations(&mut current, 0, &mut out);
        out.sort();
        Arc::new(out)
    });
    entry.as_ref().clone()
}

fn gen_permutations(current: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == current.len() {
        out.push(current.clone());
        return;
    }
    for i in k..current.len() {
        current.swap(k, i);
        gen_permutations(current, k + 1, out);
        current.swap(k, i);
    }
}

/// All labeled posets on `n` points, as spaces named `name` with points
/// `prefix0..`, in increasing relation-matrix order.
///
/// Every finite poset admits a linear extension, so enumerating the
/// transitively closed relations supported above the diagonal and then
/// relabeling them in every way is complete.
pub fn enumerate_posets(n: usize) -> Result<Vec<Arc<FinSpace>>> {
    enumerate_posets_named(n, "S", "p")
}

pub fn enumerate_posets_named(n: usize, name: &str, prefix: &str) -> Result<Vec<Arc<FinSpace>>> {
    if n == 0 {
        return Err(Error::input("posets need at least one point"));
    }
    if n > enumeration_cap() {
        return Err(Error::CapExceeded(format!(
            "poset size {n} exceeds the enumeration cap {} (set TTG_MAX_BASE to raise it)",
            enumeration_cap()
        )));
    }
    let matrices = poset_matrices(n);
    matrices
        .iter()
        .map(|&m| FinSpace::from_leq_matrix_named(name, prefix, n, m))
        .collect()
}

fn poset_matrices(n: usize) -> Arc<Vec<u64>> {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, Arc<Vec<u64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(hit) = cache.lock().expect("poset cache poisoned").get(&n) {
        return Arc::clone(hit);
    }
    let computed = Arc::new(compute_poset_matrices(n));
    cache
        .lock()
        .expect("poset cache poisoned")
        .insert(n, Arc::clone(&computed));
    computed
}

fn compute_poset_matrices(n: usize) -> Vec<u64> {
    // strictly-above-diagonal cells, in a fixed order
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut out = std::collections::BTreeSet::new();
    for mask in 0u64..(1 << cells.len()) {
        let mut leq = vec![0u64; n]; // leq[i] bit j: p_i <= p_j
        for (i, row) in leq.iter_mut().enumerate() {
            *row |= 1 << i;
        }
        for (k, &(i, j)) in cells.iter().enumerate() {
            if mask >> k & 1 == 1 {
                leq[i] |= 1 << j;
            }
        }
        if !is_transitive(&leq, n) {
            continue;
        }
        for perm in permutations(n) {
            let mut matrix = 0u64;
            for i in 0..n {
                for j in 0..n {
                    if leq[i] >> j & 1 == 1 {
                        matrix |= 1 << (perm[i] * n + perm[j]);
                    }
                }
            }
            out.insert(matrix);
        }
    }
    out.into_iter().collect()
}

fn is_transitive(leq: &[u64], n: usize) -> bool {
    for i in 0..n {
        for j in 0..n {
            if leq[i] >> j & 1 == 1 {
                // leq[j] must be contained in leq[i]'s successors
                if leq[j] & !leq[i] != 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// All assignments `domain -> codomain` that are monotone (and injective or
/// surjective where requested), in lexicographic order.
fn structure_maps(
    domain: &Arc<FinSpace>,
    codomain: &Arc<FinSpace>,
    injective: bool,
    surjective: bool,
) -> Vec<Vec<usize>> {
    let n = domain.len();
    let m = codomain.len();
    let mut out = Vec::new();
    let mut assignment = vec![0usize; n];
    loop {
        let ok = (!injective || is_injective_assignment(&assignment, m))
            && (!surjective || is_surjective_assignment(&assignment, m))
            && is_monotone_assignment(domain, codomain, &assignment);
        if ok {
            out.push(assignment.clone());
        }
        // increment the mixed-radix counter
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            assignment[k] += 1;
            if assignment[k] < m {
                break;
            }
            assignment[k] = 0;
        }
    }
}

fn is_injective_assignment(assignment: &[usize], m: usize) -> bool {
    let mut seen = 0u64;
    for &v in assignment {
        if seen >> v & 1 == 1 {
            return false;
        }
        seen |= 1 << v;
    }
    let _ = m;
    true
}

fn is_surjective_assignment(assignment: &[usize], m: usize) -> bool {
    let mut seen = 0u64;
    for &v in assignment {
        seen |= 1 << v;
    }
    seen.count_ones() as usize == m
}

fn is_monotone_assignment(domain: &FinSpace, codomain: &FinSpace, assignment: &[usize]) -> bool {
    let n = domain.len();
    for p in 0..n {
        for q in 0..n {
            if domain.leq(p, q) && !codomain.leq(assignment[p], assignment[q]) {
                return false;
            }
        }
    }
    true
}

/// Complete, deterministic enumeration of a family, size-lexicographic.
/// With [`DedupMode::UpToIso`] only the first representative of each
/// isomorphism class is yielded.
pub fn enumerate_instances(family: &InstanceFamily) -> Result<Vec<Instance>> {
    family.validate()?;
    let mut out = Vec::new();
    for_each_base(family, |_, instances| {
        out.extend(instances);
        Ok(())
    })?;
    if family.dedup == DedupMode::UpToIso {
        let mut seen = std::collections::BTreeSet::new();
        out.retain(|inst| seen.insert(inst.canonical_key()));
    }
    Ok(out)
}

/// Instances grouped by base poset, for parallel sweeps with deterministic
/// aggregation. The callback receives the base index in enumeration order.
fn for_each_base<F>(family: &InstanceFamily, mut f: F) -> Result<()>
where
    F: FnMut(usize, Vec<Instance>) -> Result<()>,
{
    let mut base_index = 0usize;
    for n in 1..=family.max_base {
        let bases = enumerate_posets_named(n, "S", "p")?;
        for base in bases {
            f(base_index, instances_for_base(family, &base)?)?;
            base_index += 1;
        }
    }
    Ok(())
}

fn instances_for_base(family: &InstanceFamily, base: &Arc<FinSpace>) -> Result<Vec<Instance>> {
    let n = base.len();
    let mut out = Vec::new();
    let max_m = match family.kind {
        // injective maps into the base and surjections out of it both need
        // a target no bigger than the base
        InstanceKind::PullbackInjective | InstanceKind::PushforwardSurjective => {
            family.max_target.min(n)
        }
        InstanceKind::PullbackGeneral => family.max_target,
    };
    for m in 1..=max_m {
        let targets = enumerate_posets_named(m, "X", "q")?;
        for target in targets {
            match family.kind {
                InstanceKind::PullbackInjective | InstanceKind::PullbackGeneral => {
                    let injective = family.kind == InstanceKind::PullbackInjective;
                    for assignment in structure_maps(&target, base, injective, false) {
                        let map = SpaceMap::new(
                            "eta",
                            Arc::clone(&target),
                            Arc::clone(base),
                            assignment,
                        )?;
                        out.push(Instance {
                            kind: family.kind,
                            base: Arc::clone(base),
                            target: Arc::clone(&target),
                            map,
                        });
                    }
                }
                InstanceKind::PushforwardSurjective => {
                    for assignment in structure_maps(base, &target, false, true) {
                        let map = SpaceMap::new(
                            "rho",
                            Arc::clone(base),
                            Arc::clone(&target),
                            assignment,
                        )?;
                        out.push(Instance {
                            kind: family.kind,
                            base: Arc::clone(base),
                            target: Arc::clone(&target),
                            map,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Everything the suite entries need about one instance, computed once.
pub struct InstanceContext {
    pub instance: Instance,
    pub datum: Arc<SupportDatum>,
    point_supports: Vec<PointSet>,
    applicable_pullback: bool,
    comparative: Option<crate::support::ComparativeCheck>,
}

impl InstanceContext {
    pub fn new(instance: Instance) -> Result<InstanceContext> {
        let datum = instance.support()?;
        let calc = ExtensionCalculator::new(&datum)?;
        let point_supports: Vec<PointSet> = (0..datum.target().len())
            .map(|x| calc.point_support(x))
            .collect();
        let is_pullback = matches!(
            instance.kind,
            InstanceKind::PullbackInjective | InstanceKind::PullbackGeneral
        );
        let applicable_pullback = is_pullback
            && datum.is_tensorial().holds
            && datum.is_realizing().holds
            && datum.is_faithful().holds;
        let comparative = if datum.is_tensorial().holds && datum.is_realizing().holds {
            Some(datum.is_comparative()?)
        } else {
            None
        };
        Ok(InstanceContext {
            instance,
            datum,
            point_supports,
            applicable_pullback,
            comparative,
        })
    }

    fn extended(&self, supp: PointSet) -> PointSet {
        PointSet::from_indices(
            (0..self.datum.target().len())
                .filter(|&x| !self.point_supports[x].intersect(supp).is_empty()),
        )
    }

    fn is_pullback(&self) -> bool {
        matches!(
            self.instance.kind,
            InstanceKind::PullbackInjective | InstanceKind::PullbackGeneral
        )
    }
}

/// Outcome of one suite entry on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryOutcome {
    pub verdict: Verdict,
    pub witness: Option<String>,
}

impl EntryOutcome {
    fn pass() -> EntryOutcome {
        EntryOutcome {
            verdict: Verdict::True,
            witness: None,
        }
    }

    fn fail(witness: String) -> EntryOutcome {
        EntryOutcome {
            verdict: Verdict::False,
            witness: Some(witness),
        }
    }

    fn not_applicable() -> EntryOutcome {
        EntryOutcome {
            verdict: Verdict::NotApplicable,
            witness: None,
        }
    }

    fn of(pass: bool, witness: impl FnOnce() -> String) -> EntryOutcome {
        if pass {
            EntryOutcome::pass()
        } else {
            EntryOutcome::fail(witness())
        }
    }
}

/// A named invariant with an executable check. Every entry is a proven
/// statement about the modeled constructions, so a failure on an applicable
/// instance is an implementation bug, never new mathematics.
pub struct SuiteEntry {
    pub name: &'static str,
    run: fn(&InstanceContext) -> Result<EntryOutcome>,
}

/// The standard collection of invariants run by `suite`.
pub struct TheoremSuite {
    entries: Vec<SuiteEntry>,
}

impl Default for TheoremSuite {
    fn default() -> Self {
        Self::standard()
    }
}

impl TheoremSuite {
    pub fn standard() -> TheoremSuite {
        TheoremSuite {
            entries: vec![
                SuiteEntry {
                    name: "support-axioms-hold",
                    run: check_axioms_hold,
                },
                SuiteEntry {
                    name: "pullback-support-tensorial",
                    run: check_pullback_tensorial,
                },
                SuiteEntry {
                    name: "pushforward-faithful-realizing",
                    run: check_pushforward_faithful_realizing,
                },
                SuiteEntry {
                    name: "universal-map-injective",
                    run: check_universal_map_injective,
                },
                SuiteEntry {
                    name: "tabulation-recovers-universal-map",
                    run: check_tabulation_roundtrip,
                },
                SuiteEntry {
                    name: "point-idempotent-extension-criterion",
                    run: check_point_idempotent_criterion,
                },
                SuiteEntry {
                    name: "faithfulness-procedures-agree",
                    run: check_procedures_agree,
                },
                SuiteEntry {
                    name: "comparative-section-properties",
                    run: check_comparative_properties,
                },
                SuiteEntry {
                    name: "comparative-identity-shadows",
                    run: check_comparative_shadows,
                },
                SuiteEntry {
                    name: "extension-agrees-on-compacts",
                    run: check_pullback_extension_agreement,
                },
                SuiteEntry {
                    name: "sigma-hat-contained-in-extension",
                    run: check_sigma_hat_containment,
                },
                SuiteEntry {
                    name: "sigma-hat-faithful-iff-order-iso",
                    run: check_sigma_hat_faithful,
                },
                SuiteEntry {
                    name: "pushforward-extension-is-image",
                    run: check_pushforward_extension_image,
                },
                SuiteEntry {
                    name: "pushforward-point-supports-are-fibers",
                    run: check_pushforward_fibers,
                },
                SuiteEntry {
                    name: "pushforward-extension-faithful",
                    run: check_pushforward_extension_faithful,
                },
                SuiteEntry {
                    name: "pushforward-agreement-iff-closed",
                    run: check_pushforward_agreement_iff_closed,
                },
            ],
        }
    }

    pub fn entry_names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name).collect()
    }

    /// Runs every entry on one instance. Deterministic: identical instances
    /// produce identical reports.
    pub fn run(&self, instance: &Instance) -> Result<Report> {
        let ctx = InstanceContext::new(instance.clone())?;
        let mut report = Report::new();
        report.instance = Some(instance.instance_block());
        for entry in &self.entries {
            let outcome = (entry.run)(&ctx)?;
            report.push_property(entry.name, outcome.verdict, outcome.witness);
        }
        Ok(report)
    }
}

fn check_axioms_hold(ctx: &InstanceContext) -> Result<EntryOutcome> {
    let report = ctx.datum.check_axioms();
    Ok(EntryOutcome::of(report.all_pass(), || {
        report
            .properties
            .iter()
            .find(|p| p.verdict == Verdict::False)
            .map(|p| format!("{}: {}", p.name, p.witness.clone().unwrap_or_default()))
            .unwrap_or_default()
    }))
}

fn check_pullback_tensorial(ctx: &InstanceContext) -> Result<EntryOutcome> {
    if !ctx.is_pullback() {
        return Ok(EntryOutcome::not_applicable());
    }
    let t = ctx.datum.is_tensorial();
    Ok(EntryOutcome::of(t.holds, || {
        let (w1, w2) = t.witness.expect("failing check has a witness");
        format!(
            "({},{})",
            ctx.datum.base().render_set(w1),
            ctx.datum.base().render_set(w2)
        )
    }))
}

fn check_pushforward_faithful_realizing(ctx: &InstanceContext) -> Result<EntryOutcome> {
    if ctx.is_pullback() {
        return Ok(EntryOutcome::not_applicable());
    }
    let f = ctx.datum.is_faithful();
    let r = ctx.datum.is_realizing();
    Ok(EntryOutcome::of(f.holds && r.holds, || {
        if let Some(w) = f.witness {
            format!("not faithful at {}", ctx.datum.base().render_set(w))
        } else {
            format!(
                "not realizing at {}",
                ctx.datum.target().render_set(r.witness.expect("witness"))
            )
        }
    }))
}

fn check_universal_map_injective(ctx: &InstanceContext) -> Result<EntryOutcome> {
    if !(ctx.datum.is_tensorial().holds && ctx.datum.is_realizing().holds) {
        return Ok(EntryOutcome::not_applicable());
    }
    let eta = ctx.datum.universal_eta()?;
    Ok(EntryOutcome::of(eta.is_injective(), || eta.render()))
}

fn check_tabulation_roundtrip(ctx: &InstanceContext) -> Result<EntryOutcome> {
    if !(ctx.is_pullback() && ctx.datum.is_tensorial().holds && ctx.datum.is_realizing().holds) {
        return Ok(EntryOutcome::not_applicable());
    }
    let eta = ctx.datum.tabulate().universal_eta()?;
    Ok(EntryOutcome::of(
        eta.assignment() == ctx.instance.map.assignment(),
        || format!("recovered {}", eta.render()),
    ))
}

/// The extension of the point idempotent at `P` is empty exactly when the
/// preimage of `P`'s closure has no unique generic point.
fn check_point_idempotent_criterion(ctx: &InstanceContext) -> Result<EntryOutcome> {
    if !ctx.applicable_pullback {
        return Ok(EntryOutcome::not_applicable());
    }
    let base = ctx.datum.base();
    for p in 0..base.len() {
        let empty_extension = ctx.extended(PointSet::singleton(p)).is_empty();
        let pre = ctx.instance.map.preimage(base.v_of(p)?);
        let unique_generic = ctx.datum.target().generic_points(pre)?.len() == 1;
        if empty_extension != !unique_generic {
            return Ok(EntryOutcome::fail(format!(
                "at {}: empty-extension={} unique-generic={}",
                base.point_name(p),
                empty_extension,
                unique_generic
            )));
        }
    }
    Ok(EntryOutcome::pass())
}

/// The three faithfulness procedures: the generic-point criterion, the
/// comparativeness decision, and direct search over all big objects.
fn check_procedures_agree(ctx: &InstanceContext) -> Result<EntryOutcome> {
    if !ctx.applicable_pullback {
        return Ok(EntryOutcome::not_applicable());
    }
    let base = ctx.datum.base();
    let mut criterion = true;
    for p in 0..base.len() {
        let pre = ctx.instance.map.preimage(base.v_of(p)?);
        if ctx.datum.target().generic_points(pre)?.len() != 1 {
            criterion = false;
            break;
        }
    }
    let comparative = ctx
        .comparative
        .as_ref()
        .expect("applicable instances carry the comparative check")
        .comparative;
    let calc = ExtensionCalculator::new(&ctx.datum)?;
    let search_faithful = calc.search_empty_extension(SearchConfig::default()).is_none();
    Ok(EntryOutcome::of(
        criterion == comparative && comparative == search_faithful,
        || format!("criterion={criterion} comparative={comparative} search={search_faithful}"),
    ))
}

/// A comparison map is a closed continuous section of the universal map and
/// recovers the support as a plain (already closed) image.
fn check_comparative_properties(ctx: &InstanceContext) -> Result<EntryOutcome> {
    let Some(check) = &ctx.comparative else {
        return Ok(EntryOutcome::not_applicable());
    };
    if !check.comparative {
        return Ok(EntryOutcome::not_applicable());
    }
    let rho = check.rho.as_ref().expect("comparative check carries rho");
    if !rho.is_monotone() || !rho.is_closed_map() {
        return Ok(EntryOutcome::fail(format!("{} not closed", rho.render())));
    }
    for &w in ctx.datum.base().down_sets() {
        let image = rho.image(w);
        if ctx.datum.sigma(w) != image || ctx.datum.target().closure(image)? != image {
            return Ok(EntryOutcome::fail(format!(
                "support mismatch at {}",
                ctx.datum.base().render_set(w)
            )));
        }
    }
    Ok(EntryOutcome::pass())
}

fn check_comparative_shadows(ctx: &InstanceContext) -> Result<EntryOutcome> {
    match &ctx.comparative {
        Some(check) if check.comparative => {
            let report = idempotent_identities_check(&ctx.datum)?;
            Ok(EntryOutcome::of(report.all_pass(), || {
                report
                    .properties
                    .iter()
                    .find(|p| p.verdict == Verdict::False)
                    .map(|p| format!("{}: {}", p.name, p.witness.clone().unwrap_or_default()))
                    .unwrap_or_default()
            }))
        }
        _ => Ok(EntryOutcome::not_applicable()),
    }
}

/// For tensorial realizing pullbacks the canonical extension agrees with the
/// datum on every compact object.
fn check_pullback_extension_agreement(ctx: &InstanceContext) -> Result<EntryOutcome> {
    if !(ctx.is_pullback() && ctx.datum.is_tensorial().holds && ctx.datum.is_realizing().holds) {
        return Ok(EntryOutcome::not_applicable());
    }
    for &w in ctx.datum.base().down_sets() {
        if ctx.extended(w) != ctx.datum.sigma(w) {
            return Ok(EntryOutcome::fail(ctx.datum.base().render_set(w)));
        }
    }
    Ok(EntryOutcome::pass())
}

fn check_sigma_hat_containment(ctx: &InstanceContext) -> Result<EntryOutcome> {
    if !ctx.applicable_pullback {
        return Ok(EntryOutcome::not_applicable());
    }
    let full = ctx.datum.base().full_set().bits();
    for bits in 0..=full {
        let supp = PointSet::from_bits(bits);
        let hat = ctx.instance.map.preimage(supp);
        if !hat.is_subset(ctx.extended(supp)) {
            return Ok(EntryOutcome::fail(ctx.datum.base().render_set(supp)));
        }
    }
    Ok(EntryOutcome::pass())
}

fn check_sigma_hat_faithful(ctx: &InstanceContext) -> Result<EntryOutcome> {
    if !ctx.applicable_pullback {
        return Ok(EntryOutcome::not_applicable());
    }
    let full = ctx.datum.base().full_set().bits();
    let mut hat_faithful = true;
    for bits in 1..=full {
        if ctx.instance.map.preimage(PointSet::from_bits(bits)).is_empty() {
            hat_faithful = false;
            break;
        }
    }
    let iso = ctx.instance.map.is_order_isomorphism();
    Ok(EntryOutcome::of(hat_faithful == iso, || {
        format!("hat-faithful={hat_faithful} order-iso={iso}")
    }))
}

fn check_pushforward_extension_image(ctx: &InstanceContext) -> Result<EntryOutcome> {
    if ctx.is_pullback() {
        return Ok(EntryOutcome::not_applicable());
    }
    let full = ctx.datum.base().full_set().bits();
    for bits in 0..=full {
        let supp = PointSet::from_bits(bits);
        if ctx.extended(supp) != ctx.instance.map.image(supp) {
            return Ok(EntryOutcome::fail(ctx.datum.base().render_set(supp)));
        }
    }
    Ok(EntryOutcome::pass())
}

fn check_pushforward_fibers(ctx: &InstanceContext) -> Result<EntryOutcome> {
    if ctx.is_pullback() {
        return Ok(EntryOutcome::not_applicable());
    }
    for x in 0..ctx.datum.target().len() {
        if ctx.point_supports[x] != ctx.instance.map.preimage(PointSet::singleton(x)) {
            return Ok(EntryOutcome::fail(ctx.datum.target().point_name(x).to_string()));
        }
    }
    Ok(EntryOutcome::pass())
}

fn check_pushforward_extension_faithful(ctx: &InstanceContext) -> Result<EntryOutcome> {
    if ctx.is_pullback() {
        return Ok(EntryOutcome::not_applicable());
    }
    let full = ctx.datum.base().full_set().bits();
    for bits in 1..=full {
        if ctx.extended(PointSet::from_bits(bits)).is_empty() {
            return Ok(EntryOutcome::fail(
                ctx.datum.base().render_set(PointSet::from_bits(bits)),
            ));
        }
    }
    Ok(EntryOutcome::pass())
}

fn check_pushforward_agreement_iff_closed(ctx: &InstanceContext) -> Result<EntryOutcome> {
    if ctx.is_pullback() {
        return Ok(EntryOutcome::not_applicable());
    }
    let mut agrees = true;
    for &w in ctx.datum.base().down_sets() {
        if ctx.extended(w) != ctx.datum.sigma(w) {
            agrees = false;
            break;
        }
    }
    let closed = ctx.instance.map.is_closed_map();
    Ok(EntryOutcome::of(agrees == closed, || {
        format!("agrees-on-compacts={agrees} closed-map={closed}")
    }))
}

/// Accumulated results of one suite entry over a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntrySummary {
    pub name: &'static str,
    pub pass: u64,
    pub fail: u64,
    pub not_applicable: u64,
    pub first_failure: Option<String>,
}

/// Results of a family sweep: per-entry tallies plus the instance count.
/// Zero failures means every applicable instance satisfied every invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteSummary {
    pub instances: u64,
    pub entries: Vec<EntrySummary>,
}

impl SuiteSummary {
    pub fn violations(&self) -> u64 {
        self.entries.iter().map(|e| e.fail).sum()
    }
}

/// Runs the standard suite over every instance of both map directions up to
/// the bounds: pullback-injective and pushforward-surjective families.
pub fn run_suite_over_bounds(max_base: usize, max_target: usize) -> Result<SuiteSummary> {
    let pullbacks = InstanceFamily::new(InstanceKind::PullbackInjective, max_base, max_target);
    let pushforwards =
        InstanceFamily::new(InstanceKind::PushforwardSurjective, max_base, max_target);
    let a = run_suite_over_family(&pullbacks)?;
    let b = run_suite_over_family(&pushforwards)?;
    Ok(merge_summaries(a, b))
}

fn merge_summaries(mut a: SuiteSummary, b: SuiteSummary) -> SuiteSummary {
    a.instances += b.instances;
    for (ea, eb) in a.entries.iter_mut().zip(b.entries) {
        debug_assert_eq!(ea.name, eb.name);
        ea.pass += eb.pass;
        ea.fail += eb.fail;
        ea.not_applicable += eb.not_applicable;
        if ea.first_failure.is_none() {
            ea.first_failure = eb.first_failure;
        }
    }
    a
}

/// Runs the standard suite over one family, in parallel across base posets
/// with deterministic (enumeration-ordered) aggregation.
pub fn run_suite_over_family(family: &InstanceFamily) -> Result<SuiteSummary> {
    family.validate()?;
    let suite = TheoremSuite::standard();
    let names = suite.entry_names();
    let bases = all_bases(family.max_base)?;
    let partials: Vec<Result<SuiteSummary>> = bases
        .par_iter()
        .map(|base| {
            let suite = TheoremSuite::standard();
            let mut summary = empty_summary(&names);
            for instance in instances_for_base(family, base)? {
                let report = suite.run(&instance)?;
                summary.instances += 1;
                for (entry, prop) in summary.entries.iter_mut().zip(&report.properties) {
                    match prop.verdict {
                        Verdict::True => entry.pass += 1,
                        Verdict::NotApplicable => entry.not_applicable += 1,
                        Verdict::False => {
                            entry.fail += 1;
                            if entry.first_failure.is_none() {
                                entry.first_failure = Some(format!(
                                    "{} on\n{}",
                                    prop.witness.clone().unwrap_or_default(),
                                    instance.render()
                                ));
                            }
                        }
                    }
                }
            }
            Ok(summary)
        })
        .collect();
    let mut total = empty_summary(&names);
    for partial in partials {
        total = merge_summaries(total, partial?);
    }
    Ok(total)
}

fn empty_summary(names: &[&'static str]) -> SuiteSummary {
    SuiteSummary {
        instances: 0,
        entries: names
            .iter()
            .map(|&name| EntrySummary {
                name,
                pass: 0,
                fail: 0,
                not_applicable: 0,
                first_failure: None,
            })
            .collect(),
    }
}

fn all_bases(max_base: usize) -> Result<Vec<Arc<FinSpace>>> {
    let mut out = Vec::new();
    for n in 1..=max_base {
        out.extend(enumerate_posets_named(n, "S", "p")?);
    }
    Ok(out)
}

/// Exhaustive check that the support-level Galois pair is the identity for
/// the universal support of every labeled poset up to `max_base` points:
/// the ideal attached to a closed set has exactly that set as its value.
pub fn galois_identity_sweep(max_base: usize) -> Result<u64> {
    let bases = all_bases(max_base)?;
    let violations: u64 = bases
        .par_iter()
        .map(|base| {
            let sb = SupportDatum::balmer(Arc::clone(base));
            let mut bad = 0u64;
            for &w in base.down_sets() {
                // Phi(Theta(w)) via the generic union formula
                if gamma_ideal_support(&sb, w).expect("closed set") != w {
                    bad += 1;
                }
                // Theta(Phi) on the ideal recorded by w: membership sets agree
                if sb.sigma(w) != w {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    Ok(violations)
}

/// A found counterexample: the instance plus a short detail line.
#[derive(Clone, Debug)]
pub struct SearchWitness {
    pub instance: Instance,
    pub detail: String,
}

/// Result of a predicate search over a family.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub predicate: &'static str,
    /// Predicates that a proven theorem forbids: any witness at all is an
    /// implementation bug.
    pub expect_empty: bool,
    pub instances_scanned: u64,
    pub witnesses: Vec<SearchWitness>,
}

pub const SEARCH_PREDICATES: &[&str] = &[
    "non-faithful-extension",
    "non-tensorial-pushforward",
    "non-closed-rho",
    "comparative-but-nonfaithful-extension",
    "strict-sigma-hat-containment",
];

/// Searches a family for instances satisfying a registered predicate.
/// Witnesses come back in enumeration order, so the first is size-minimal.
pub fn search_counterexamples(
    predicate: &str,
    family: &InstanceFamily,
) -> Result<SearchOutcome> {
    let (name, kind, expect_empty): (&'static str, InstanceKind, bool) = match predicate {
        "non-faithful-extension" => (
            "non-faithful-extension",
            InstanceKind::PullbackInjective,
            false,
        ),
        "non-tensorial-pushforward" => (
            "non-tensorial-pushforward",
            InstanceKind::PushforwardSurjective,
            false,
        ),
        "non-closed-rho" => ("non-closed-rho", InstanceKind::PushforwardSurjective, false),
        "comparative-but-nonfaithful-extension" => (
            "comparative-but-nonfaithful-extension",
            InstanceKind::PullbackInjective,
            true,
        ),
        "strict-sigma-hat-containment" => (
            "strict-sigma-hat-containment",
            InstanceKind::PullbackInjective,
            false,
        ),
        other => {
            return Err(Error::input(format!(
                "unknown predicate {other}; registered: {}",
                SEARCH_PREDICATES.join(", ")
            )))
        }
    };
    let family = InstanceFamily { kind, ..*family };
    family.validate()?;
    let bases = all_bases(family.max_base)?;
    let partials: Vec<Result<(u64, Vec<SearchWitness>)>> = bases
        .par_iter()
        .map(|base| {
            let mut scanned = 0u64;
            let mut witnesses = Vec::new();
            for instance in instances_for_base(&family, base)? {
                scanned += 1;
                if let Some(detail) = evaluate_predicate(name, &instance)? {
                    witnesses.push(SearchWitness { instance, detail });
                }
            }
            Ok((scanned, witnesses))
        })
        .collect();
    let mut outcome = SearchOutcome {
        predicate: name,
        expect_empty,
        instances_scanned: 0,
        witnesses: Vec::new(),
    };
    for partial in partials {
        let (scanned, witnesses) = partial?;
        outcome.instances_scanned += scanned;
        outcome.witnesses.extend(witnesses);
    }
    if family.dedup == DedupMode::UpToIso {
        let mut seen = std::collections::BTreeSet::new();
        outcome
            .witnesses
            .retain(|w| seen.insert(w.instance.canonical_key()));
    }
    Ok(outcome)
}

fn evaluate_predicate(name: &str, instance: &Instance) -> Result<Option<String>> {
    let ctx = InstanceContext::new(instance.clone())?;
    match name {
        "non-faithful-extension" => {
            if !ctx.applicable_pullback {
                return Ok(None);
            }
            let check = ctx.comparative.as_ref().expect("applicable");
            if check.comparative {
                return Ok(None);
            }
            let p = check.witness.expect("witness");
            Ok(Some(format!(
                "extension not faithful: object with supp {} has empty extension",
                ctx.datum.base().render_set(PointSet::singleton(p))
            )))
        }
        "non-tensorial-pushforward" => {
            let t = ctx.datum.is_tensorial();
            if t.holds {
                return Ok(None);
            }
            let (w1, w2) = t.witness.expect("witness");
            Ok(Some(format!(
                "not tensorial at ({},{})",
                ctx.datum.base().render_set(w1),
                ctx.datum.base().render_set(w2)
            )))
        }
        "non-closed-rho" => {
            if ctx.instance.map.is_closed_map() {
                return Ok(None);
            }
            let bad = ctx
                .datum
                .base()
                .down_sets()
                .iter()
                .copied()
                .find(|&w| {
                    !ctx.datum
                        .target()
                        .is_down_set(ctx.instance.map.image(w))
                })
                .expect("non-closed map has a witness");
            Ok(Some(format!(
                "image of {} is not closed",
                ctx.datum.base().render_set(bad)
            )))
        }
        "comparative-but-nonfaithful-extension" => {
            if !ctx.applicable_pullback {
                return Ok(None);
            }
            if !ctx.comparative.as_ref().expect("applicable").comparative {
                return Ok(None);
            }
            let calc = ExtensionCalculator::new(&ctx.datum)?;
            match calc.search_empty_extension(SearchConfig::default()) {
                None => Ok(None),
                Some(supp) => Ok(Some(format!(
                    "comparative but object with supp {} has empty extension",
                    ctx.datum.base().render_set(supp)
                ))),
            }
        }
        "strict-sigma-hat-containment" => {
            if !ctx.applicable_pullback {
                return Ok(None);
            }
            let full = ctx.datum.base().full_set().bits();
            for bits in 0..=full {
                let supp = PointSet::from_bits(bits);
                let hat = ctx.instance.map.preimage(supp);
                let tilde = ctx.extended(supp);
                if hat.is_subset(tilde) && hat != tilde {
                    return Ok(Some(format!(
                        "object with supp {}: preimage extension {} strictly inside {}",
                        ctx.datum.base().render_set(supp),
                        ctx.datum.target().render_set(hat),
                        ctx.datum.target().render_set(tilde)
                    )));
                }
            }
            Ok(None)
        }
        other => Err(Error::input(format!("unknown predicate {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    /// Independent oracle: count labeled posets by filtering every relation
    /// matrix directly for reflexivity, antisymmetry and transitivity.
    fn count_posets_bruteforce(n: usize) -> usize {
        let cells: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j)
            .collect();
        let mut count = 0usize;
        for mask in 0u64..(1 << cells.len()) {
            let mut leq = vec![0u64; n];
            for (i, row) in leq.iter_mut().enumerate() {
                *row |= 1 << i;
            }
            for (k, &(i, j)) in cells.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    leq[i] |= 1 << j;
                }
            }
            let antisymmetric = (0..n)
                .all(|i| (0..n).all(|j| i == j || !(leq[i] >> j & 1 == 1 && leq[j] >> i & 1 == 1)));
            if antisymmetric && is_transitive(&leq, n) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn poset_counts_match_independent_oracle() {
        let expected = [1usize, 3, 19, 219];
        for (i, &want) in expected.iter().enumerate() {
            let n = i + 1;
            assert_eq!(enumerate_posets(n).unwrap().len(), want, "n={n}");
            assert_eq!(count_posets_bruteforce(n), want, "oracle n={n}");
        }
    }

    #[test]
    fn single_point_enumeration() {
        assert_eq!(enumerate_posets(1).unwrap().len(), 1);
    }

    #[test]
    fn cap_refusal() {
        let family = InstanceFamily::new(InstanceKind::PullbackInjective, 40, 2);
        assert!(matches!(
            enumerate_instances(&family),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn pullback_family_contains_p1() {
        let family = InstanceFamily::new(InstanceKind::PullbackInjective, 3, 2);
        let instances = enumerate_instances(&family).unwrap();
        let p1 = fixtures::p1();
        let reference = Instance {
            kind: InstanceKind::PullbackInjective,
            base: p1.base,
            target: p1.target,
            map: p1.map,
        };
        assert!(
            instances.iter().any(|i| i.isomorphic_to(&reference)),
            "P1 missing from the n=3, m=2 pullback family"
        );
    }

    #[test]
    fn dedup_reduces_to_isomorphism_classes() {
        let family = InstanceFamily::new(InstanceKind::PullbackInjective, 2, 2);
        let labeled = enumerate_instances(&family).unwrap();
        let deduped =
            enumerate_instances(&family.with_dedup(DedupMode::UpToIso)).unwrap();
        assert!(deduped.len() < labeled.len());
        // every labeled instance is isomorphic to some representative
        for inst in &labeled {
            assert!(deduped.iter().any(|d| d.isomorphic_to(inst)));
        }
    }

    #[test]
    fn suite_passes_on_fixture_instances() {
        let suite = TheoremSuite::standard();
        let p1 = fixtures::p1();
        let inst = Instance {
            kind: InstanceKind::PullbackInjective,
            base: p1.base,
            target: p1.target,
            map: p1.map,
        };
        let report = suite.run(&inst).unwrap();
        assert!(report.all_pass(), "{report:?}");
        // determinism: two runs give identical reports
        assert_eq!(report, suite.run(&inst).unwrap());

        let p4 = fixtures::p4();
        let inst4 = Instance {
            kind: InstanceKind::PushforwardSurjective,
            base: p4.base,
            target: p4.target,
            map: p4.map,
        };
        let report4 = suite.run(&inst4).unwrap();
        assert!(report4.all_pass(), "{report4:?}");
    }

    #[test]
    fn suite_sweep_small_bounds_is_clean() {
        let summary = run_suite_over_bounds(3, 3).unwrap();
        assert_eq!(summary.violations(), 0, "{summary:?}");
        assert!(summary.instances > 0);
    }

    #[test]
    fn galois_sweep_small() {
        assert_eq!(galois_identity_sweep(3).unwrap(), 0);
    }

    #[test]
    fn search_finds_p4_as_minimal_non_tensorial_pushforward() {
        let family = InstanceFamily::new(InstanceKind::PushforwardSurjective, 2, 1);
        let outcome = search_counterexamples("non-tensorial-pushforward", &family).unwrap();
        assert!(!outcome.witnesses.is_empty());
        let p4 = fixtures::p4();
        let reference = Instance {
            kind: InstanceKind::PushforwardSurjective,
            base: p4.base,
            target: p4.target,
            map: p4.map,
        };
        assert!(outcome.witnesses[0].instance.isomorphic_to(&reference));
    }

    #[test]
    fn search_finds_p1_as_minimal_non_faithful_extension() {
        let family = InstanceFamily::new(InstanceKind::PullbackInjective, 3, 2);
        let outcome = search_counterexamples("non-faithful-extension", &family).unwrap();
        assert!(!outcome.witnesses.is_empty());
        let p1 = fixtures::p1();
        let reference = Instance {
            kind: InstanceKind::PullbackInjective,
            base: p1.base,
            target: p1.target,
            map: p1.map,
        };
        assert!(outcome.witnesses[0].instance.isomorphic_to(&reference));
    }

    #[test]
    fn comparative_faithful_search_is_empty() {
        let family = InstanceFamily::new(InstanceKind::PullbackInjective, 3, 3);
        let outcome =
            search_counterexamples("comparative-but-nonfaithful-extension", &family).unwrap();
        assert!(outcome.expect_empty);
        assert!(outcome.witnesses.is_empty(), "{:?}", outcome.witnesses);
    }

    #[test]
    fn unknown_predicate_is_an_input_error() {
        let family = InstanceFamily::new(InstanceKind::PullbackInjective, 2, 2);
        assert!(matches!(
            search_counterexamples("bogus", &family),
            Err(Error::Input(_))
        ));
    }
}
