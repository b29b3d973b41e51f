//! Workbench for support data on finite spectral spaces.
//!
//! Finite spectral spaces are exactly finite posets under specialization,
//! which makes the whole theory of abstract support data on them decidable:
//! the support axioms, the tensor-product property, faithfulness,
//! realization and the existence of a comparison map are all finite checks,
//! and the Rickard-idempotent calculus that extends a support from compact
//! to arbitrary objects becomes exact set arithmetic.
//!
//! The crate provides:
//!
//! - [`space`]: finite spectral spaces as posets, with closure, point
//!   closures and their complements, closed/generic points, and map
//!   predicates (continuity, closedness, surjectivity);
//! - [`support`]: support data built by pullback, pushforward or table,
//!   the axiom checks and property deciders, the universal map to the base
//!   space, and the comparison-map decision;
//! - [`rickard`]: supports of the idempotents attached to closed sets and
//!   points, big objects with exact support bookkeeping, the two extensions
//!   of a support to big objects, and the extension-faithfulness decision
//!   (criterion and direct search, cross-checked);
//! - [`explorer`]: complete enumeration of labeled instances up to a size
//!   bound, the theorem suite, and counterexample search;
//! - [`dsl`]: the `.ttg` declaration format and its canonical renderer;
//! - [`report`]: the shared report structure with JSON and DOT emitters;
//! - [`cli`]: the `ttg` command-line driver.
//!
//! Every value is immutable after construction and safe to share across
//! threads; all decision procedures are pure functions.
//!
//! The runnable examples under `examples/` walk through each capability;
//! start with `examples/check_support.rs`.

pub mod cli;
pub mod dsl;
pub mod error;
pub mod explorer;
pub mod fixtures;
pub mod report;
pub mod rickard;
pub mod space;
pub mod support;

pub use error::{Error, Result};
pub use space::{FinSpace, MapPredicates, PointSet, SpaceMap};
pub use support::{CompactObject, SupportDatum, SupportKind, ThickIdeal};
