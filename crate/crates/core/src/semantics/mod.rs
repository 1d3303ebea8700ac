//! Demand-driven evaluation of the mixin-tree equations.
//!
//! [`Evaluator`] answers `properties`, `supers`, `overrides`, `bases`,
//! `resolve` and `this` queries with per-query memoization, in-flight cycle
//! detection and a fuel bound. [`naive`] is an uncached transcription used as
//! a cross-check.

mod engine;
pub mod naive;
mod observe;

pub use engine::{Context, Evaluator, SinglePathViolation, SuperPair};
pub use naive::NaiveEvaluator;
pub use observe::{Convergence, NonConvergence, ObservationTree, Outcome};

use std::collections::BTreeSet;

use crate::config::Options;
use crate::error::EvalError;
use crate::syntax::{CoreProgram, Label, Path};

/// One-shot `properties` query with default options.
pub fn properties(program: &CoreProgram, p: &Path) -> Result<BTreeSet<Label>, EvalError> {
    Evaluator::new(program, Options::default()).properties(p)
}

/// One-shot `ancestors` query with default options.
pub fn ancestors(program: &CoreProgram, p: &Path) -> Result<BTreeSet<Path>, EvalError> {
    Evaluator::new(program, Options::default()).ancestors(p)
}

pub fn observe(program: &CoreProgram, p: &Path, depth: usize) -> Result<ObservationTree, EvalError> {
    Evaluator::new(program, Options::default()).observe(p, depth)
}
