//! Executable semantics for the inheritance calculus.
//!
//! Programs are trees of records that inherit from one another through
//! scoped references. [`semantics`] evaluates the six mutually recursive
//! set equations on demand. [`lambda`] translates A-normal-form lambda
//! terms into records and carries an independent head-reduction oracle.
//! [`direct`] evaluates the same terms with single-valued scope lookup, and
//! [`fixtures`] holds the example programs with their expected results.

pub mod syntax;
pub mod config;
pub mod error;
pub mod semantics;
mod table;

pub use config::Options;
pub use error::{Divergence, DivergenceKind, EvalError};
pub mod lambda;
pub mod direct;
pub mod fixtures;
