//! Lambda terms: parsing, A-normal form, translation into records, and a
//! reduction oracle to judge the translation against.

mod anf;
pub mod corpus;
pub mod oracle;
mod parse;
mod term;
mod translate;

pub use anf::{anf, Anf, AnfError, Value, RESERVED};
pub use oracle::{bohm_prefix, head_reduce, weak_head_reduce, Bohm, HeadOutcome};
pub use parse::{parse_lambda, parse_open, LambdaParseError};
pub use term::{Db, FreeVariable, Term};
pub use translate::{translate, translate_surface, TranslateError};

use crate::config::Options;
use crate::error::EvalError;
use crate::semantics::{Convergence, Evaluator};
use crate::syntax::CoreProgram;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LambdaError {
    #[error(transparent)]
    Parse(#[from] LambdaParseError),
    #[error(transparent)]
    Anf(#[from] AnfError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A-normal form then translation.
pub fn compile(t: &Term) -> Result<CoreProgram, LambdaError> {
    Ok(translate(&anf(t)?)?)
}

/// Whether the record image of `t` exposes an abstraction along its
/// `result` chain.
pub fn converges(t: &Term, options: Options) -> Result<Convergence, LambdaError> {
    let program = compile(t)?;
    Ok(Evaluator::new(&program, options).converges()?)
}
