use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivergenceKind {
    /// A query re-entered its own in-flight evaluation.
    Cycle,
    /// The evaluation budget ran out first.
    FuelExhausted,
}

impl fmt::Display for DivergenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DivergenceKind::Cycle => "cycle",
            DivergenceKind::FuelExhausted => "fuel-exhausted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("divergence ({kind}) at {witness}")]
pub struct Divergence {
    pub kind: DivergenceKind,
    /// The query that closed the cycle or was refused fuel.
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Divergence(#[from] Divergence),
    #[error("scope underflow in {query}: no scope above the root")]
    ScopeUnderflow { query: String },
    #[error("ambiguous caller in {query}: {candidates:?}")]
    AmbiguousCaller { query: String, candidates: Vec<String> },
}

impl EvalError {
    pub fn divergence(&self) -> Option<DivergenceKind> {
        match self {
            EvalError::Divergence(d) => Some(d.kind),
            _ => None,
        }
    }
}
