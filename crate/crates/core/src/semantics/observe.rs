use std::fmt;

use serde::Serialize;

use super::engine::Evaluator;
use crate::error::{DivergenceKind, EvalError};
use crate::syntax::{well_known, Label, Path};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Properties(Vec<Label>),
    Divergence(DivergenceKind),
}

/// Finite unfolding of the property tree below some path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObservationTree {
    pub path: Path,
    #[serde(flatten)]
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ObservationTree>,
}

impl ObservationTree {
    fn lines(&self, base: Option<&Path>, out: &mut String) {
        let shown = match base {
            None => self.path.to_string(),
            Some(base) => {
                let rest = self.path.strip_prefix(base).expect("observation stays below its root");
                Path::from_labels(rest.iter().copied()).to_string()
            }
        };
        out.push_str(&shown);
        out.push('\t');
        match &self.outcome {
            Outcome::Properties(labels) => {
                let names: Vec<&str> = labels.iter().map(|l| l.as_str()).collect();
                out.push_str(&names.join(","));
            }
            Outcome::Divergence(kind) => {
                out.push('!');
                out.push_str(&kind.to_string());
            }
        }
        out.push('\n');
        for child in &self.children {
            child.lines(base, out);
        }
    }

    /// One line per node in pre-order: absolute path, tab, sorted labels.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.lines(None, &mut out);
        out
    }

    /// Like [`to_text`](Self::to_text) with paths relative to this node, so
    /// trees observed at different places can be compared.
    pub fn shape(&self) -> String {
        let mut out = String::new();
        self.lines(Some(&self.path), &mut out);
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("observation trees serialize")
    }

    pub fn labels(&self) -> Option<&[Label]> {
        match &self.outcome {
            Outcome::Properties(l) => Some(l),
            Outcome::Divergence(_) => None,
        }
    }

    pub fn find(&self, relative: &[Label]) -> Option<&ObservationTree> {
        match relative.split_first() {
            None => Some(self),
            Some((head, rest)) => {
                let depth = self.path.len();
                self.children.iter().find(|c| c.path.labels()[depth] == *head)?.find(rest)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonConvergence {
    Cycle,
    FuelExhausted,
    /// No depth up to the limit exposed an abstraction.
    DepthExceeded,
}

impl fmt::Display for NonConvergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NonConvergence::Cycle => "cycle",
            NonConvergence::FuelExhausted => "fuel-exhausted",
            NonConvergence::DepthExceeded => "depth-exceeded",
        })
    }
}

impl From<DivergenceKind> for NonConvergence {
    fn from(kind: DivergenceKind) -> Self {
        match kind {
            DivergenceKind::Cycle => NonConvergence::Cycle,
            DivergenceKind::FuelExhausted => NonConvergence::FuelExhausted,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Convergence {
    Converged { depth: usize },
    NotConverged { reason: NonConvergence },
}

impl Convergence {
    pub fn converged(&self) -> bool {
        matches!(self, Convergence::Converged { .. })
    }

    pub fn depth(&self) -> Option<usize> {
        match self {
            Convergence::Converged { depth } => Some(*depth),
            Convergence::NotConverged { .. } => None,
        }
    }

    /// Converged, or shown divergent by a cycle.
    pub fn decided(&self) -> bool {
        matches!(
            self,
            Convergence::Converged { .. } | Convergence::NotConverged { reason: NonConvergence::Cycle }
        )
    }
}

impl fmt::Display for Convergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Convergence::Converged { depth } => write!(f, "converged at depth {depth}"),
            Convergence::NotConverged { reason } => write!(f, "not converged ({reason})"),
        }
    }
}

impl Evaluator<'_> {
    /// Unfolds properties below `p` for `depth` levels. Any divergence aborts.
    pub fn observe(&mut self, p: &Path, depth: usize) -> Result<ObservationTree, EvalError> {
        let labels: Vec<Label> = self.properties(p)?.into_iter().collect();
        let mut children = Vec::new();
        if depth > 0 {
            for label in &labels {
                children.push(self.observe(&p.child(*label), depth - 1)?);
            }
        }
        Ok(ObservationTree { path: p.clone(), outcome: Outcome::Properties(labels), children })
    }

    /// Like [`observe`](Self::observe) but a diverging node is recorded in
    /// place and its siblings are still explored.
    pub fn observe_recording(&mut self, p: &Path, depth: usize) -> Result<ObservationTree, EvalError> {
        let labels: Vec<Label> = match self.properties(p) {
            Ok(set) => set.into_iter().collect(),
            Err(EvalError::Divergence(d)) => {
                return Ok(ObservationTree {
                    path: p.clone(),
                    outcome: Outcome::Divergence(d.kind),
                    children: Vec::new(),
                })
            }
            Err(e) => return Err(e),
        };
        let mut children = Vec::new();
        if depth > 0 {
            for label in &labels {
                children.push(self.observe_recording(&p.child(*label), depth - 1)?);
            }
        }
        Ok(ObservationTree { path: p.clone(), outcome: Outcome::Properties(labels), children })
    }

    /// Least `n` up to the depth limit such that `base.result^n` has both
    /// `argument` and `result`.
    pub fn converges_at(&mut self, base: &Path) -> Result<Convergence, EvalError> {
        let (argument, result) = (well_known::argument(), well_known::result());
        let mut at = base.clone();
        for depth in 0..=self.options().max_depth {
            match self.properties(&at) {
                Ok(labels) if labels.contains(&argument) && labels.contains(&result) => {
                    return Ok(Convergence::Converged { depth })
                }
                Ok(_) => at = at.child(result),
                Err(EvalError::Divergence(d)) => {
                    return Ok(Convergence::NotConverged { reason: d.kind.into() })
                }
                Err(e) => return Err(e),
            }
        }
        Ok(Convergence::NotConverged { reason: NonConvergence::DepthExceeded })
    }

    pub fn converges(&mut self) -> Result<Convergence, EvalError> {
        self.converges_at(&Path::root())
    }
}
