//! Reference reduction on nameless terms, independent of the record
//! semantics. Used to judge the translation.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::term::Db;

/// Terms larger than this are abandoned as undecided.
const SIZE_LIMIT: usize = 200_000;

/// Adds `by` to every index at or above `cutoff`.
pub fn shift(t: &Db, by: usize, cutoff: usize) -> Db {
    match t {
        Db::Var(k) if *k >= cutoff => Db::Var(k + by),
        Db::Var(k) => Db::Var(*k),
        Db::Abs(b) => Db::abs(shift(b, by, cutoff + 1)),
        Db::App(f, a) => Db::app(shift(f, by, cutoff), shift(a, by, cutoff)),
    }
}

fn subst(t: &Db, depth: usize, arg: &Db) -> Db {
    match t {
        Db::Var(k) if *k == depth => shift(arg, depth, 0),
        Db::Var(k) if *k > depth => Db::Var(k - 1),
        Db::Var(k) => Db::Var(*k),
        Db::Abs(b) => Db::abs(subst(b, depth + 1, arg)),
        Db::App(f, a) => Db::app(subst(f, depth, arg), subst(a, depth, arg)),
    }
}

/// `(λ. body) arg` contracted: index 0 replaced, the rest lowered.
pub fn beta(body: &Db, arg: &Db) -> Db {
    subst(body, 0, arg)
}

fn spine(t: &Db) -> (&Db, Vec<&Db>) {
    let mut args = Vec::new();
    let mut head = t;
    while let Db::App(f, a) = head {
        args.push(&**a);
        head = f;
    }
    args.reverse();
    (head, args)
}

fn rebuild(head: Db, args: &[&Db]) -> Db {
    args.iter().fold(head, |acc, a| Db::app(acc, (*a).clone()))
}

/// Contracts the redex at the head of the application spine, if any.
pub fn weak_head_step(t: &Db) -> Option<Db> {
    let (head, args) = spine(t);
    match (head, args.split_first()) {
        (Db::Abs(body), Some((first, rest))) => Some(rebuild(beta(body, first), rest)),
        _ => None,
    }
}

/// Contracts the head redex below any leading abstractions, if any.
pub fn head_step(t: &Db) -> Option<Db> {
    match t {
        Db::Abs(b) => head_step(b).map(Db::abs),
        _ => weak_head_step(t),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeadOutcome {
    /// No redex left in head position after `steps` contractions.
    Normal { term: Db, steps: usize },
    /// A term repeated, so reduction never ends.
    Loop { steps: usize },
    /// The step budget or size limit ran out first.
    OutOfFuel { steps: usize },
}

impl HeadOutcome {
    pub fn steps(&self) -> usize {
        match self {
            HeadOutcome::Normal { steps, .. } | HeadOutcome::Loop { steps } | HeadOutcome::OutOfFuel { steps } => {
                *steps
            }
        }
    }

    pub fn is_normal(&self) -> bool {
        matches!(self, HeadOutcome::Normal { .. })
    }

    /// Normal form reached or divergence proven.
    pub fn decided(&self) -> bool {
        !matches!(self, HeadOutcome::OutOfFuel { .. })
    }
}

fn run(t: &Db, fuel: usize, step: fn(&Db) -> Option<Db>) -> HeadOutcome {
    let mut seen = HashSet::new();
    let mut current = t.clone();
    for steps in 0..=fuel {
        let Some(next) = step(&current) else {
            return HeadOutcome::Normal { term: current, steps };
        };
        if steps == fuel || next.size() > SIZE_LIMIT {
            return HeadOutcome::OutOfFuel { steps };
        }
        if !seen.insert(current) {
            return HeadOutcome::Loop { steps };
        }
        current = next;
    }
    unreachable!("loop returns by the last iteration")
}

/// Repeatedly contracts `(λx. e) v M1 ... Mk` to `e[v/x] M1 ... Mk`,
/// stopping at an abstraction or a variable-headed application. This is the
/// lazy notion of evaluation that record convergence tracks.
pub fn weak_head_reduce(t: &Db, fuel: usize) -> HeadOutcome {
    run(t, fuel, weak_head_step)
}

/// Head reduction to a head normal form `λx1...xm. y M1 ... Mk`,
/// reducing under leading abstractions.
pub fn head_reduce(t: &Db, fuel: usize) -> HeadOutcome {
    run(t, fuel, head_step)
}

/// A finite prefix of a Böhm tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Bohm {
    /// No head normal form: reduction was shown to loop.
    Bottom,
    /// No head normal form found within the step budget.
    OutOfFuel,
    /// Beyond the requested depth.
    Unexpanded,
    /// `λ^binders. head children...`, where `head` is a de Bruijn index
    /// under the node's own binders.
    Node { binders: usize, head: usize, children: Vec<Bohm> },
}

/// Expands the Böhm tree of `t` to `depth` levels with `fuel` head steps per node.
pub fn bohm_prefix(t: &Db, depth: usize, fuel: usize) -> Bohm {
    if depth == 0 {
        return Bohm::Unexpanded;
    }
    let term = match head_reduce(t, fuel) {
        HeadOutcome::Normal { term, .. } => term,
        HeadOutcome::Loop { .. } => return Bohm::Bottom,
        HeadOutcome::OutOfFuel { .. } => return Bohm::OutOfFuel,
    };
    let mut binders = 0;
    let mut body = &term;
    while let Db::Abs(b) = body {
        binders += 1;
        body = b;
    }
    let (head, args) = spine(body);
    let Db::Var(head) = head else {
        unreachable!("head normal form has a variable head")
    };
    let children = args.into_iter().map(|a| bohm_prefix(a, depth - 1, fuel)).collect();
    Bohm::Node { binders, head: *head, children }
}

impl Bohm {
    fn write(&self, indent: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pad = "  ".repeat(indent);
        match self {
            Bohm::Bottom => writeln!(f, "{pad}⊥"),
            Bohm::OutOfFuel => writeln!(f, "{pad}⊥ (fuel)"),
            Bohm::Unexpanded => writeln!(f, "{pad}…"),
            Bohm::Node { binders, head, children } => {
                writeln!(f, "{pad}λ^{binders}. {head}")?;
                children.iter().try_for_each(|c| c.write(indent + 1, f))
            }
        }
    }
}

impl fmt::Display for Bohm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(0, f)
    }
}
