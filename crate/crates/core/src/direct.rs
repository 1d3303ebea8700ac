//! Direct semantics for A-normal-form terms.
//!
//! Terms are laid out as a tree of nodes with `children` and `refs`, and
//! evaluated by `labels`, `grafts`, `callee` and a single-valued `scope`.
//! Where the record evaluator tracks a set of scope paths, `scope` demands
//! exactly one caller at every step and reports [`EvalError::AmbiguousCaller`]
//! otherwise.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::rc::Rc;

use crate::config::Options;
use crate::error::EvalError;
use crate::lambda::{Anf, Value};
use crate::semantics::{Convergence, NonConvergence};
use crate::syntax::{well_known, Label, Path, Record, Reference};
use crate::table::{Arena, Budget, Memo, Pid, Tabled, ABOVE_ROOT, ROOT};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DirectNode {
    pub children: BTreeSet<Label>,
    pub refs: BTreeSet<Reference>,
}

/// Node table keyed by path. Every node's ancestors are present.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DirectProgram {
    pub nodes: BTreeMap<Path, DirectNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("free variable `{0}`")]
pub struct ExtractError(pub String);

enum Bound {
    Lambda(usize),
    Let(usize),
}

struct Extractor {
    nodes: BTreeMap<Path, DirectNode>,
    scopes: Vec<(String, Bound)>,
}

impl Extractor {
    fn node(&mut self, p: &Path) -> &mut DirectNode {
        self.nodes.entry(p.clone()).or_default()
    }

    fn add_child(&mut self, p: &Path, label: Label) -> Path {
        self.node(p).children.insert(label);
        let child = p.child(label);
        self.node(&child);
        child
    }

    fn var(&mut self, at: &Path, x: &str) -> Result<(), ExtractError> {
        let enclosing = at.len().checked_sub(1).ok_or_else(|| ExtractError(x.to_owned()))?;
        let r = match self.scopes.iter().rev().find(|(name, _)| name == x) {
            Some((_, Bound::Lambda(depth))) => Reference::new(enclosing - depth, vec![well_known::argument()]),
            Some((_, Bound::Let(depth))) => {
                Reference::new(enclosing - depth, vec![Label::new(x), well_known::result()])
            }
            None => return Err(ExtractError(x.to_owned())),
        };
        self.node(at).refs.insert(r);
        Ok(())
    }

    fn abstraction(&mut self, p: &Path, x: &str, body: &Anf) -> Result<(), ExtractError> {
        self.add_child(p, well_known::argument());
        let result = self.add_child(p, well_known::result());
        self.scopes.push((x.to_owned(), Bound::Lambda(p.len())));
        let out = self.computation(&result, body);
        self.scopes.pop();
        out
    }

    fn value(&mut self, p: &Path, v: &Value) -> Result<(), ExtractError> {
        match v {
            Value::Var(x) => self.var(p, x),
            Value::Lam(x, body) => self.abstraction(p, x, body),
        }
    }

    /// An application node. An abstraction in function position is inlined:
    /// the node itself becomes the function's scope.
    fn application(&mut self, p: &Path, fun: &Value, arg: &Value) -> Result<(), ExtractError> {
        self.node(p);
        self.value(p, fun)?;
        let argument = self.add_child(p, well_known::argument());
        self.value(&argument, arg)
    }

    fn computation(&mut self, p: &Path, m: &Anf) -> Result<(), ExtractError> {
        match m {
            Anf::Value(v) => self.value(p, v),
            Anf::Let { name, fun, arg, body } => {
                let bound = self.add_child(p, Label::new(name));
                self.application(&bound, fun, arg)?;
                let result = self.add_child(p, well_known::result());
                self.scopes.push((name.clone(), Bound::Let(p.len())));
                let out = self.computation(&result, body);
                self.scopes.pop();
                out
            }
            Anf::Tail { fun, arg } => {
                let call = self.add_child(p, well_known::tail_call());
                self.application(&call, fun, arg)?;
                let result = self.add_child(p, well_known::result());
                let r = Reference::new(0, vec![well_known::tail_call(), well_known::result()]);
                self.node(&result).refs.insert(r);
                Ok(())
            }
        }
    }
}

/// Lays out a closed ANF term as a node table.
pub fn extract(m: &Anf) -> Result<DirectProgram, ExtractError> {
    let mut ex = Extractor { nodes: BTreeMap::new(), scopes: Vec::new() };
    ex.node(&Path::root());
    ex.computation(&Path::root(), m)?;
    Ok(DirectProgram { nodes: ex.nodes })
}

impl DirectProgram {
    pub fn node(&self, p: &Path) -> Option<&DirectNode> {
        self.nodes.get(p)
    }

    fn record_at(&self, p: &Path) -> Record {
        let node = self.nodes.get(p).cloned().unwrap_or_default();
        Record {
            children: node.children.iter().map(|l| (*l, self.record_at(&p.child(*l)))).collect(),
            inherits: node.refs,
        }
    }

    pub(crate) fn to_record(&self) -> Record {
        self.record_at(&Path::root())
    }
}

/// How `grafts(p)` finds the nodes grafted onto `p` through its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraftRule {
    /// Children named `last(p)` of every graft of every transitive callee
    /// of `init(p)`. Agrees with the record semantics.
    #[default]
    Transitive,
    /// Children named `last(p)` of the transitive callees of `init(p)`
    /// only. Misses nodes grafted two levels up, e.g. `result.result`
    /// where `result`'s graft is itself reached as a graft.
    CalleesOnly,
}

/// Demand-driven evaluator for a [`DirectProgram`].
pub struct DirectEvaluator {
    arena: Arena,
    rule: GraftRule,
    budget: Budget,
    options: Options,
    labels: Memo<Pid, Rc<[Label]>>,
    grafts: Memo<Pid, Rc<[Pid]>>,
    callee: Memo<Pid, Rc<[Pid]>>,
    callee_star: Memo<Pid, Rc<[Pid]>>,
    callee_ctx: Memo<Pid, Rc<[(Pid, Pid)]>>,
    scope: Memo<(Pid, Pid, usize), Pid>,
}

impl Tabled for DirectEvaluator {
    fn budget(&mut self) -> &mut Budget {
        &mut self.budget
    }
}

fn sorted(items: impl IntoIterator<Item = Pid>) -> Rc<[Pid]> {
    let mut v: Vec<Pid> = items.into_iter().collect::<HashSet<_>>().into_iter().collect();
    v.sort_unstable();
    v.into()
}

impl DirectEvaluator {
    pub fn new(program: &DirectProgram, options: Options) -> Self {
        DirectEvaluator {
            arena: Arena::new(&program.to_record()),
            budget: Budget::new(options.fuel),
            options,
            rule: GraftRule::default(),
            labels: Memo::default(),
            grafts: Memo::default(),
            callee: Memo::default(),
            callee_star: Memo::default(),
            callee_ctx: Memo::default(),
            scope: Memo::default(),
        }
    }

    pub fn with_graft_rule(mut self, rule: GraftRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn labels(&mut self, p: &Path) -> Result<BTreeSet<Label>, EvalError> {
        let id = self.arena.intern(p);
        Ok(self.labels_id(id)?.iter().copied().collect())
    }

    pub fn grafts(&mut self, p: &Path) -> Result<BTreeSet<Path>, EvalError> {
        let id = self.arena.intern(p);
        let out = self.grafts_id(id)?;
        Ok(out.iter().map(|&g| self.arena.path(g)).collect())
    }

    pub fn callee(&mut self, p: &Path) -> Result<BTreeSet<Path>, EvalError> {
        let id = self.arena.intern(p);
        let out = self.callee_id(id)?;
        Ok(out.iter().map(|&g| self.arena.path(g)).collect())
    }

    pub fn scope(&mut self, site: &Path, definition: &Path, n: usize) -> Result<Path, EvalError> {
        let (site, def) = (self.arena.intern(site), self.arena.intern(definition));
        let out = self.scope_id(site, def, n)?;
        Ok(self.arena.path(out))
    }

    /// Least depth at which `result^n` carries both `argument` and `result`.
    pub fn converges(&mut self) -> Result<Convergence, EvalError> {
        let (argument, result) = (well_known::argument(), well_known::result());
        let mut at = ROOT;
        for depth in 0..=self.options.max_depth {
            match self.labels_id(at) {
                Ok(l) if l.contains(&argument) && l.contains(&result) => return Ok(Convergence::Converged { depth }),
                Ok(_) => at = self.arena.child(at, result),
                Err(EvalError::Divergence(d)) => return Ok(Convergence::NotConverged { reason: d.kind.into() }),
                Err(e) => return Err(e),
            }
        }
        Ok(Convergence::NotConverged { reason: NonConvergence::DepthExceeded })
    }

    fn labels_id(&mut self, p: Pid) -> Result<Rc<[Label]>, EvalError> {
        self.memo(
            |e| &mut e.labels,
            p,
            |e| format!("labels({})", e.arena.show(p)),
            |e| {
                let mut out = BTreeSet::new();
                for &(_, g) in e.callee_ctx_id(p)?.iter() {
                    out.extend(e.arena.labels(g).iter().copied());
                }
                Ok(out.into_iter().collect())
            },
        )
    }

    fn grafts_id(&mut self, p: Pid) -> Result<Rc<[Pid]>, EvalError> {
        if p == ROOT {
            return Ok(Rc::from([ROOT]));
        }
        self.memo(
            |e| &mut e.grafts,
            p,
            |e| format!("grafts({})", e.arena.show(p)),
            |e| {
                let label = e.arena.last(p).expect("non-root");
                let parent = e.arena.init(p);
                let hosts: Vec<Pid> = match e.rule {
                    GraftRule::Transitive => e.callee_ctx_id(parent)?.iter().map(|&(_, g)| g).collect(),
                    GraftRule::CalleesOnly => e.callee_star_id(parent)?.to_vec(),
                };
                let mut out = vec![p];
                for h in hosts {
                    if e.arena.defines(h, label) {
                        out.push(e.arena.child(h, label));
                    }
                }
                Ok(sorted(out))
            },
        )
    }

    fn callee_id(&mut self, p: Pid) -> Result<Rc<[Pid]>, EvalError> {
        self.memo(
            |e| &mut e.callee,
            p,
            |e| format!("callee({})", e.arena.show(p)),
            |e| {
                let site = e.arena.init(p);
                let mut out = Vec::new();
                for &g in e.grafts_id(p)?.iter() {
                    for r in e.arena.refs(g).to_vec() {
                        let def = e.arena.init(g);
                        if site == ABOVE_ROOT || def == ABOVE_ROOT {
                            return Err(EvalError::ScopeUnderflow { query: format!("callee({})", e.arena.show(p)) });
                        }
                        let base = e.scope_id(site, def, r.n)?;
                        out.push(e.arena.join(base, &r.downs));
                    }
                }
                Ok(sorted(out))
            },
        )
    }

    fn callee_star_id(&mut self, p: Pid) -> Result<Rc<[Pid]>, EvalError> {
        self.memo(
            |e| &mut e.callee_star,
            p,
            |e| format!("callee*({})", e.arena.show(p)),
            |e| {
                let mut seen = vec![p];
                let mut i = 0;
                while i < seen.len() {
                    for &c in e.callee_id(seen[i])?.iter() {
                        if !seen.contains(&c) {
                            seen.push(c);
                        }
                    }
                    i += 1;
                }
                Ok(sorted(seen))
            },
        )
    }

    fn callee_ctx_id(&mut self, p: Pid) -> Result<Rc<[(Pid, Pid)]>, EvalError> {
        self.memo(
            |e| &mut e.callee_ctx,
            p,
            |e| format!("callee_ctx({})", e.arena.show(p)),
            |e| {
                let mut out = BTreeSet::new();
                for &s in e.callee_star_id(p)?.iter() {
                    let ctx = e.arena.init(s);
                    for &g in e.grafts_id(s)?.iter() {
                        out.insert((ctx, g));
                    }
                }
                Ok(out.into_iter().collect())
            },
        )
    }

    fn scope_id(&mut self, site: Pid, def: Pid, n: usize) -> Result<Pid, EvalError> {
        if n == 0 {
            return Ok(site);
        }
        self.memo(
            |e| &mut e.scope,
            (site, def, n),
            |e| format!("scope({}, {}, {n})", e.arena.show(site), e.arena.show(def)),
            |e| {
                let callers: Vec<Pid> =
                    e.callee_ctx_id(site)?.iter().filter(|&&(_, g)| g == def).map(|&(c, _)| c).collect();
                let outer = e.arena.init(def);
                match callers.as_slice() {
                    [caller] if *caller != ABOVE_ROOT && outer != ABOVE_ROOT => e.scope_id(*caller, outer, n - 1),
                    [_] => Err(EvalError::ScopeUnderflow {
                        query: format!("scope({}, {}, {n})", e.arena.show(site), e.arena.show(def)),
                    }),
                    _ => Err(EvalError::AmbiguousCaller {
                        query: format!("scope({}, {}, {n})", e.arena.show(site), e.arena.show(def)),
                        candidates: callers.iter().map(|&c| e.arena.show(c)).collect(),
                    }),
                }
            },
        )
    }
}

/// Convergence of `m` under the direct semantics.
pub fn converges_direct(m: &Anf, options: Options) -> Result<Convergence, DirectError> {
    let program = extract(m)?;
    Ok(DirectEvaluator::new(&program, options).converges()?)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DirectError {
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
