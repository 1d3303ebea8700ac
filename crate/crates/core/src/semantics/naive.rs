//! Direct transcription of the equations with no caching.
//!
//! Every call recomputes its dependencies from scratch. Only the set of calls
//! currently on the stack is kept, to report cycles, plus a fuel counter.
//! It is slow by design and serves as a reference for [`Evaluator`].
//!
//! [`Evaluator`]: super::Evaluator

use std::collections::{BTreeSet, HashSet};

use crate::error::{Divergence, DivergenceKind, EvalError};
use crate::syntax::{CoreProgram, Label, Path, Reference};
use crate::table::deep;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Call {
    Supers(Path),
    Overrides(Path),
    Bases(Path),
}

type Ctx = Option<Path>;

pub struct NaiveEvaluator<'p> {
    program: &'p CoreProgram,
    fuel: u64,
    stack: HashSet<Call>,
}

impl<'p> NaiveEvaluator<'p> {
    pub fn new(program: &'p CoreProgram, fuel: u64) -> Self {
        NaiveEvaluator { program, fuel, stack: HashSet::new() }
    }

    fn enter(&mut self, call: Call, show: impl Fn() -> String) -> Result<(), EvalError> {
        if self.fuel == 0 {
            return Err(Divergence { kind: DivergenceKind::FuelExhausted, witness: show() }.into());
        }
        self.fuel -= 1;
        if !self.stack.insert(call) {
            return Err(Divergence { kind: DivergenceKind::Cycle, witness: show() }.into());
        }
        Ok(())
    }

    fn guarded<T>(
        &mut self,
        call: Call,
        show: impl Fn() -> String,
        body: impl FnOnce(&mut Self) -> Result<T, EvalError>,
    ) -> Result<T, EvalError> {
        self.enter(call.clone(), show)?;
        let out = deep(|| body(self));
        self.stack.remove(&call);
        out
    }

    pub fn properties(&mut self, p: &Path) -> Result<BTreeSet<Label>, EvalError> {
        let pairs = self.supers(p)?;
        Ok(pairs.iter().flat_map(|(_, branch)| self.program.defines(branch)).collect())
    }

    pub fn ancestors(&mut self, p: &Path) -> Result<BTreeSet<Path>, EvalError> {
        Ok(self.supers(p)?.into_iter().map(|(_, branch)| branch).collect())
    }

    pub fn supers(&mut self, p: &Path) -> Result<BTreeSet<(Ctx, Path)>, EvalError> {
        self.guarded(Call::Supers(p.clone()), || format!("supers({p})"), |e| {
            let mut closure = BTreeSet::from([p.clone()]);
            let mut pending = vec![p.clone()];
            while let Some(q) = pending.pop() {
                for b in e.bases(&q)? {
                    if closure.insert(b.clone()) {
                        pending.push(b);
                    }
                }
            }
            let mut pairs = BTreeSet::new();
            for b in closure {
                for branch in e.overrides(&b)? {
                    pairs.insert((b.init(), branch));
                }
            }
            Ok(pairs)
        })
    }

    pub fn overrides(&mut self, p: &Path) -> Result<BTreeSet<Path>, EvalError> {
        let Some(parent) = p.init() else {
            return Ok(BTreeSet::from([Path::root()]));
        };
        self.guarded(Call::Overrides(p.clone()), || format!("overrides({p})"), |e| {
            let label = p.last().expect("non-root");
            let mut out = BTreeSet::from([p.clone()]);
            for (_, branch) in e.supers(&parent)? {
                if e.program.defines(&branch).contains(&label) {
                    out.insert(branch.child(label));
                }
            }
            Ok(out)
        })
    }

    pub fn bases(&mut self, p: &Path) -> Result<BTreeSet<Path>, EvalError> {
        self.guarded(Call::Bases(p.clone()), || format!("bases({p})"), |e| {
            let site = p.init();
            let mut out = BTreeSet::new();
            for branch in e.overrides(p)? {
                for r in e.program.inherits(&branch) {
                    out.extend(e.resolve(site.clone(), &branch, &r)?);
                }
            }
            Ok(out)
        })
    }

    fn resolve(&mut self, site: Ctx, def: &Path, r: &Reference) -> Result<BTreeSet<Path>, EvalError> {
        let underflow = || EvalError::ScopeUnderflow { query: format!("resolve(.., {def}, {r})") };
        let site = site.ok_or_else(underflow)?;
        let scope = def.init().ok_or_else(underflow)?;
        let frontier = self.this(BTreeSet::from([site]), &scope, r.n)?;
        Ok(frontier.iter().map(|c| c.join(&r.downs)).collect())
    }

    pub fn this(&mut self, set: BTreeSet<Path>, def: &Path, n: usize) -> Result<BTreeSet<Path>, EvalError> {
        if n == 0 {
            return Ok(set);
        }
        let mut next = BTreeSet::new();
        for c in &set {
            for (ctx, branch) in self.supers(c)? {
                if &branch == def {
                    next.insert(ctx);
                }
            }
        }
        let underflow = || EvalError::ScopeUnderflow { query: format!("this(.., {def}, {n})") };
        let outer = def.init().ok_or_else(underflow)?;
        let next = next.into_iter().collect::<Option<BTreeSet<Path>>>().ok_or_else(underflow)?;
        self.this(next, &outer, n - 1)
    }
}
