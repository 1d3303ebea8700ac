use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::rc::Rc;

use serde::Serialize;

use crate::config::{ClosureOrder, Options};
use crate::error::EvalError;
use crate::syntax::{CoreProgram, Label, Path, Reference};
use crate::table::{Arena, Budget, Memo, Pid, Tabled, ABOVE_ROOT, ROOT};

/// Where a base sits: a path, or the sentinel above the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Context {
    AboveRoot,
    Path(Path),
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Context::AboveRoot => f.write_str("<above-root>"),
            Context::Path(p) => write!(f, "{p}"),
        }
    }
}

/// One element of `supers(p)`: the enclosing context of an inherited base,
/// paired with one of the branches that contributes to it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SuperPair {
    pub context: Context,
    pub branch: Path,
}

/// A `this` walk that did not track exactly one path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SinglePathViolation {
    pub frontier: Vec<Path>,
    pub definition: Path,
    pub n: usize,
}

/// Memoized, demand-driven evaluator for one program.
pub struct Evaluator<'p> {
    program: &'p CoreProgram,
    pub(crate) arena: Arena,
    budget: Budget,
    options: Options,
    properties: Memo<Pid, Rc<[Label]>>,
    supers: Memo<Pid, Rc<[(Pid, Pid)]>>,
    overrides: Memo<Pid, Rc<[Pid]>>,
    bases: Memo<Pid, Rc<[Pid]>>,
    resolve: Memo<(Pid, Pid, Reference), Rc<[Pid]>>,
    this: Memo<(Vec<Pid>, Pid, usize), Rc<[Pid]>>,
    violations: Vec<SinglePathViolation>,
}

impl Tabled for Evaluator<'_> {
    fn budget(&mut self) -> &mut Budget {
        &mut self.budget
    }
}

fn sorted(set: impl IntoIterator<Item = Pid>) -> Rc<[Pid]> {
    let mut v: Vec<Pid> = set.into_iter().collect::<HashSet<_>>().into_iter().collect();
    v.sort_unstable();
    v.into()
}

impl<'p> Evaluator<'p> {
    pub fn new(program: &'p CoreProgram, options: Options) -> Self {
        Evaluator {
            program,
            arena: Arena::new(&program.root),
            budget: Budget::new(options.fuel),
            options,
            properties: Memo::default(),
            supers: Memo::default(),
            overrides: Memo::default(),
            bases: Memo::default(),
            resolve: Memo::default(),
            this: Memo::default(),
            violations: Vec::new(),
        }
    }

    pub fn program(&self) -> &'p CoreProgram {
        self.program
    }

    pub fn options(&self) -> &Options {
        &self.options
    }

    pub fn fuel_used(&self) -> u64 {
        self.budget.used()
    }

    pub fn violations(&self) -> &[SinglePathViolation] {
        &self.violations
    }

    /// Number of cached query results.
    pub fn memo_size(&self) -> usize {
        self.properties.len()
            + self.supers.len()
            + self.overrides.len()
            + self.bases.len()
            + self.resolve.len()
            + self.this.len()
    }

    fn paths(&self, ids: &[Pid]) -> BTreeSet<Path> {
        ids.iter().map(|&p| self.arena.path(p)).collect()
    }

    fn context(&self, p: Pid) -> Context {
        if p == ABOVE_ROOT {
            Context::AboveRoot
        } else {
            Context::Path(self.arena.path(p))
        }
    }

    // Public surface: paths in, sets of paths out.

    pub fn properties(&mut self, p: &Path) -> Result<BTreeSet<Label>, EvalError> {
        let id = self.arena.intern(p);
        Ok(self.properties_id(id)?.iter().copied().collect())
    }

    pub fn supers(&mut self, p: &Path) -> Result<BTreeSet<SuperPair>, EvalError> {
        let id = self.arena.intern(p);
        let pairs = self.supers_id(id)?;
        Ok(pairs
            .iter()
            .map(|&(ctx, branch)| SuperPair { context: self.context(ctx), branch: self.arena.path(branch) })
            .collect())
    }

    /// Branch components of `supers(p)`: every path whose definitions flow into `p`.
    pub fn ancestors(&mut self, p: &Path) -> Result<BTreeSet<Path>, EvalError> {
        let id = self.arena.intern(p);
        let pairs = self.supers_id(id)?;
        Ok(pairs.iter().map(|&(_, branch)| self.arena.path(branch)).collect())
    }

    pub fn overrides(&mut self, p: &Path) -> Result<BTreeSet<Path>, EvalError> {
        let id = self.arena.intern(p);
        let out = self.overrides_id(id)?;
        Ok(self.paths(&out))
    }

    pub fn bases(&mut self, p: &Path) -> Result<BTreeSet<Path>, EvalError> {
        let id = self.arena.intern(p);
        let out = self.bases_id(id)?;
        Ok(self.paths(&out))
    }

    pub fn resolve(
        &mut self,
        site: &Path,
        definition: &Path,
        reference: &Reference,
    ) -> Result<BTreeSet<Path>, EvalError> {
        let (site, def) = (self.arena.intern(site), self.arena.intern(definition));
        let out = self.resolve_id(site, def, reference)?;
        Ok(self.paths(&out))
    }

    /// Walks `n` scopes outward from the sites in `frontier`, where
    /// `definition` is the syntactic scope being climbed out of.
    pub fn this(&mut self, frontier: &[Path], definition: &Path, n: usize) -> Result<BTreeSet<Path>, EvalError> {
        let set: Vec<Pid> = frontier.iter().map(|p| self.arena.intern(p)).collect();
        let def = self.arena.intern(definition);
        let out = self.this_id(sorted(set).to_vec(), def, n)?;
        Ok(self.paths(&out))
    }

    // Equations over interned paths.

    pub(crate) fn properties_id(&mut self, p: Pid) -> Result<Rc<[Label]>, EvalError> {
        self.memo(
            |e| &mut e.properties,
            p,
            |e| format!("properties({})", e.arena.show(p)),
            |e| {
                let pairs = e.supers_id(p)?;
                let labels: BTreeSet<Label> =
                    pairs.iter().flat_map(|&(_, branch)| e.arena.labels(branch).iter().copied()).collect();
                Ok(labels.into_iter().collect())
            },
        )
    }

    fn closure(&mut self, p: Pid) -> Result<Vec<Pid>, EvalError> {
        let mut seen = HashSet::from([p]);
        let mut order = vec![p];
        let mut work = VecDeque::from([p]);
        let breadth = self.options.closure_order == ClosureOrder::BreadthFirst;
        while let Some(q) = if breadth { work.pop_front() } else { work.pop_back() } {
            for &b in self.bases_id(q)?.iter() {
                if seen.insert(b) {
                    order.push(b);
                    work.push_back(b);
                }
            }
        }
        Ok(order)
    }

    pub(crate) fn supers_id(&mut self, p: Pid) -> Result<Rc<[(Pid, Pid)]>, EvalError> {
        self.memo(
            |e| &mut e.supers,
            p,
            |e| format!("supers({})", e.arena.show(p)),
            |e| {
                let mut pairs = BTreeSet::new();
                for b in e.closure(p)? {
                    let ctx = e.arena.init(b);
                    for &branch in e.overrides_id(b)?.iter() {
                        pairs.insert((ctx, branch));
                    }
                }
                Ok(pairs.into_iter().collect())
            },
        )
    }

    pub(crate) fn overrides_id(&mut self, p: Pid) -> Result<Rc<[Pid]>, EvalError> {
        if p == ROOT {
            return Ok(Rc::from([ROOT]));
        }
        self.memo(
            |e| &mut e.overrides,
            p,
            |e| format!("overrides({})", e.arena.show(p)),
            |e| {
                let parent = e.arena.init(p);
                let label = e.arena.last(p).expect("non-root path has a last label");
                let mut out = vec![p];
                for &(_, branch) in e.supers_id(parent)?.iter() {
                    if e.arena.defines(branch, label) {
                        out.push(e.arena.child(branch, label));
                    }
                }
                Ok(sorted(out))
            },
        )
    }

    pub(crate) fn bases_id(&mut self, p: Pid) -> Result<Rc<[Pid]>, EvalError> {
        self.memo(
            |e| &mut e.bases,
            p,
            |e| format!("bases({})", e.arena.show(p)),
            |e| {
                let site = e.arena.init(p);
                let mut out = Vec::new();
                for &branch in e.overrides_id(p)?.iter() {
                    let refs = e.arena.refs(branch).to_vec();
                    for r in refs {
                        out.extend(e.resolve_id(site, branch, &r)?.iter().copied());
                    }
                }
                Ok(sorted(out))
            },
        )
    }

    fn resolve_id(&mut self, site: Pid, def: Pid, r: &Reference) -> Result<Rc<[Pid]>, EvalError> {
        self.memo(
            |e| &mut e.resolve,
            (site, def, r.clone()),
            |e| format!("resolve({}, {}, {r})", e.arena.show(site), e.arena.show(def)),
            |e| {
                let scope = e.arena.init(def);
                if site == ABOVE_ROOT || scope == ABOVE_ROOT {
                    return Err(EvalError::ScopeUnderflow {
                        query: format!("resolve({}, {}, {r})", e.arena.show(site), e.arena.show(def)),
                    });
                }
                let frontier = e.this_id(vec![site], scope, r.n)?;
                let out: Vec<Pid> = frontier.iter().map(|&c| e.arena.join(c, &r.downs)).collect();
                Ok(sorted(out))
            },
        )
    }

    fn this_id(&mut self, set: Vec<Pid>, def: Pid, n: usize) -> Result<Rc<[Pid]>, EvalError> {
        self.memo(
            |e| &mut e.this,
            (set.clone(), def, n),
            |e| {
                let shown: Vec<String> = set.iter().map(|&p| e.arena.show(p)).collect();
                format!("this({{{}}}, {}, {n})", shown.join(", "), e.arena.show(def))
            },
            |e| {
                if e.options.assert_single_path && set.len() != 1 {
                    let violation = SinglePathViolation {
                        frontier: set.iter().map(|&p| e.arena.path(p)).collect(),
                        definition: e.arena.path(def),
                        n,
                    };
                    e.violations.push(violation);
                }
                if n == 0 {
                    return Ok(set.clone().into());
                }
                let outer = e.arena.init(def);
                let mut next = Vec::new();
                for &c in &set {
                    for &(ctx, branch) in e.supers_id(c)?.iter() {
                        if branch == def {
                            next.push(ctx);
                        }
                    }
                }
                if outer == ABOVE_ROOT || next.contains(&ABOVE_ROOT) {
                    return Err(EvalError::ScopeUnderflow {
                        query: format!("this(.., {}, {n})", e.arena.show(def)),
                    });
                }
                e.this_id(sorted(next).to_vec(), outer, n - 1)
            },
        )
    }
}
