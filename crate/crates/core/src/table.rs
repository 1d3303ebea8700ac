//! Plumbing shared by the two demand-driven evaluators: interned paths, a
//! flattened view of the program tree, fuel, and memo tables.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Divergence, DivergenceKind, EvalError};
use crate::syntax::{Label, Path, Record, Reference};

pub(crate) type Pid = u32;
pub(crate) const ROOT: Pid = 0;
/// Context of the root's own super pair.
pub(crate) const ABOVE_ROOT: Pid = u32::MAX;

const RED_ZONE: usize = 128 * 1024;
const STACK_CHUNK: usize = 8 * 1024 * 1024;

/// Runs `f` on a fresh stack segment when the current one is nearly full.
pub(crate) fn deep<R>(f: impl FnOnce() -> R) -> R {
    stacker::maybe_grow(RED_ZONE, STACK_CHUNK, f)
}

pub(crate) struct FlatNode {
    pub children: HashMap<Label, u32>,
    /// Defined labels, sorted.
    pub labels: Vec<Label>,
    pub refs: Vec<Reference>,
}

/// The program tree laid out in an array for constant-time child lookup.
pub(crate) struct FlatTree {
    pub nodes: Vec<FlatNode>,
}

impl FlatTree {
    pub fn new(root: &Record) -> Self {
        fn push(record: &Record, nodes: &mut Vec<FlatNode>) -> u32 {
            let id = nodes.len() as u32;
            nodes.push(FlatNode {
                children: HashMap::new(),
                labels: record.children.keys().copied().collect(),
                refs: record.inherits.iter().cloned().collect(),
            });
            for (label, child) in &record.children {
                let child_id = push(child, nodes);
                nodes[id as usize].children.insert(*label, child_id);
            }
            id
        }
        let mut nodes = Vec::new();
        push(root, &mut nodes);
        FlatTree { nodes }
    }
}

struct Entry {
    parent: Pid,
    label: Option<Label>,
    depth: u32,
    node: Option<u32>,
}

/// Interns paths so that identity is a single integer comparison.
pub(crate) struct Arena {
    tree: FlatTree,
    entries: Vec<Entry>,
    index: HashMap<(Pid, Label), Pid>,
}

static NO_LABELS: [Label; 0] = [];
static NO_REFS: [Reference; 0] = [];

impl Arena {
    pub fn new(root: &Record) -> Self {
        Arena {
            tree: FlatTree::new(root),
            entries: vec![Entry { parent: ABOVE_ROOT, label: None, depth: 0, node: Some(0) }],
            index: HashMap::new(),
        }
    }

    pub fn child(&mut self, parent: Pid, label: Label) -> Pid {
        if let Some(&id) = self.index.get(&(parent, label)) {
            return id;
        }
        let up = &self.entries[parent as usize];
        let node = up.node.and_then(|n| self.tree.nodes[n as usize].children.get(&label).copied());
        let id = self.entries.len() as Pid;
        self.entries.push(Entry { parent, label: Some(label), depth: up.depth + 1, node });
        self.index.insert((parent, label), id);
        id
    }

    pub fn join(&mut self, mut at: Pid, downs: &[Label]) -> Pid {
        for label in downs {
            at = self.child(at, *label);
        }
        at
    }

    pub fn intern(&mut self, path: &Path) -> Pid {
        self.join(ROOT, path.labels())
    }

    /// Parent path, or [`ABOVE_ROOT`] for the root.
    pub fn init(&self, p: Pid) -> Pid {
        self.entries[p as usize].parent
    }

    pub fn last(&self, p: Pid) -> Option<Label> {
        self.entries[p as usize].label
    }

    pub fn depth(&self, p: Pid) -> u32 {
        self.entries[p as usize].depth
    }

    pub fn labels(&self, p: Pid) -> &[Label] {
        match self.entries[p as usize].node {
            Some(n) => &self.tree.nodes[n as usize].labels,
            None => &NO_LABELS,
        }
    }

    pub fn defines(&self, p: Pid, label: Label) -> bool {
        self.entries[p as usize]
            .node
            .is_some_and(|n| self.tree.nodes[n as usize].children.contains_key(&label))
    }

    pub fn refs(&self, p: Pid) -> &[Reference] {
        match self.entries[p as usize].node {
            Some(n) => &self.tree.nodes[n as usize].refs,
            None => &NO_REFS,
        }
    }

    pub fn path(&self, mut p: Pid) -> Path {
        let mut labels = Vec::with_capacity(self.depth(p) as usize);
        while let Some(label) = self.last(p) {
            labels.push(label);
            p = self.init(p);
        }
        labels.reverse();
        Path::from_labels(labels)
    }

    pub fn show(&self, p: Pid) -> String {
        if p == ABOVE_ROOT {
            "<above-root>".to_owned()
        } else {
            self.path(p).to_string()
        }
    }
}

/// Counts equation applications.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Budget {
    pub remaining: u64,
    pub initial: u64,
}

impl Budget {
    pub fn new(fuel: u64) -> Self {
        Budget { remaining: fuel, initial: fuel }
    }

    pub fn used(&self) -> u64 {
        self.initial - self.remaining
    }
}

pub(crate) enum Slot<V> {
    Running,
    Done(V),
}

pub(crate) struct Memo<K, V>(HashMap<K, Slot<V>>);

impl<K, V> Default for Memo<K, V> {
    fn default() -> Self {
        Memo(HashMap::new())
    }
}

impl<K, V> Memo<K, V> {
    pub fn len(&self) -> usize {
        self.0.len()
    }
}

pub(crate) trait Tabled: Sized {
    fn budget(&mut self) -> &mut Budget;

    /// Looks `key` up, computing and caching it on a miss. A key that is
    /// already running is a cycle; an empty budget is fuel exhaustion.
    /// Failed computations leave no trace, so later queries start clean.
    fn memo<K, V>(
        &mut self,
        table: fn(&mut Self) -> &mut Memo<K, V>,
        key: K,
        describe: impl FnOnce(&Self) -> String,
        compute: impl FnOnce(&mut Self) -> Result<V, EvalError>,
    ) -> Result<V, EvalError>
    where
        K: Hash + Eq + Clone,
        V: Clone,
    {
        match table(self).0.get(&key) {
            Some(Slot::Done(v)) => return Ok(v.clone()),
            Some(Slot::Running) => {
                let witness = describe(self);
                return Err(Divergence { kind: DivergenceKind::Cycle, witness }.into());
            }
            None => {}
        }
        let budget = self.budget();
        if budget.remaining == 0 {
            let witness = describe(self);
            return Err(Divergence { kind: DivergenceKind::FuelExhausted, witness }.into());
        }
        budget.remaining -= 1;
        table(self).0.insert(key.clone(), Slot::Running);
        let out = deep(|| compute(self));
        match &out {
            Ok(v) => {
                table(self).0.insert(key, Slot::Done(v.clone()));
            }
            Err(_) => {
                table(self).0.remove(&key);
            }
        }
        out
    }
}
