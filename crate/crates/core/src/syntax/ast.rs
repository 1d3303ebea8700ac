use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::label::Label;
use super::path::Path;

/// A reference as written in source, before scope resolution.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SurfaceRef {
    /// `this@L.d1...dk`
    Named { target: Label, downs: Vec<Label> },
    /// `^n.d1...dk`
    Indexed { n: usize, downs: Vec<Label> },
    /// `a.d1...dk`, head looked up in the nearest enclosing scope that defines it.
    Lexical { head: Label, rest: Vec<Label> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SurfaceElement {
    Definition(Label, SurfaceRecord),
    Reference(SurfaceRef),
}

/// A record literal: an unordered collection of elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SurfaceRecord {
    pub elements: Vec<SurfaceElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SurfaceProgram {
    pub root: SurfaceRecord,
}

impl SurfaceRecord {
    pub fn new(elements: Vec<SurfaceElement>) -> Self {
        SurfaceRecord { elements }
    }

    pub fn define(&mut self, label: Label, body: SurfaceRecord) {
        self.elements.push(SurfaceElement::Definition(label, body));
    }

    pub fn inherit(&mut self, reference: SurfaceRef) {
        self.elements.push(SurfaceElement::Reference(reference));
    }
}

/// A resolved reference: climb `n` scopes from the enclosing one, then descend.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Reference {
    pub n: usize,
    pub downs: Vec<Label>,
}

impl Reference {
    pub fn new(n: usize, downs: Vec<Label>) -> Self {
        Reference { n, downs }
    }
}

impl fmt::Display for Reference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "^{}", self.n)?;
        for d in &self.downs {
            write!(f, ".{d}")?;
        }
        Ok(())
    }
}

/// A node of the resolved program tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Record {
    pub children: BTreeMap<Label, Record>,
    pub inherits: BTreeSet<Reference>,
}

impl Record {
    pub fn is_empty(&self) -> bool {
        self.children.is_empty() && self.inherits.is_empty()
    }

    /// Deep union: children with the same label merge recursively.
    pub fn merge(&mut self, other: Record) {
        self.inherits.extend(other.inherits);
        for (label, child) in other.children {
            self.children.entry(label).or_default().merge(child);
        }
    }

    pub fn with_child(mut self, label: impl Into<Label>, child: Record) -> Self {
        self.children.entry(label.into()).or_default().merge(child);
        self
    }

    pub fn with_ref(mut self, n: usize, downs: &[&str]) -> Self {
        self.inherits
            .insert(Reference::new(n, downs.iter().map(|d| Label::new(d)).collect()));
        self
    }
}

/// A resolved program: every reference carries its scope index.
///
/// Node identity is the path; sibling order and duplicate definitions in the
/// source are already folded away, so structural equality is set equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CoreProgram {
    pub root: Record,
}

impl CoreProgram {
    pub fn new(root: Record) -> Self {
        CoreProgram { root }
    }

    pub fn node(&self, path: &Path) -> Option<&Record> {
        path.labels()
            .iter()
            .try_fold(&self.root, |node, label| node.children.get(label))
    }

    pub fn defines(&self, path: &Path) -> BTreeSet<Label> {
        self.node(path)
            .map(|n| n.children.keys().copied().collect())
            .unwrap_or_default()
    }

    pub fn inherits(&self, path: &Path) -> BTreeSet<Reference> {
        self.node(path).map(|n| n.inherits.clone()).unwrap_or_default()
    }

    /// Every defined path in depth-first order, root first.
    pub fn paths(&self) -> Vec<Path> {
        fn walk(node: &Record, at: Path, out: &mut Vec<Path>) {
            for (label, child) in &node.children {
                let next = at.child(*label);
                out.push(next.clone());
                walk(child, next, out);
            }
        }
        let mut out = vec![Path::root()];
        walk(&self.root, Path::root(), &mut out);
        out
    }

    pub fn size(&self) -> usize {
        self.paths().len()
    }
}
