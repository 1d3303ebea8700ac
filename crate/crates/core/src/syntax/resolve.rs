use std::fmt;

use super::ast::{CoreProgram, Record, Reference, SurfaceElement, SurfaceProgram, SurfaceRecord, SurfaceRef};
use super::path::Path;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolutionError {
    #[error("`{reference}` at {at}: no enclosing scope defines `{name}`")]
    Unresolved { reference: String, name: String, at: Path },
    #[error("`{reference}` at {at}: `{name}` is not an enclosing record")]
    UnknownEnclosing { reference: String, name: String, at: Path },
    #[error("`{reference}` at {at}: a record cannot inherit itself")]
    SelfInheritance { reference: String, at: Path },
    #[error("`{reference}` at {at}: scope index exceeds the {available} enclosing scope(s)")]
    IndexOutOfScope { reference: String, at: Path, available: usize },
    #[error("`{reference}`: the root record has no enclosing scope to inherit from")]
    RootReference { reference: String },
}

impl fmt::Display for SurfaceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (head, downs) = match self {
            SurfaceRef::Named { target, downs } => (format!("this@{target}"), downs),
            SurfaceRef::Indexed { n, downs } => (format!("^{n}"), downs),
            SurfaceRef::Lexical { head, rest } => (head.to_string(), rest),
        };
        f.write_str(&head)?;
        for d in downs {
            write!(f, ".{d}")?;
        }
        Ok(())
    }
}

fn skeleton(surface: &SurfaceRecord, into: &mut Record) {
    for element in &surface.elements {
        if let SurfaceElement::Definition(label, body) = element {
            skeleton(body, into.children.entry(*label).or_default());
        }
    }
}

/// Computes the scope index of `reference`, which sits directly inside the
/// record at `at`. Index 0 names the record enclosing `at`.
fn index_of(tree: &CoreProgram, at: &Path, reference: &SurfaceRef) -> Result<Reference, ResolutionError> {
    let text = reference.to_string();
    if at.is_root() {
        return Err(ResolutionError::RootReference { reference: text });
    }
    let depth = at.len();
    match reference {
        SurfaceRef::Indexed { n, downs } => {
            if *n + 1 > depth {
                return Err(ResolutionError::IndexOutOfScope { reference: text, at: at.clone(), available: depth });
            }
            Ok(Reference::new(*n, downs.clone()))
        }
        SurfaceRef::Named { target, downs } => {
            let position = at
                .labels()
                .iter()
                .rposition(|l| l == target)
                .ok_or_else(|| ResolutionError::UnknownEnclosing {
                    reference: text.clone(),
                    name: target.to_string(),
                    at: at.clone(),
                })?;
            let target_len = position + 1;
            if target_len == depth {
                return Err(ResolutionError::SelfInheritance { reference: text, at: at.clone() });
            }
            Ok(Reference::new(depth - target_len - 1, downs.clone()))
        }
        SurfaceRef::Lexical { head, rest } => {
            let scope_len = (0..depth)
                .rev()
                .find(|&len| tree.node(&at.prefix(len)).is_some_and(|n| n.children.contains_key(head)))
                .ok_or_else(|| ResolutionError::Unresolved {
                    reference: text.clone(),
                    name: head.to_string(),
                    at: at.clone(),
                })?;
            let mut downs = Vec::with_capacity(rest.len() + 1);
            downs.push(*head);
            downs.extend_from_slice(rest);
            Ok(Reference::new(depth - scope_len - 1, downs))
        }
    }
}

fn attach(
    surface: &SurfaceRecord,
    at: &Path,
    tree: &CoreProgram,
    out: &mut Record,
) -> Result<(), ResolutionError> {
    for element in &surface.elements {
        match element {
            SurfaceElement::Reference(r) => {
                out.inherits.insert(index_of(tree, at, r)?);
            }
            SurfaceElement::Definition(label, body) => {
                let child = out.children.get_mut(label).expect("skeleton has every definition");
                attach(body, &at.child(*label), tree, child)?;
            }
        }
    }
    Ok(())
}

/// Turns named and lexical references into scope indices and folds duplicate
/// definitions together.
pub fn resolve_references(program: &SurfaceProgram) -> Result<CoreProgram, ResolutionError> {
    let mut shape = Record::default();
    skeleton(&program.root, &mut shape);
    let tree = CoreProgram::new(shape.clone());
    let mut root = shape;
    attach(&program.root, &Path::root(), &tree, &mut root)?;
    Ok(CoreProgram::new(root))
}
