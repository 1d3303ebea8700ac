//! Lambda terms in A-normal form as records.
//!
//! | term                       | record                                                |
//! |----------------------------|-------------------------------------------------------|
//! | `λx. M`                    | `{argument = {}, result = T(M)}`                      |
//! | `let x = V1 V2 in M`       | `{x = {T(V1), argument = T(V2)}, result = T(M)}`      |
//! | `V1 V2` in tail position   | `{tailCall = {T(V1), argument = T(V2)}, result = tailCall.result}` |
//! | λ-bound `x`                | `^n.argument`                                         |
//! | let-bound `x`              | `x.result`                                            |
//!
//! When `V1` is an abstraction literal its elements are spliced into the
//! application record, so the application record is itself the function's
//! scope. Scope indices are counted from the actual record nesting: `n` is
//! the number of records between the one enclosing the reference and the
//! binder's record. Let-bound references are emitted already indexed, which
//! is what lexical lookup of `x` yields and stays correct under shadowing.

use super::anf::{Anf, Value};
use crate::syntax::{
    resolve_references, well_known, CoreProgram, Label, SurfaceElement, SurfaceProgram, SurfaceRecord, SurfaceRef,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("free variable `{0}`")]
    FreeVariable(String),
    #[error("variable `{0}` cannot stand for the whole program")]
    BareVariable(String),
    #[error(transparent)]
    Resolution(#[from] crate::syntax::ResolutionError),
}

#[derive(Clone, Copy)]
enum Binder {
    /// Abstraction whose record sits at this depth.
    Lambda(usize),
    /// Let whose record sits at this depth.
    Let(usize),
}

struct Env<'g> {
    scopes: Vec<(String, Binder)>,
    globals: &'g [&'g str],
}

impl Env<'_> {
    /// Reference to `x` from inside the record at depth `depth`.
    fn reference(&self, x: &str, depth: usize) -> Result<SurfaceRef, TranslateError> {
        let Some(enclosing) = depth.checked_sub(1) else {
            return Err(TranslateError::BareVariable(x.to_owned()));
        };
        match self.scopes.iter().rev().find(|(name, _)| name == x) {
            Some((_, Binder::Lambda(at))) => {
                Ok(SurfaceRef::Indexed { n: enclosing - at, downs: vec![well_known::argument()] })
            }
            Some((_, Binder::Let(at))) => Ok(SurfaceRef::Indexed {
                n: enclosing - at,
                downs: vec![Label::new(x), well_known::result()],
            }),
            None if self.globals.contains(&x) => Ok(SurfaceRef::Lexical { head: Label::new(x), rest: vec![] }),
            None => Err(TranslateError::FreeVariable(x.to_owned())),
        }
    }

    fn with<T>(&mut self, name: &str, binder: Binder, f: impl FnOnce(&mut Self) -> T) -> T {
        self.scopes.push((name.to_owned(), binder));
        let out = f(self);
        self.scopes.pop();
        out
    }
}

fn lambda(x: &str, body: &Anf, depth: usize, env: &mut Env) -> Result<SurfaceRecord, TranslateError> {
    let mut rec = SurfaceRecord::default();
    rec.define(well_known::argument(), SurfaceRecord::default());
    let result = env.with(x, Binder::Lambda(depth), |env| computation(body, depth + 1, env))?;
    rec.define(well_known::result(), result);
    Ok(rec)
}

fn value(v: &Value, depth: usize, env: &mut Env) -> Result<SurfaceRecord, TranslateError> {
    match v {
        Value::Var(x) => Ok(SurfaceRecord::new(vec![SurfaceElement::Reference(
            env.reference(x, depth)?,
        )])),
        Value::Lam(x, body) => lambda(x, body, depth, env),
    }
}

fn application(fun: &Value, arg: &Value, depth: usize, env: &mut Env) -> Result<SurfaceRecord, TranslateError> {
    let mut rec = match fun {
        Value::Var(x) => {
            let mut rec = SurfaceRecord::default();
            rec.inherit(env.reference(x, depth)?);
            rec
        }
        Value::Lam(x, body) => lambda(x, body, depth, env)?,
    };
    rec.define(well_known::argument(), value(arg, depth + 1, env)?);
    Ok(rec)
}

fn computation(m: &Anf, depth: usize, env: &mut Env) -> Result<SurfaceRecord, TranslateError> {
    match m {
        Anf::Value(v) => value(v, depth, env),
        Anf::Let { name, fun, arg, body } => {
            let mut rec = SurfaceRecord::default();
            rec.define(Label::new(name), application(fun, arg, depth + 1, env)?);
            let result = env.with(name, Binder::Let(depth), |env| computation(body, depth + 1, env))?;
            rec.define(well_known::result(), result);
            Ok(rec)
        }
        Anf::Tail { fun, arg } => {
            let mut rec = SurfaceRecord::default();
            rec.define(well_known::tail_call(), application(fun, arg, depth + 1, env)?);
            let mut result = SurfaceRecord::default();
            result.inherit(SurfaceRef::Lexical { head: well_known::tail_call(), rest: vec![well_known::result()] });
            rec.define(well_known::result(), result);
            Ok(rec)
        }
    }
}

/// Source-level image of `m`. Free variables listed in `globals` become
/// lexical references to sibling definitions; any other free variable is an
/// error.
pub fn translate_surface(m: &Anf, globals: &[&str]) -> Result<SurfaceRecord, TranslateError> {
    computation(m, 0, &mut Env { scopes: Vec::new(), globals })
}

/// Translates a closed term in A-normal form.
pub fn translate(m: &Anf) -> Result<CoreProgram, TranslateError> {
    let root = translate_surface(m, &[])?;
    Ok(resolve_references(&SurfaceProgram { root })?)
}
