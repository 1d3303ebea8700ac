use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::term::Term;

/// A value: a variable or an abstraction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Var(String),
    Lam(String, Box<Anf>),
}

/// A term in A-normal form: every application has value operands, and
/// every intermediate application is named by a `let`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Anf {
    Value(Value),
    Let { name: String, fun: Value, arg: Value, body: Box<Anf> },
    Tail { fun: Value, arg: Value },
}

/// Labels the translation reserves for its own records.
pub const RESERVED: [&str; 3] = ["argument", "result", "tailCall"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnfError {
    #[error("let-bound name `{0}` collides with a label the translation reserves")]
    SyntheticNameCollision(String),
}

struct Fresh {
    used: BTreeSet<String>,
    next: usize,
}

impl Fresh {
    fn temp(&mut self) -> String {
        loop {
            let name = format!("_a{}", self.next);
            self.next += 1;
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }

    fn rename(&mut self, base: &str) -> String {
        (1..)
            .map(|k| format!("{base}_{k}"))
            .find(|n| self.used.insert(n.clone()))
            .expect("unbounded supply")
    }
}

fn bind(x: &str, env: &mut HashMap<String, Vec<String>>, seen: &mut BTreeSet<String>, fresh: &mut Fresh) -> String {
    let name = if seen.insert(x.to_owned()) { x.to_owned() } else { fresh.rename(x) };
    seen.insert(name.clone());
    env.entry(x.to_owned()).or_default().push(name.clone());
    name
}

/// Gives every binder a distinct name so that hoisting a `let` out of an
/// application can never capture a variable.
fn distinct_binders(t: &Term, env: &mut HashMap<String, Vec<String>>, seen: &mut BTreeSet<String>, fresh: &mut Fresh) -> Term {
    match t {
        Term::Var(x) => Term::Var(env.get(x).and_then(|s| s.last()).cloned().unwrap_or_else(|| x.clone())),
        Term::Abs(x, body) => {
            let name = bind(x, env, seen, fresh);
            let body = distinct_binders(body, env, seen, fresh);
            env.get_mut(x).expect("bound").pop();
            Term::Abs(name, Box::new(body))
        }
        Term::App(f, a) => Term::App(
            Box::new(distinct_binders(f, env, seen, fresh)),
            Box::new(distinct_binders(a, env, seen, fresh)),
        ),
        Term::Let { name, fun, arg, body } => {
            let fun = distinct_binders(fun, env, seen, fresh);
            let arg = distinct_binders(arg, env, seen, fresh);
            let renamed = bind(name, env, seen, fresh);
            let body = distinct_binders(body, env, seen, fresh);
            env.get_mut(name).expect("bound").pop();
            Term::Let { name: renamed, fun: Box::new(fun), arg: Box::new(arg), body: Box::new(body) }
        }
    }
}

type Bindings = Vec<(String, Value, Value)>;

fn wrap(binds: Bindings, tail: Anf) -> Anf {
    binds
        .into_iter()
        .rev()
        .fold(tail, |body, (name, fun, arg)| Anf::Let { name, fun, arg, body: Box::new(body) })
}

fn computation(t: &Term, fresh: &mut Fresh) -> Anf {
    let mut binds = Vec::new();
    let tail = match t {
        Term::Var(x) => Anf::Value(Value::Var(x.clone())),
        Term::Abs(x, body) => Anf::Value(Value::Lam(x.clone(), Box::new(computation(body, fresh)))),
        Term::App(f, a) => {
            let (fun, arg) = operands(f, a, &mut binds, fresh);
            Anf::Tail { fun, arg }
        }
        Term::Let { name, fun, arg, body } => {
            let (fun, arg) = operands(fun, arg, &mut binds, fresh);
            binds.push((name.clone(), fun, arg));
            return wrap(binds, computation(body, fresh));
        }
    };
    wrap(binds, tail)
}

/// Argument first, then function, so that the let-bindings read in the
/// order the argument's work is named before the callee's.
fn operands(f: &Term, a: &Term, binds: &mut Bindings, fresh: &mut Fresh) -> (Value, Value) {
    let arg = atom(a, binds, fresh);
    let fun = atom(f, binds, fresh);
    (fun, arg)
}

fn atom(t: &Term, binds: &mut Bindings, fresh: &mut Fresh) -> Value {
    match t {
        Term::Var(x) => Value::Var(x.clone()),
        Term::Abs(x, body) => Value::Lam(x.clone(), Box::new(computation(body, fresh))),
        Term::App(f, a) => {
            let (fun, arg) = operands(f, a, binds, fresh);
            let name = fresh.temp();
            binds.push((name.clone(), fun, arg));
            Value::Var(name)
        }
        Term::Let { name, fun, arg, body } => {
            let (fun, arg) = operands(fun, arg, binds, fresh);
            binds.push((name.clone(), fun, arg));
            atom(body, binds, fresh)
        }
    }
}

fn check_let_names(t: &Term) -> Result<(), AnfError> {
    match t {
        Term::Var(_) => Ok(()),
        Term::Abs(_, b) => check_let_names(b),
        Term::App(f, a) => check_let_names(f).and_then(|_| check_let_names(a)),
        Term::Let { name, fun, arg, body } => {
            if RESERVED.contains(&name.as_str()) {
                return Err(AnfError::SyntheticNameCollision(name.clone()));
            }
            check_let_names(fun)?;
            check_let_names(arg)?;
            check_let_names(body)
        }
    }
}

/// Converts a term to A-normal form. Intermediate applications are named
/// `_a0, _a1, ...` in the order they appear in the output.
pub fn anf(t: &Term) -> Result<Anf, AnfError> {
    check_let_names(t)?;
    let mut fresh = Fresh { used: t.names(), next: 0 };
    let mut seen: BTreeSet<String> = t.free_vars();
    let distinct = distinct_binders(t, &mut HashMap::new(), &mut seen, &mut fresh);
    Ok(computation(&distinct, &mut fresh))
}

impl Value {
    pub fn to_term(&self) -> Term {
        match self {
            Value::Var(x) => Term::Var(x.clone()),
            Value::Lam(x, body) => Term::Abs(x.clone(), Box::new(body.to_term())),
        }
    }

    fn free_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Value::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Value::Lam(x, body) => {
                bound.push(x.clone());
                body.free_into(bound, out);
                bound.pop();
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_into(&mut Vec::new(), &mut out);
        out
    }
}

impl Anf {
    pub fn to_term(&self) -> Term {
        match self {
            Anf::Value(v) => v.to_term(),
            Anf::Let { name, fun, arg, body } => Term::Let {
                name: name.clone(),
                fun: Box::new(fun.to_term()),
                arg: Box::new(arg.to_term()),
                body: Box::new(body.to_term()),
            },
            Anf::Tail { fun, arg } => Term::app(fun.to_term(), arg.to_term()),
        }
    }

    fn free_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Anf::Value(v) => v.free_into(bound, out),
            Anf::Let { name, fun, arg, body } => {
                fun.free_into(bound, out);
                arg.free_into(bound, out);
                bound.push(name.clone());
                body.free_into(bound, out);
                bound.pop();
            }
            Anf::Tail { fun, arg } => {
                fun.free_into(bound, out);
                arg.free_into(bound, out);
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_into(&mut Vec::new(), &mut out);
        out
    }

    /// Capture-avoiding substitution of a value for a free variable. Values
    /// only ever occupy value positions, so the result is still in ANF.
    pub fn substitute(&self, x: &str, v: &Value) -> Anf {
        let mut avoid = v.free_vars();
        avoid.insert(x.to_owned());
        avoid.extend(self.to_term().names());
        subst_anf(self, x, v, &mut avoid)
    }
}

fn fresh_like(base: &str, avoid: &mut BTreeSet<String>) -> String {
    let name = (1..).map(|k| format!("{base}_{k}")).find(|n| !avoid.contains(n)).expect("unbounded");
    avoid.insert(name.clone());
    name
}

fn rename_anf(m: &Anf, from: &str, to: &str) -> Anf {
    subst_anf(m, from, &Value::Var(to.to_owned()), &mut BTreeSet::new())
}

fn subst_value(t: &Value, x: &str, v: &Value, avoid: &mut BTreeSet<String>) -> Value {
    match t {
        Value::Var(y) if y == x => v.clone(),
        Value::Var(_) => t.clone(),
        Value::Lam(y, _) if y == x => t.clone(),
        Value::Lam(y, body) => {
            if v.free_vars().contains(y) && body.free_vars().contains(x) {
                let z = fresh_like(y, avoid);
                let body = rename_anf(body, y, &z);
                Value::Lam(z, Box::new(subst_anf(&body, x, v, avoid)))
            } else {
                Value::Lam(y.clone(), Box::new(subst_anf(body, x, v, avoid)))
            }
        }
    }
}

fn subst_anf(t: &Anf, x: &str, v: &Value, avoid: &mut BTreeSet<String>) -> Anf {
    match t {
        Anf::Value(w) => Anf::Value(subst_value(w, x, v, avoid)),
        Anf::Tail { fun, arg } => Anf::Tail { fun: subst_value(fun, x, v, avoid), arg: subst_value(arg, x, v, avoid) },
        Anf::Let { name, fun, arg, body } => {
            let fun = subst_value(fun, x, v, avoid);
            let arg = subst_value(arg, x, v, avoid);
            if name == x {
                return Anf::Let { name: name.clone(), fun, arg, body: body.clone() };
            }
            if v.free_vars().contains(name) && body.free_vars().contains(x) {
                let z = fresh_like(name, avoid);
                let body = rename_anf(body, name, &z);
                Anf::Let { name: z, fun, arg, body: Box::new(subst_anf(&body, x, v, avoid)) }
            } else {
                Anf::Let { name: name.clone(), fun, arg, body: Box::new(subst_anf(body, x, v, avoid)) }
            }
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Var(x) => f.write_str(x),
            Value::Lam(x, body) => write!(f, "(\\{x}. {body})"),
        }
    }
}

impl fmt::Display for Anf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Anf::Value(Value::Lam(x, body)) => write!(f, "\\{x}. {body}"),
            Anf::Value(v) => write!(f, "{v}"),
            Anf::Let { name, fun, arg, body } => write!(f, "let {name} = {fun} {arg} in {body}"),
            Anf::Tail { fun, arg } => write!(f, "{fun} {arg}"),
        }
    }
}
