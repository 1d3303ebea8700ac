use std::collections::BTreeSet;
use std::fmt;

/// Named lambda terms. `Let` binds the result of one application.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Abs(String, Box<Term>),
    App(Box<Term>, Box<Term>),
    Let { name: String, fun: Box<Term>, arg: Box<Term>, body: Box<Term> },
}

/// Nameless terms with de Bruijn indices; index 0 is the innermost binder.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Db {
    Var(usize),
    Abs(Box<Db>),
    App(Box<Db>, Box<Db>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("free variable `{0}`")]
pub struct FreeVariable(pub String);

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_owned())
    }

    pub fn abs(name: &str, body: Term) -> Term {
        Term::Abs(name.to_owned(), Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(t: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match t {
                Term::Var(x) => {
                    if !bound.contains(x) {
                        out.insert(x.clone());
                    }
                }
                Term::Abs(x, body) => {
                    bound.push(x.clone());
                    go(body, bound, out);
                    bound.pop();
                }
                Term::App(f, a) => {
                    go(f, bound, out);
                    go(a, bound, out);
                }
                Term::Let { name, fun, arg, body } => {
                    go(fun, bound, out);
                    go(arg, bound, out);
                    bound.push(name.clone());
                    go(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every variable name appearing anywhere, bound or free.
    pub fn names(&self) -> BTreeSet<String> {
        fn go(t: &Term, out: &mut BTreeSet<String>) {
            match t {
                Term::Var(x) => {
                    out.insert(x.clone());
                }
                Term::Abs(x, body) => {
                    out.insert(x.clone());
                    go(body, out);
                }
                Term::App(f, a) => {
                    go(f, out);
                    go(a, out);
                }
                Term::Let { name, fun, arg, body } => {
                    out.insert(name.clone());
                    go(fun, out);
                    go(arg, out);
                    go(body, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Converts to de Bruijn form; `let x = f a in b` becomes `(λ. b) (f a)`.
    pub fn to_db(&self) -> Result<Db, FreeVariable> {
        fn go(t: &Term, env: &mut Vec<String>) -> Result<Db, FreeVariable> {
            Ok(match t {
                Term::Var(x) => {
                    let i = env.iter().rev().position(|y| y == x).ok_or_else(|| FreeVariable(x.clone()))?;
                    Db::Var(i)
                }
                Term::Abs(x, body) => {
                    env.push(x.clone());
                    let body = go(body, env);
                    env.pop();
                    Db::Abs(Box::new(body?))
                }
                Term::App(f, a) => Db::App(Box::new(go(f, env)?), Box::new(go(a, env)?)),
                Term::Let { name, fun, arg, body } => {
                    let bound = Db::App(Box::new(go(fun, env)?), Box::new(go(arg, env)?));
                    env.push(name.clone());
                    let body = go(body, env);
                    env.pop();
                    Db::App(Box::new(Db::Abs(Box::new(body?))), Box::new(bound))
                }
            })
        }
        go(self, &mut Vec::new())
    }
}

impl Db {
    pub fn var(i: usize) -> Db {
        Db::Var(i)
    }

    pub fn abs(body: Db) -> Db {
        Db::Abs(Box::new(body))
    }

    pub fn app(f: Db, a: Db) -> Db {
        Db::App(Box::new(f), Box::new(a))
    }

    /// Node count: variables 1, abstraction 1 + body, application 1 + both sides.
    pub fn size(&self) -> usize {
        match self {
            Db::Var(_) => 1,
            Db::Abs(b) => 1 + b.size(),
            Db::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    /// Closed under `depth` enclosing binders.
    pub fn is_closed_under(&self, depth: usize) -> bool {
        match self {
            Db::Var(i) => *i < depth,
            Db::Abs(b) => b.is_closed_under(depth + 1),
            Db::App(f, a) => f.is_closed_under(depth) && a.is_closed_under(depth),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.is_closed_under(0)
    }

    /// Names binders `x0, x1, ...` by nesting depth. Free indices become `free{i}`.
    pub fn to_term(&self) -> Term {
        fn go(t: &Db, depth: usize) -> Term {
            match t {
                Db::Var(i) if *i < depth => Term::Var(format!("x{}", depth - 1 - i)),
                Db::Var(i) => Term::Var(format!("free{}", i - depth)),
                Db::Abs(b) => Term::Abs(format!("x{depth}"), Box::new(go(b, depth + 1))),
                Db::App(f, a) => Term::App(Box::new(go(f, depth)), Box::new(go(a, depth))),
            }
        }
        go(self, 0)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::Abs(x, body) => write!(f, "\\{x}. {body}"),
            Term::App(fun, arg) => {
                match **fun {
                    Term::Abs(..) | Term::Let { .. } => write!(f, "({fun})")?,
                    _ => write!(f, "{fun}")?,
                }
                match **arg {
                    Term::Var(_) => write!(f, " {arg}"),
                    _ => write!(f, " ({arg})"),
                }
            }
            Term::Let { name, fun, arg, body } => {
                write!(f, "let {name} = {} in {body}", Term::App(fun.clone(), arg.clone()))
            }
        }
    }
}

impl fmt::Display for Db {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Db::Var(i) => write!(f, "{i}"),
            Db::Abs(b) => write!(f, "λ {b}"),
            Db::App(fun, arg) => {
                match **fun {
                    Db::Abs(_) => write!(f, "({fun})")?,
                    _ => write!(f, "{fun}")?,
                }
                match **arg {
                    Db::Var(_) => write!(f, " {arg}"),
                    _ => write!(f, " ({arg})"),
                }
            }
        }
    }
}
