#![allow(dead_code)]

use inhcalc_core::lambda::corpus;
use inhcalc_core::semantics::Evaluator;
use inhcalc_core::syntax::{CoreProgram, Label, Path, SurfaceElement, SurfaceProgram, SurfaceRecord, SurfaceRef};
use inhcalc_core::Options;
use rand::seq::SliceRandom;
use rand::Rng;

pub const LABELS: [&str; 4] = ["a", "b", "c", "d"];

fn label(rng: &mut impl Rng) -> Label {
    Label::new(LABELS[rng.gen_range(0..LABELS.len())])
}

/// Random record at nesting `depth` with indexed references that stay in scope.
pub fn random_record(rng: &mut impl Rng, depth: usize, max_depth: usize) -> SurfaceRecord {
    let mut rec = SurfaceRecord::default();
    if depth < max_depth {
        for _ in 0..rng.gen_range(0..=3) {
            let child = random_record(rng, depth + 1, max_depth);
            rec.define(label(rng), child);
        }
    }
    if depth > 0 {
        for _ in 0..rng.gen_range(0..=2) {
            let downs = (0..rng.gen_range(0..=2)).map(|_| label(rng)).collect();
            rec.inherit(SurfaceRef::Indexed { n: rng.gen_range(0..depth), downs });
        }
    }
    rec
}

pub fn random_program(seed: u64, max_depth: usize) -> SurfaceProgram {
    let mut rng = corpus::rng(seed);
    SurfaceProgram { root: random_record(&mut rng, 0, max_depth) }
}

/// Shuffles every element list and repeats some elements.
pub fn mutate(rec: &SurfaceRecord, rng: &mut impl Rng) -> SurfaceRecord {
    let mut elements: Vec<SurfaceElement> = rec
        .elements
        .iter()
        .map(|e| match e {
            SurfaceElement::Definition(l, body) => SurfaceElement::Definition(*l, mutate(body, rng)),
            other => other.clone(),
        })
        .collect();
    let extra: Vec<SurfaceElement> = elements.iter().filter(|_| rng.gen_bool(0.25)).cloned().collect();
    elements.extend(extra);
    elements.shuffle(rng);
    SurfaceRecord::new(elements)
}

/// Depth-limited observation text with divergent nodes recorded in place.
pub fn observation(program: &CoreProgram, at: &Path, depth: usize, options: Options) -> String {
    let mut ev = Evaluator::new(program, options);
    ev.observe_recording(at, depth).expect("well-formed program").shape()
}

use inhcalc_core::lambda::{anf, oracle, translate, translate_surface, Anf, Db, Term, Value};
use inhcalc_core::syntax::{resolve_references, SurfaceElement as El};

/// A closed abstraction `λx. M` and a closed abstraction `V`, both in ANF.
pub fn random_redex(rng: &mut impl Rng, budget: usize) -> (String, Anf, Value) {
    let lam = loop {
        let body = corpus::random_term(rng, budget, 1);
        if let Anf::Value(Value::Lam(x, m)) = anf(&Db::abs(body).to_term()).unwrap() {
            break (x, *m);
        }
    };
    let arg = loop {
        if let Anf::Value(v @ Value::Lam(..)) = anf(&corpus::random_term(rng, budget / 2 + 1, 0).to_term()).unwrap() {
            break v;
        }
    };
    (lam.0, lam.1, arg)
}

/// `{T(λx. M), argument = T(V)}`: the abstraction's record with the
/// argument grafted in.
pub fn grafted(x: &str, m: &Anf, v: &Value) -> CoreProgram {
    let mut root = translate_surface(&Anf::Value(Value::Lam(x.to_owned(), Box::new(m.clone()))), &[]).unwrap();
    let arg = translate_surface(&Anf::Value(v.clone()), &[]).unwrap();
    root.elements.push(El::Definition(Label::new("argument"), arg));
    resolve_references(&SurfaceProgram { root }).unwrap()
}

pub fn redex(x: &str, m: &Anf, v: &Value) -> Anf {
    Anf::Tail { fun: Value::Lam(x.to_owned(), Box::new(m.clone())), arg: v.clone() }
}

pub fn image(m: &Anf) -> CoreProgram {
    translate(m).unwrap()
}

/// Rewrites one random subterm `s` of `t` into a redex that contracts back
/// to `s`: either `(λ. s↑) u` for a closed `u`, or `(λ. 0) s`.
pub fn beta_expand(t: &Db, rng: &mut impl Rng) -> Db {
    let positions = t.size();
    let target = rng.gen_range(0..positions);
    let mut counter = 0;
    expand_at(t, target, &mut counter, rng)
}

fn expand_at(t: &Db, target: usize, counter: &mut usize, rng: &mut impl Rng) -> Db {
    let here = *counter;
    *counter += 1;
    if here == target {
        return if rng.gen_bool(0.5) {
            let u = corpus::random_term(rng, 3, 0);
            Db::app(Db::abs(oracle::shift(t, 1, 0)), u)
        } else {
            Db::app(Db::abs(Db::Var(0)), t.clone())
        };
    }
    match t {
        Db::Var(i) => Db::Var(*i),
        Db::Abs(b) => Db::abs(expand_at(b, target, counter, rng)),
        Db::App(f, a) => {
            let f = expand_at(f, target, counter, rng);
            Db::app(f, expand_at(a, target, counter, rng))
        }
    }
}

/// Closed applicative contexts `[] A1 ... Ak`, given by their arguments.
pub const CONTEXTS: [&[&str]; 10] = [
    &[],
    &[r"\x. x"],
    &[r"\x y. x"],
    &[r"\x y. y"],
    &[r"\x. x", r"\x. x"],
    &[r"\x y. x", r"\x. x"],
    &[r"\x y. y", r"\x. x"],
    &[r"\x. x x"],
    &[r"\x y. y", r"\x y. x", r"\x. x"],
    &[r"\f x. f (f x)", r"\x. x"],
];

pub fn in_context(t: &Term, args: &[&str]) -> Term {
    args.iter().fold(t.clone(), |acc, a| Term::app(acc, inhcalc_core::lambda::parse_lambda(a).unwrap()))
}
