mod common;

use std::collections::BTreeSet;

use inhcalc_core::config::ClosureOrder;
use inhcalc_core::fixtures;
use inhcalc_core::semantics::*;
use inhcalc_core::syntax::*;
use inhcalc_core::{DivergenceKind, EvalError, Options};
use proptest::prelude::*;

/// Random programs often inherit an enclosing scope and unfold without
/// bound; a small budget keeps each case fast and is skipped when hit.
const RANDOM_FUEL: u64 = 2_000;

const P1: &str = "{A = {x = {}}, B = {A, x = {y = {}}}}";
const P2: &str = "{Outer = {Inner = {r = this@Outer}}, Obj = {Outer}}";

fn program(name: &str) -> CoreProgram {
    fixtures::fixture(name).unwrap().program().unwrap()
}

fn paths(list: &[&str]) -> BTreeSet<Path> {
    list.iter().map(|p| path(p)).collect()
}

fn labels(list: &[&str]) -> BTreeSet<Label> {
    list.iter().map(|l| Label::new(l)).collect()
}

fn pair(context: Option<&str>, branch: &str) -> SuperPair {
    SuperPair { context: context.map_or(Context::AboveRoot, |c| Context::Path(path(c))), branch: path(branch) }
}

#[test]
fn properties_examples() {
    let p1 = load(P1).unwrap();
    assert_eq!(properties(&p1, &path("B.x")).unwrap(), labels(&["y"]));
    assert_eq!(properties(&program("MultiPath"), &path("HasMultipleOuters.outer")).unwrap(), labels(&["MyInner"]));
    assert!(properties(&load("{a = {}}").unwrap(), &path("a")).unwrap().is_empty());
}

#[test]
fn supers_examples() {
    let p1 = load(P1).unwrap();
    let mut ev = Evaluator::new(&p1, Options::default());
    assert_eq!(ev.supers(&path("B")).unwrap(), [pair(Some("()"), "B"), pair(Some("()"), "A")].into());
    assert_eq!(ev.supers(&Path::root()).unwrap(), [pair(None, "()")].into());
    let multi = program("MultiPath");
    let supers = Evaluator::new(&multi, Options::default()).supers(&path("HasMultipleOuters")).unwrap();
    assert!(supers.contains(&pair(Some("Object1"), "MyOuter.MyInner")));
    assert!(supers.contains(&pair(Some("Object2"), "MyOuter.MyInner")));
}

#[test]
fn overrides_examples() {
    let p1 = load(P1).unwrap();
    let mut ev = Evaluator::new(&p1, Options::default());
    assert_eq!(ev.overrides(&Path::root()).unwrap(), paths(&["()"]));
    assert_eq!(ev.overrides(&path("B.x")).unwrap(), paths(&["B.x", "A.x"]));
    let multi = program("MultiPath");
    let mut ev = Evaluator::new(&multi, Options::default());
    assert_eq!(
        ev.overrides(&path("HasMultipleOuters.outer")).unwrap(),
        paths(&["HasMultipleOuters.outer", "MyOuter.MyInner.outer"])
    );
}

#[test]
fn bases_examples() {
    let p1 = load(P1).unwrap();
    let mut ev = Evaluator::new(&p1, Options::default());
    assert_eq!(ev.bases(&path("B")).unwrap(), paths(&["A"]));
    assert!(ev.bases(&Path::root()).unwrap().is_empty());
    let multi = program("MultiPath");
    let mut ev = Evaluator::new(&multi, Options::default());
    assert_eq!(ev.bases(&path("HasMultipleOuters.outer")).unwrap(), paths(&["Object1", "Object2"]));
}

#[test]
fn resolve_examples() {
    let p1 = load(P1).unwrap();
    let mut ev = Evaluator::new(&p1, Options::default());
    let to_a = Reference::new(0, vec![Label::new("A")]);
    assert_eq!(ev.resolve(&Path::root(), &path("B"), &to_a).unwrap(), paths(&["A"]));
    let here = Reference::new(0, vec![]);
    assert_eq!(ev.resolve(&path("B.x"), &path("A.x"), &here).unwrap(), paths(&["B.x"]));
    let multi = program("MultiPath");
    let mut ev = Evaluator::new(&multi, Options::default());
    let up = Reference::new(1, vec![]);
    assert_eq!(
        ev.resolve(&path("HasMultipleOuters"), &path("MyOuter.MyInner.outer"), &up).unwrap(),
        paths(&["Object1", "Object2"])
    );
}

#[test]
fn this_examples() {
    let p2 = load(P2).unwrap();
    let mut ev = Evaluator::new(&p2, Options::default());
    assert_eq!(ev.this(&[path("a.b")], &path("x"), 0).unwrap(), paths(&["a.b"]));
    assert_eq!(ev.this(&[path("Obj.Inner")], &path("Outer.Inner"), 1).unwrap(), paths(&["Obj"]));
    let multi = program("MultiPath");
    let mut ev = Evaluator::new(&multi, Options::default());
    assert_eq!(
        ev.this(&[path("HasMultipleOuters")], &path("MyOuter.MyInner"), 1).unwrap(),
        paths(&["Object1", "Object2"])
    );
}

#[test]
fn this_past_the_root_underflows() {
    let p2 = load(P2).unwrap();
    let mut ev = Evaluator::new(&p2, Options::default());
    assert!(matches!(ev.this(&[path("Obj")], &path("Outer"), 2), Err(EvalError::ScopeUnderflow { .. })));
}

#[test]
fn ancestors_examples() {
    let p1 = load(P1).unwrap();
    assert_eq!(ancestors(&p1, &path("B")).unwrap(), paths(&["A", "B"]));
    assert_eq!(ancestors(&p1, &Path::root()).unwrap(), paths(&["()"]));
    let found = ancestors(&program("Test"), &path("Test.Test2plus3.equal")).unwrap();
    assert!(found.contains(&path("BooleanData.BooleanFactory.True")));
    assert!(!found.contains(&path("BooleanData.BooleanFactory.False")));
}

#[test]
fn observe_examples() {
    let tree = observe(&load("{a = {}}").unwrap(), &Path::root(), 0).unwrap();
    assert_eq!(tree.to_text(), "()\ta\n");
    let tree = observe(&load(P1).unwrap(), &path("B"), 2).unwrap();
    assert_eq!(tree.to_text(), "B\tx\nB.x\ty\nB.x.y\t\n");
    let tree = observe(&program("SelfLoop"), &path("a"), 3).unwrap();
    assert_eq!(tree.to_text(), "a\ta\na.a\ta\na.a.a\ta\na.a.a.a\ta\n");
    assert_eq!(tree.shape(), "()\ta\na\ta\na.a\ta\na.a.a\ta\n");
}

#[test]
fn observation_json_is_tagged() {
    let tree = observe(&load(P1).unwrap(), &path("B"), 1).unwrap();
    let json = tree.to_json();
    assert_eq!(json["path"], "B");
    assert_eq!(json["properties"], serde_json::json!(["x"]));
    assert_eq!(json["children"][0]["path"], "B.x");
}

#[test]
fn cyclic_program_reports_a_cycle() {
    let cyclic = program("CyclicA");
    let err = properties(&cyclic, &path("a")).unwrap_err();
    assert_eq!(err.divergence(), Some(DivergenceKind::Cycle));
    let mut ev = Evaluator::new(&cyclic, Options::default());
    let tree = ev.observe_recording(&Path::root(), 1).unwrap();
    assert_eq!(tree.to_text(), "()\ta\na\t!cycle\n");
}

#[test]
fn mutual_siblings_terminate() {
    let p = load("{a = {b, x = {}}, b = {a, y = {}}}").unwrap();
    assert_eq!(properties(&p, &path("a")).unwrap(), labels(&["x", "y"]));
    assert_eq!(properties(&p, &path("b")).unwrap(), labels(&["x", "y"]));
}

#[test]
fn fuel_runs_out() {
    let nat = program("Test");
    let mut ev = Evaluator::new(&nat, Options::default().with_fuel(10));
    let err = ev.ancestors(&path("Test.Test2plus3.equal")).unwrap_err();
    assert_eq!(err.divergence(), Some(DivergenceKind::FuelExhausted));
    assert_eq!(ev.fuel_used(), 10);
}

#[test]
fn a_cycle_does_not_poison_later_queries() {
    let p = load("{a = {a.b}, c = {d = {}}, e = {c}}").unwrap();
    let mut ev = Evaluator::new(&p, Options::default());
    assert!(ev.properties(&path("a")).is_err());
    assert!(ev.properties(&path("a")).is_err());
    assert_eq!(ev.properties(&path("e")).unwrap(), labels(&["d"]));
}

#[test]
fn single_path_assertion_reports_multipath_frontiers() {
    let multi = program("MultiPath");
    let mut ev = Evaluator::new(&multi, Options::default().single_path(true));
    assert_eq!(ev.properties(&path("HasMultipleOuters.outer")).unwrap(), labels(&["MyInner"]));
    let v = ev.violations();
    assert!(!v.is_empty());
    assert!(v.iter().any(|v| v.frontier == vec![path("Object1"), path("Object2")]));
}

#[test]
fn memoized_matches_naive_on_fixtures() {
    for name in ["P1", "P2", "MultiPath", "NatData", "NatPlus", "BooleanData", "SelfLoop"] {
        let p = program(name);
        for at in p.paths() {
            let mut naive = NaiveEvaluator::new(&p, 200_000);
            let Ok(expected) = naive.properties(&at) else { continue };
            assert_eq!(properties(&p, &at).unwrap(), expected, "{name} {at}");
        }
    }
}

fn options_with(order: ClosureOrder) -> Options {
    let mut o = Options::default().with_fuel(RANDOM_FUEL);
    o.closure_order = order;
    o
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_order_does_not_matter(seed in any::<u64>()) {
        let p = resolve_references(&common::random_program(seed, 3)).unwrap();
        let dfs = common::observation(&p, &Path::root(), 3, options_with(ClosureOrder::DepthFirst));
        let bfs = common::observation(&p, &Path::root(), 3, options_with(ClosureOrder::BreadthFirst));
        prop_assume!(!dfs.contains("fuel") && !bfs.contains("fuel"));
        prop_assert_eq!(dfs, bfs);
    }

    #[test]
    fn memoized_agrees_with_naive(seed in any::<u64>()) {
        let p = resolve_references(&common::random_program(seed, 3)).unwrap();
        for at in p.paths() {
            let mut naive = NaiveEvaluator::new(&p, RANDOM_FUEL);
            let mut memo = Evaluator::new(&p, Options::default().with_fuel(RANDOM_FUEL));
            match (naive.properties(&at), memo.properties(&at)) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Ok(_), Err(e)) | (Err(e), Ok(_)) => {
                    prop_assert_eq!(e.divergence(), Some(DivergenceKind::FuelExhausted), "at {}", at)
                }
                (Err(_), Err(_)) => {}
            }
        }
    }

    #[test]
    fn properties_are_the_defines_of_ancestors(seed in any::<u64>()) {
        let p = resolve_references(&common::random_program(seed, 3)).unwrap();
        let mut ev = Evaluator::new(&p, Options::default().with_fuel(RANDOM_FUEL));
        for at in p.paths() {
            let (Ok(props), Ok(anc)) = (ev.properties(&at), ev.ancestors(&at)) else { continue };
            let union: BTreeSet<Label> = anc.iter().flat_map(|a| p.defines(a)).collect();
            prop_assert_eq!(props, union);
        }
    }

    #[test]
    fn flat_and_nested_inheritance_agree(seed in any::<u64>()) {
        let mut rng = inhcalc_core::lambda::corpus::rng(seed);
        let mut root = SurfaceRecord::default();
        for name in ["X", "Y", "Z"] {
            root.define(Label::new(name), common::random_record(&mut rng, 1, 3));
        }
        root.elements.extend(parse("{F = {X, Y, Z}, W = {X, Y}, N = {W, Z}}").unwrap().root.elements);
        let p = resolve_references(&SurfaceProgram { root }).unwrap();
        let flat = common::observation(&p, &path("F"), 4, Options::default().with_fuel(RANDOM_FUEL));
        let nested = common::observation(&p, &path("N"), 4, Options::default().with_fuel(RANDOM_FUEL));
        prop_assume!(!flat.contains("fuel") && !nested.contains("fuel"));
        prop_assert_eq!(flat, nested);
    }
}
