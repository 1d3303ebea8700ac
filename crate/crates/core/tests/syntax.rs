mod common;

use std::collections::BTreeSet;

use inhcalc_core::fixtures;
use inhcalc_core::syntax::*;
use proptest::prelude::*;

fn refs(list: &[(usize, &[&str])]) -> BTreeSet<Reference> {
    list.iter().map(|(n, downs)| Reference::new(*n, downs.iter().map(|d| Label::new(d)).collect())).collect()
}

fn labels(list: &[&str]) -> BTreeSet<Label> {
    list.iter().map(|l| Label::new(l)).collect()
}

#[test]
fn empty_record_has_no_elements() {
    assert!(parse("{}").unwrap().root.elements.is_empty());
}

#[test]
fn definitions_parse_in_order() {
    let p = parse("{ a = {}, b = {} }").unwrap();
    let names: Vec<&str> = p
        .root
        .elements
        .iter()
        .map(|e| match e {
            SurfaceElement::Definition(l, _) => l.as_str(),
            SurfaceElement::Reference(_) => panic!("unexpected reference"),
        })
        .collect();
    assert_eq!(names, ["a", "b"]);
}

#[test]
fn duplicate_reference_is_absorbed() {
    let once = load("{ a = {}, x = { a.b } }").unwrap();
    let twice = load("{ a = {}, x = { a.b, a.b } }").unwrap();
    assert_eq!(once, twice);
}

#[test]
fn comments_trailing_commas_and_sugar() {
    let sugared = load("# note\n{ a = {}, b = a, }").unwrap();
    let plain = load("{ a = {}, b = { a } }").unwrap();
    assert_eq!(sugared, plain);
}

#[test]
fn parse_errors_carry_positions() {
    let e = parse("{\n  a = {\n}").unwrap_err();
    assert_eq!(e.line, 3);
    assert!(parse("{ a = }").is_err());
    assert!(parse("{ ^x }").is_err());
    assert!(parse("{ a } trailing").is_err());
}

#[test]
fn named_reference_counts_scopes_to_target() {
    let p = load(&std::fs::read_to_string(fixture_file("p2.inh")).unwrap()).unwrap();
    assert_eq!(p.inherits(&path("Outer.Inner.r")), refs(&[(1, &[])]));
}

#[test]
fn indexed_reference_passes_through() {
    let p = load("{ a = { b = { c = { d = { ^3.argument } } } } }").unwrap();
    assert_eq!(p.inherits(&path("a.b.c.d")), refs(&[(3, &["argument"])]));
}

#[test]
fn lexical_reference_uses_nearest_defining_prefix() {
    let p = load("{A = {x = {}}, B = {A, x = {y = {}}}}").unwrap();
    assert_eq!(p.inherits(&path("B")), refs(&[(0, &["A"])]));
}

#[test]
fn lexical_lookup_starts_at_the_enclosing_scope() {
    let p = load("{x = {y = {}}, z = {x = {x}}, w = {v = {x}}}").unwrap();
    assert_eq!(p.inherits(&path("z.x")), refs(&[(0, &["x"])]));
    assert_eq!(p.inherits(&path("w.v")), refs(&[(1, &["x"])]));
}

#[test]
fn named_desugars_to_computed_index() {
    let named = load("{Outer = {Inner = {r = this@Outer}}, Obj = {Outer}}").unwrap();
    let indexed = load("{Outer = {Inner = {r = ^1}}, Obj = {Outer}}").unwrap();
    assert_eq!(named, indexed);
    let lexical = load("{A = {x = {}}, B = {A, x = {y = {}}}}").unwrap();
    let indexed = load("{A = {x = {}}, B = {^0.A, x = {y = {}}}}").unwrap();
    assert_eq!(lexical, indexed);
}

#[test]
fn resolution_errors() {
    assert!(matches!(load("{a = {nowhere}}"), Err(LoadError::Resolution(ResolutionError::Unresolved { .. }))));
    assert!(matches!(
        load("{a = {this@b}}"),
        Err(LoadError::Resolution(ResolutionError::UnknownEnclosing { .. }))
    ));
    assert!(matches!(
        load("{a = {b = {this@b}}}"),
        Err(LoadError::Resolution(ResolutionError::SelfInheritance { .. }))
    ));
    assert!(matches!(load("{a = {^1}}"), Err(LoadError::Resolution(ResolutionError::IndexOutOfScope { .. }))));
    assert!(matches!(load("{^0}"), Err(LoadError::Resolution(ResolutionError::RootReference { .. }))));
}

#[test]
fn defines_queries() {
    let p = load("{a = {}, b = {}}").unwrap();
    assert_eq!(p.defines(&Path::root()), labels(&["a", "b"]));
    assert!(p.defines(&path("nowhere.at.all")).is_empty());
    let nat = fixtures::fixture("NatData").unwrap().program().unwrap();
    assert_eq!(nat.defines(&path("NatData.NatFactory")), labels(&["Product", "Successor", "Zero"]));
}

#[test]
fn inherits_queries() {
    assert!(load("{a = {}}").unwrap().inherits(&Path::root()).is_empty());
    let multi = fixtures::fixture("MultiPath").unwrap().program().unwrap();
    assert_eq!(multi.inherits(&path("MyOuter.MyInner.outer")), refs(&[(1, &[])]));
}

#[test]
fn same_label_definitions_merge() {
    let split = load("{x = {a = {}}, x = {b = {}}}").unwrap();
    let merged = load("{x = {a = {}, b = {}}}").unwrap();
    assert_eq!(split, merged);
}

#[test]
fn render_examples() {
    assert_eq!(render(&load("{}").unwrap()), "{}");
    assert_eq!(render(&load("{b = {}, a = {}}").unwrap()), render(&load("{a = {}, b = {}}").unwrap()));
    assert_eq!(render(&load("{a = {}, r = {a}}").unwrap()), "{a = {}, r = ^0.a}");
}

#[test]
fn render_is_a_fixed_point_on_every_fixture() {
    for name in fixtures::names() {
        let program = fixtures::fixture(name).unwrap().program().unwrap();
        let once = render(&program);
        let reloaded = load(&once).unwrap();
        assert_eq!(reloaded, program, "{name}");
        assert_eq!(render(&reloaded), once, "{name}");
    }
}

#[test]
fn paths_parse_and_display() {
    assert_eq!(path("()"), Path::root());
    assert_eq!(path(""), Path::root());
    assert_eq!(path("a.b").to_string(), "a.b");
    assert_eq!(Path::root().to_string(), "()");
    assert!("a..b".parse::<Path>().is_err());
    assert_eq!(path("a.b.c").init(), Some(path("a.b")));
    assert_eq!(Path::root().init(), None);
}

fn fixture_file(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

proptest! {
    #[test]
    fn round_trip_through_render(seed in any::<u64>()) {
        let program = resolve_references(&common::random_program(seed, 3)).unwrap();
        prop_assert_eq!(load(&render(&program)).unwrap(), program);
    }

    #[test]
    fn permutation_and_duplication_leave_the_tree_unchanged(seed in any::<u64>(), mutation in any::<u64>()) {
        let surface = common::random_program(seed, 3);
        let mut rng = inhcalc_core::lambda::corpus::rng(mutation);
        let mutated = SurfaceProgram { root: common::mutate(&surface.root, &mut rng) };
        prop_assert_eq!(resolve_references(&mutated).unwrap(), resolve_references(&surface).unwrap());
    }

    #[test]
    fn surface_render_reparses(seed in any::<u64>()) {
        let surface = common::random_program(seed, 3);
        prop_assert_eq!(parse(&render_surface(&surface)).unwrap(), surface);
    }
}
