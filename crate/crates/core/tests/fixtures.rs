mod common;

use std::fs;
use std::path::PathBuf;

use inhcalc_core::fixtures::{self, Op, Provenance};
use inhcalc_core::lambda::{anf, parse_open, translate_surface};
use inhcalc_core::semantics::Evaluator;
use inhcalc_core::syntax::{load, path, resolve_references, Label, Path, SurfaceProgram, SurfaceRecord};
use inhcalc_core::Options;

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn every_expectation_holds() {
    let mut failures = Vec::new();
    for name in fixtures::names() {
        let fixture = fixtures::fixture(name).unwrap();
        let report = fixtures::run_expectations(&fixture, Options::default()).unwrap();
        if !report.passed() {
            failures.push(report.to_string());
        }
    }
    assert!(failures.is_empty(), "{}", failures.concat());
}

#[test]
fn manifest_covers_every_kind_of_check() {
    let rows = fixtures::parse_manifest(include_str!("../../../fixtures/expectations.tsv")).unwrap();
    for op in [Op::Properties, Op::Ancestors, Op::AncestorsContain, Op::AncestorsExclude, Op::Converges] {
        assert!(rows.iter().any(|(_, e)| e.op == op), "{op}");
    }
    assert!(rows.iter().any(|(_, e)| e.provenance == Provenance::Paper));
    for (fixture, _) in &rows {
        assert!(fixtures::names().contains(&fixture.as_str()), "{fixture}");
    }
}

#[test]
fn manifest_errors_name_the_line() {
    let e = fixtures::parse_manifest("# header\nA\tproperties\tx\n").unwrap_err();
    assert_eq!(e.line, 2);
    assert!(fixtures::parse_manifest("A\tsideways\tx\ty\tPAPER\n").is_err());
    assert!(fixtures::parse_manifest("A\tproperties\tx\ty\tRUMOUR\n").is_err());
}

#[test]
fn unknown_fixture_is_reported() {
    assert_eq!(fixtures::fixture("Nope").unwrap_err(), fixtures::UnknownFixture("Nope".into()));
    assert!(fixtures::file_of("Nope").is_err());
}

#[test]
fn a_wrong_expectation_fails_with_the_actual_value() {
    let mut fixture = fixtures::fixture("P1").unwrap();
    let first = fixture.expectations.first_mut().expect("P1 has expectations");
    first.expected = "nonsense".into();
    let report = fixtures::run_expectations(&fixture, Options::default()).unwrap();
    assert!(!report.passed());
    let text = report.to_string();
    assert!(text.starts_with("FAIL\tP1\t"), "{text}");
    assert!(text.contains("actual="), "{text}");
}

#[test]
fn every_fixture_file_is_on_disk() {
    for name in fixtures::names() {
        let file = fixtures_dir().join(fixtures::file_of(name).unwrap());
        assert!(file.is_file(), "{}", file.display());
    }
}

#[test]
fn nat_all_is_the_composition_of_the_case_study() {
    let files = [
        "nat_data", "nat_plus", "nat_visitor", "boolean_data", "nat_equality", "nat_constants", "test",
        "cartesian_test",
    ];
    let texts: Vec<String> =
        files.iter().map(|f| fs::read_to_string(fixtures_dir().join(format!("nat/{f}.inh"))).unwrap()).collect();
    let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
    let composed = load(&fixtures::compose(&refs)).unwrap();
    let nat_all = fixtures::fixture("NatAll").unwrap().program().unwrap();
    assert_eq!(composed, nat_all);
}

#[test]
fn test_fixture_sees_the_records_it_needs() {
    let program = fixtures::fixture("Test").unwrap().program().unwrap();
    let top = program.defines(&Path::root());
    for name in ["NatData", "NatPlus", "NatVisitor", "BooleanData", "NatEquality", "NatConstants", "Test"] {
        assert!(top.contains(&Label::new(name)), "{name}");
    }
}

fn translated(src: &str) -> SurfaceRecord {
    translate_surface(&anf(&parse_open(src).unwrap()).unwrap(), &["true", "false", "eq"]).unwrap()
}

#[test]
fn boolean_probe_members_are_translations() {
    let mut s = SurfaceRecord::default();
    s.define(Label::new("true"), translated(r"\t f. t"));
    s.define(Label::new("false"), translated(r"\t f. f"));
    s.define(Label::new("eq"), translated(r"\a b. a b (b false true)"));
    s.define(Label::new("e1"), translated("eq false false"));
    s.define(Label::new("e2"), translated("eq true true"));
    let mut root = SurfaceRecord::default();
    root.define(Label::new("S"), s);
    let expected = resolve_references(&SurfaceProgram { root }).unwrap();
    let probe = fixtures::fixture("BooleanProbe").unwrap().program().unwrap();
    assert_eq!(probe.node(&path("S")), expected.node(&path("S")));
}

fn snapshot(name: &str) -> String {
    let program = fixtures::fixture(name).unwrap().program().unwrap();
    let mut ev = Evaluator::new(&program, Options::default());
    ev.observe_recording(&Path::root(), 4).unwrap().to_text()
}

/// Set `INHCALC_BLESS=1` to rewrite the stored trees.
#[test]
fn observation_snapshots_are_stable() {
    let dir = fixtures_dir().join("snapshots");
    let bless = std::env::var_os("INHCALC_BLESS").is_some();
    let mut stale = Vec::new();
    for name in fixtures::names() {
        let file = dir.join(format!("{name}.txt"));
        let actual = snapshot(name);
        if bless {
            fs::create_dir_all(&dir).unwrap();
            fs::write(&file, &actual).unwrap();
        } else if fs::read_to_string(&file).ok().as_deref() != Some(actual.as_str()) {
            stale.push(name);
        }
    }
    assert!(stale.is_empty(), "snapshots differ for {stale:?}; rerun with INHCALC_BLESS=1 after review");
}
