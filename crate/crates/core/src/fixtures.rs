//! Built-in example programs and their expected query results.
//!
//! The Nat case study is split over several records that name each other
//! (`NatPlus` inherits `NatData`, and so on). Each one is available as a
//! fixture that also carries the records it depends on, and `NatAll` holds
//! all of them in one scope.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::config::Options;
use crate::error::EvalError;
use crate::semantics::Evaluator;
use crate::syntax::{load, CoreProgram, LoadError, Path};

struct Source {
    name: &'static str,
    file: &'static str,
    text: &'static str,
    /// Nat case study records this one refers to, in dependency order.
    needs: &'static [&'static str],
}

macro_rules! source {
    ($name:literal, $file:literal, [$($need:literal),*]) => {
        Source {
            name: $name,
            file: $file,
            text: include_str!(concat!("../../../fixtures/", $file)),
            needs: &[$($need),*],
        }
    };
}

const SOURCES: &[Source] = &[
    source!("NatData", "nat/nat_data.inh", []),
    source!("NatPlus", "nat/nat_plus.inh", ["NatData"]),
    source!("NatVisitor", "nat/nat_visitor.inh", ["NatData"]),
    source!("BooleanData", "nat/boolean_data.inh", []),
    source!("NatEquality", "nat/nat_equality.inh", ["NatData", "NatVisitor", "BooleanData"]),
    source!("NatConstants", "nat/nat_constants.inh", ["NatData"]),
    source!(
        "Test",
        "nat/test.inh",
        ["NatData", "NatPlus", "NatVisitor", "BooleanData", "NatEquality", "NatConstants"]
    ),
    source!(
        "CartesianTest",
        "nat/cartesian_test.inh",
        ["NatData", "NatPlus", "NatVisitor", "BooleanData", "NatEquality", "NatConstants"]
    ),
    source!("NatAll", "nat_all.inh", []),
    source!("MultiPath", "multipath.inh", []),
    source!("P1", "p1.inh", []),
    source!("P2", "p2.inh", []),
    source!("CyclicA", "cyclic_a.inh", []),
    source!("SelfLoop", "self_loop.inh", []),
    source!("BooleanProbe", "boolean_probe.inh", []),
];

const MANIFEST: &str = include_str!("../../../fixtures/expectations.tsv");

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown fixture `{0}`")]
pub struct UnknownFixture(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Paper,
    Derived,
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    /// Sorted labels, comma-joined.
    Properties,
    /// Sorted ancestor paths, comma-joined.
    Ancestors,
    /// The expected path is among the ancestors.
    AncestorsContain,
    /// The expected path is not among the ancestors.
    AncestorsExclude,
    /// Convergence report for the path taken as a lambda image.
    Converges,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("manifest line {line}: {message}")]
pub struct ManifestError {
    pub line: usize,
    pub message: String,
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "PAPER" => Ok(Provenance::Paper),
            "DERIVED" => Ok(Provenance::Derived),
            "TRIVIAL" => Ok(Provenance::Trivial),
            other => Err(format!("unknown provenance `{other}`")),
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Paper => "PAPER",
            Provenance::Derived => "DERIVED",
            Provenance::Trivial => "TRIVIAL",
        })
    }
}

impl FromStr for Op {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "properties" => Ok(Op::Properties),
            "ancestors" => Ok(Op::Ancestors),
            "ancestors-contain" => Ok(Op::AncestorsContain),
            "ancestors-exclude" => Ok(Op::AncestorsExclude),
            "converges" => Ok(Op::Converges),
            other => Err(format!("unknown op `{other}`")),
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::Properties => "properties",
            Op::Ancestors => "ancestors",
            Op::AncestorsContain => "ancestors-contain",
            Op::AncestorsExclude => "ancestors-exclude",
            Op::Converges => "converges",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectation {
    pub op: Op,
    pub path: Path,
    pub expected: String,
    pub provenance: Provenance,
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t{}", self.op, self.path, self.expected, self.provenance)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub name: &'static str,
    pub source: String,
    pub expectations: Vec<Expectation>,
}

/// Parses the tab-separated manifest into `(fixture, expectation)` rows.
pub fn parse_manifest(text: &str) -> Result<Vec<(String, Expectation)>, ManifestError> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fail = |message: String| ManifestError { line: i + 1, message };
        let cols: Vec<&str> = line.split('\t').collect();
        let [fixture, op, path, expected, provenance] = cols[..] else {
            return Err(fail(format!("expected 5 columns, found {}", cols.len())));
        };
        rows.push((
            fixture.to_owned(),
            Expectation {
                op: op.parse().map_err(fail)?,
                path: path.parse().map_err(|e| fail(format!("{e}")))?,
                expected: expected.to_owned(),
                provenance: provenance.parse().map_err(fail)?,
            },
        ));
    }
    Ok(rows)
}

/// Names in the registry, in a fixed order.
pub fn names() -> Vec<&'static str> {
    SOURCES.iter().map(|s| s.name).collect()
}

fn source(name: &str) -> Result<&'static Source, UnknownFixture> {
    SOURCES.iter().find(|s| s.name == name).ok_or_else(|| UnknownFixture(name.to_owned()))
}

/// Path of the fixture's own file below the `fixtures/` directory.
pub fn file_of(name: &str) -> Result<&'static str, UnknownFixture> {
    Ok(source(name)?.file)
}

/// Elements of a one-record source, without the enclosing braces and
/// without comment lines.
fn members(text: &str) -> &str {
    let start = text.find('{').map_or(0, |i| i + 1);
    let end = text.rfind('}').unwrap_or(text.len());
    text[start..end].trim_matches('\n')
}

fn strip_comments(text: &str) -> String {
    text.lines().filter(|l| !l.trim_start().starts_with('#')).collect::<Vec<_>>().join("\n")
}

/// Sources of several one-record files placed side by side in one record.
pub fn compose(texts: &[&str]) -> String {
    let parts: Vec<String> = texts.iter().map(|t| members(&strip_comments(t)).to_owned()).collect();
    format!("{{\n{}\n}}\n", parts.join("\n"))
}

pub fn fixture(name: &str) -> Result<Fixture, UnknownFixture> {
    let own = source(name)?;
    let source = if own.needs.is_empty() {
        own.text.to_owned()
    } else {
        let mut texts: Vec<&str> = own.needs.iter().map(|n| source(n).map(|s| s.text)).collect::<Result<_, _>>()?;
        texts.push(own.text);
        compose(&texts)
    };
    let expectations = parse_manifest(MANIFEST)
        .expect("built-in manifest is well formed")
        .into_iter()
        .filter(|(f, _)| f == name)
        .map(|(_, e)| e)
        .collect();
    Ok(Fixture { name: own.name, source, expectations })
}

impl Fixture {
    pub fn program(&self) -> Result<CoreProgram, LoadError> {
        load(&self.source)
    }
}

fn joined<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn divergence_text(e: EvalError) -> String {
    match e.divergence() {
        Some(kind) => format!("!{kind}"),
        None => format!("!{e}"),
    }
}

/// Canonical result of one expectation's query.
pub fn evaluate(ev: &mut Evaluator<'_>, op: Op, path: &Path, expected: &str) -> String {
    let ancestors = |ev: &mut Evaluator<'_>| -> Result<BTreeSet<Path>, String> {
        ev.ancestors(path).map_err(divergence_text)
    };
    let membership = |ev: &mut Evaluator<'_>| -> String {
        match (ancestors(ev), expected.parse::<Path>()) {
            (Ok(set), Ok(p)) if set.contains(&p) => "present".to_owned(),
            (Ok(_), Ok(_)) => "absent".to_owned(),
            (Err(e), _) => e,
            (_, Err(e)) => format!("!{e}"),
        }
    };
    match op {
        Op::Properties => ev.properties(path).map(joined).unwrap_or_else(divergence_text),
        Op::Ancestors => ancestors(ev).map(joined).unwrap_or_else(|e| e),
        Op::AncestorsContain | Op::AncestorsExclude => membership(ev),
        Op::Converges => ev.converges_at(path).map(|c| c.to_string()).unwrap_or_else(divergence_text),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub expectation: Expectation,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub fixture: String,
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }
}

impl fmt::Display for Report {
    /// One line per expectation: verdict, fixture, op, path, expected,
    /// actual when different, provenance.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            let e = &o.expectation;
            let verdict = if o.pass { "PASS" } else { "FAIL" };
            write!(f, "{verdict}\t{}\t{}\t{}\t{}", self.fixture, e.op, e.path, e.expected)?;
            if !o.pass {
                write!(f, "\tactual={}", o.actual)?;
            }
            writeln!(f, "\t{}", e.provenance)?;
        }
        Ok(())
    }
}

fn check(e: &Expectation, actual: &str) -> bool {
    match e.op {
        Op::AncestorsContain => actual == "present",
        Op::AncestorsExclude => actual == "absent",
        _ => actual == e.expected,
    }
}

/// Evaluates every expectation of `fixture` against its own source.
pub fn run_expectations(fixture: &Fixture, options: Options) -> Result<Report, LoadError> {
    let program = fixture.program()?;
    let mut ev = Evaluator::new(&program, options);
    let outcomes = fixture
        .expectations
        .iter()
        .map(|e| {
            let actual = evaluate(&mut ev, e.op, &e.path, &e.expected);
            Outcome { pass: check(e, &actual), actual, expectation: e.clone() }
        })
        .collect();
    Ok(Report { fixture: fixture.name.to_owned(), outcomes })
}
