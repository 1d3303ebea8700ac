use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context as _};
use clap::{Parser, Subcommand, ValueEnum};
use inhcalc_core::config::{DEFAULT_FUEL, DEFAULT_MAX_DEPTH, FUEL_ENV, MAX_DEPTH_ENV};
use inhcalc_core::direct::converges_direct;
use inhcalc_core::fixtures;
use inhcalc_core::lambda::{self, anf, bohm_prefix, corpus, parse_lambda, weak_head_reduce, Db, HeadOutcome};
use inhcalc_core::semantics::{Convergence, Evaluator, NonConvergence, ObservationTree, Outcome};
use inhcalc_core::syntax::{load, render, CoreProgram, Path};
use inhcalc_core::{EvalError, Options};

/// Largest term size `corpus` accepts.
const MAX_CORPUS_SIZE: usize = 9;

#[derive(Parser)]
#[command(name = "inhcalc", version, about = "Evaluate inheritance-calculus programs and lambda translations")]
struct Cli {
    /// Equation applications allowed per evaluation (head steps for the oracle).
    #[arg(long, global = true, env = FUEL_ENV, default_value_t = DEFAULT_FUEL,
          value_parser = clap::value_parser!(u64).range(1..))]
    fuel: u64,
    /// Deepest `result` chain tried by convergence checks.
    #[arg(long, global = true, env = MAX_DEPTH_ENV, default_value_t = DEFAULT_MAX_DEPTH as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_depth: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Query a program file.
    Query {
        file: PathBuf,
        #[arg(long, default_value = "()")]
        path: String,
        #[arg(long, value_enum, default_value_t = QueryOp::Properties)]
        op: QueryOp,
        /// Levels to unfold for `--op tree`.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long)]
        json: bool,
    },
    /// Translate, check convergence of, or expand a closed lambda term.
    Lambda {
        #[command(subcommand)]
        command: LambdaCommand,
    },
    /// Parse and resolve a program file without evaluating it.
    Check { file: PathBuf },
    /// Built-in fixtures.
    Fixtures {
        #[command(subcommand)]
        command: FixturesCommand,
    },
    /// Compare the oracle, the record semantics and the direct semantics on
    /// every closed term up to a size.
    Corpus {
        #[arg(long)]
        size: usize,
        /// Also fail when a scope walk tracks more than one path.
        #[arg(long)]
        assert_single_path: bool,
    },
}

#[derive(Subcommand)]
enum LambdaCommand {
    /// Print the record image.
    Translate { expr: String },
    /// Report whether the record image converges.
    Converges {
        expr: String,
        /// Exit with status 1 unless the term converges.
        #[arg(long)]
        expect_converge: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print a Böhm tree prefix.
    Bohm {
        expr: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum FixturesCommand {
    /// Check expectations of one fixture, or of all.
    Run { name: Option<String> },
    /// List fixture names and files.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum QueryOp {
    Properties,
    Ancestors,
    Tree,
}

/// Exit status 1: the program diverged, a check failed, or engines disagree.
#[derive(Debug)]
struct Refuted(String);

impl std::fmt::Display for Refuted {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Refuted {}

fn refuted(message: impl Into<String>) -> anyhow::Error {
    Refuted(message.into()).into()
}

fn eval_failure(e: EvalError) -> anyhow::Error {
    refuted(format!("{e}\n"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let options = Options::default().with_fuel(cli.fuel).with_max_depth(cli.max_depth as usize);
    match run(cli.command, options) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => match e.downcast::<Refuted>() {
            Ok(Refuted(out)) => {
                print!("{out}");
                ExitCode::from(1)
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
    }
}

fn run(command: Command, options: Options) -> anyhow::Result<String> {
    match command {
        Command::Query { file, path, op, depth, json } => query(&read_program(&file)?, &path, op, depth, json, options),
        Command::Lambda { command } => lambda_command(command, options),
        Command::Check { file } => {
            let program = read_program(&file)?;
            Ok(format!("ok\t{} records\n", program.size()))
        }
        Command::Fixtures { command: FixturesCommand::Run { name } } => run_fixtures(name.as_deref(), options),
        Command::Fixtures { command: FixturesCommand::List } => {
            let mut out = String::new();
            for name in fixtures::names() {
                writeln!(out, "{name}\t{}", fixtures::file_of(name)?)?;
            }
            Ok(out)
        }
        Command::Corpus { size, assert_single_path } => corpus_sweep(size, assert_single_path, options),
    }
}

fn read_program(file: &std::path::Path) -> anyhow::Result<CoreProgram> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    load(&text).with_context(|| format!("loading {}", file.display()))
}

fn lines<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| format!("{x}\n")).collect()
}

fn diverges(tree: &ObservationTree) -> bool {
    matches!(tree.outcome, Outcome::Divergence(_)) || tree.children.iter().any(diverges)
}

fn query(program: &CoreProgram, at: &str, op: QueryOp, depth: usize, json: bool, options: Options) -> anyhow::Result<String> {
    let at: Path = at.parse().map_err(|e| anyhow!("{e}"))?;
    let mut ev = Evaluator::new(program, options);
    match op {
        QueryOp::Properties => {
            let labels = ev.properties(&at).map_err(eval_failure)?;
            Ok(if json {
                format!("{}\n", serde_json::json!(labels.iter().map(|l| l.as_str()).collect::<Vec<_>>()))
            } else {
                lines(labels)
            })
        }
        QueryOp::Ancestors => {
            let ancestors = ev.ancestors(&at).map_err(eval_failure)?;
            Ok(if json {
                format!("{}\n", serde_json::json!(ancestors.iter().map(|p| p.to_string()).collect::<Vec<_>>()))
            } else {
                lines(ancestors)
            })
        }
        QueryOp::Tree => {
            let tree = ev.observe_recording(&at, depth).map_err(eval_failure)?;
            let out = if json { format!("{:#}\n", tree.to_json()) } else { tree.to_text() };
            if diverges(&tree) {
                Err(refuted(out))
            } else {
                Ok(out)
            }
        }
    }
}

fn lambda_command(command: LambdaCommand, options: Options) -> anyhow::Result<String> {
    match command {
        LambdaCommand::Translate { expr } => {
            let program = lambda::compile(&parse_lambda(&expr)?)?;
            Ok(format!("{}\n", render(&program)))
        }
        LambdaCommand::Converges { expr, expect_converge, json } => {
            let verdict = lambda::converges(&parse_lambda(&expr)?, options)?;
            let out = if json { format!("{}\n", serde_json::json!(verdict)) } else { format!("{verdict}\n") };
            if expect_converge && !verdict.converged() {
                Err(refuted(out))
            } else {
                Ok(out)
            }
        }
        LambdaCommand::Bohm { expr, depth } => {
            let term = parse_lambda(&expr)?.to_db()?;
            Ok(bohm_prefix(&term, depth, options.fuel as usize).to_string())
        }
    }
}

fn run_fixtures(name: Option<&str>, options: Options) -> anyhow::Result<String> {
    let names = match name {
        Some(n) => vec![fixtures::fixture(n)?.name],
        None => fixtures::names(),
    };
    let mut out = String::new();
    let mut failed = 0;
    for n in names {
        let report = fixtures::run_expectations(&fixtures::fixture(n)?, options.clone())
            .with_context(|| format!("loading fixture {n}"))?;
        failed += report.outcomes.iter().filter(|o| !o.pass).count();
        out.push_str(&report.to_string());
    }
    if failed > 0 {
        writeln!(out, "# {failed} expectations failed")?;
        return Err(refuted(out));
    }
    Ok(out)
}

fn oracle_text(outcome: &HeadOutcome) -> String {
    match outcome {
        HeadOutcome::Normal { steps, .. } => format!("whnf@{steps}"),
        HeadOutcome::Loop { steps } => format!("loop@{steps}"),
        HeadOutcome::OutOfFuel { .. } => "fuel".to_owned(),
    }
}

fn verdict_text(c: &Convergence) -> String {
    match c {
        Convergence::Converged { .. } => "converged".to_owned(),
        Convergence::NotConverged { reason } => reason.to_string(),
    }
}

/// One table row and whether the row is a contradiction.
fn corpus_row(t: &Db, options: &Options) -> anyhow::Result<(String, bool, bool, usize)> {
    let oracle = weak_head_reduce(t, options.fuel as usize);
    let named = t.to_term();
    let program = lambda::compile(&named)?;
    let mut ev = Evaluator::new(&program, options.clone());
    let record = ev.converges()?;
    let direct = converges_direct(&anf(&named)?, options.clone())?;
    let cycle = Convergence::NotConverged { reason: NonConvergence::Cycle };
    let contradiction = match (&oracle, record) {
        (HeadOutcome::Normal { steps, .. }, Convergence::Converged { depth }) => depth > *steps,
        (HeadOutcome::Normal { .. }, r) => r == cycle,
        (HeadOutcome::Loop { .. }, r) => r.converged(),
        (HeadOutcome::OutOfFuel { .. }, _) => false,
    } || direct != record;
    let decided = oracle.decided() && record.decided();
    let depth = record.depth().map_or("-".to_owned(), |d| d.to_string());
    let direct_depth = direct.depth().map_or("-".to_owned(), |d| d.to_string());
    let row = format!(
        "{t}\t{}\t{}\t{}\t{depth}\t{direct_depth}\n",
        oracle_text(&oracle),
        verdict_text(&record),
        verdict_text(&direct)
    );
    Ok((row, contradiction, decided, ev.violations().len()))
}

fn corpus_sweep(size: usize, assert_single_path: bool, options: Options) -> anyhow::Result<String> {
    if size > MAX_CORPUS_SIZE {
        return Err(anyhow!("--size {size} exceeds the maximum of {MAX_CORPUS_SIZE}"));
    }
    let options = options.single_path(assert_single_path);
    let mut out = String::from("term\toracle\tconverges\tconverges_direct\tdepth\tdirect_depth\n");
    let (mut contradictions, mut decided, mut violations) = (0, 0, 0);
    let terms = corpus::closed_terms(size);
    for t in &terms {
        let (row, contradiction, both_decided, v) = corpus_row(t, &options)?;
        out.push_str(&row);
        contradictions += usize::from(contradiction);
        decided += usize::from(both_decided);
        violations += v;
    }
    write!(out, "# {} terms, {decided} decided, {contradictions} contradictions", terms.len())?;
    if assert_single_path {
        write!(out, ", {violations} single-path violations")?;
    }
    out.push('\n');
    if contradictions > 0 || violations > 0 {
        return Err(refuted(out));
    }
    Ok(out)
}
