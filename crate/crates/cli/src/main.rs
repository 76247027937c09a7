//! Command-line front end for the central-submonad calculus.
//!
//! The `csc` binary wraps the `csc-core` library: it loads theories
//! (`.csct`), terms (`.csc`), finite models (`.cscm`) and translations
//! (`.csctr`) from disk and runs the typechecker, the normalizer, the
//! equality decision procedure, the finite-model evaluator and the
//! centre computations over them.
//!
//! Exit codes are uniform across subcommands:
//!
//! * `0` — success: the term checks, the verdict is `equal`, the laws
//!   hold, the report is consistent.
//! * `1` — a definite negative: a type error in `check`, a `distinct`
//!   verdict with a countermodel, a failing law or soundness report.
//! * `2` — undecided: the question could not be settled within budget.
//! * `3` — usage, I/O or file-format errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use csc_core::centre::{
    central_endo_report, centre_at, check_monad_laws, verify_centre_iso, ContinuationMonad,
    FiniteMonad, IdentityMonad, ListMonad, SemiringMonad, WriterMonad,
};
use csc_core::equiv::{decide_equal, normalize, EqualityProof, ProofMethod, Verdict};
use csc_core::fixtures;
use csc_core::semantics::{check_model_soundness, FinSet, Model, ModelFile};
use csc_core::syntax::{Context, Term, Type};
use csc_core::theory::{parse_term_file, parse_translation_file, Theory, TranslationVerdict};
use csc_core::typecheck;
use serde_json::json;

type CliError = Box<dyn std::error::Error>;

#[derive(Parser)]
#[command(
    name = "csc",
    version,
    about = "Typecheck, normalize, compare and model terms of the central-submonad calculus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Node budget for the equational search behind `eq` and
    /// `translate-check`.
    #[arg(long, global = true, default_value_t = csc_core::DEFAULT_BUDGET, value_name = "N")]
    budget: usize,

    /// Largest carrier the finite semantics will materialize.
    #[arg(long, global = true, default_value_t = csc_core::DEFAULT_SIZE_CAP, value_name = "N")]
    size_cap: usize,

    /// Comma-separated test object sizes used when probing centrality.
    #[arg(long, global = true, default_value = "1,2", value_parser = parse_sizes, value_name = "SIZES")]
    test_sizes: Sizes,

    /// Seed for the randomized parts of `soundness`.
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    seed: u64,

    /// Print one machine-readable JSON object instead of prose.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Typecheck a term file against a theory and print its type.
    Check {
        /// Theory file (.csct).
        theory: PathBuf,
        /// Term file (.csc), optionally starting with `[ctx] |-`.
        term: PathBuf,
    },
    /// Rewrite a term to its canonical form.
    Normalize {
        /// Theory file (.csct).
        theory: PathBuf,
        /// Term file (.csc).
        term: PathBuf,
    },
    /// Decide whether two terms are provably equal.
    Eq {
        /// Theory file (.csct).
        theory: PathBuf,
        /// Left term file (.csc).
        left: PathBuf,
        /// Right term file (.csc).
        right: PathBuf,
        /// Model file (.cscm) used to hunt for countermodels.
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
    },
    /// Tabulate the value of a term in a finite model.
    Eval {
        /// Theory file (.csct).
        theory: PathBuf,
        /// Term file (.csc).
        term: PathBuf,
        /// Model file (.cscm).
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
    },
    /// List the central elements of a monad at a given base size.
    Centre {
        /// Model file (.cscm) supplying the monoid or semiring.
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
        /// Which bundled monad to probe.
        #[arg(long, value_enum, default_value_t = MonadKind::Writer)]
        monad: MonadKind,
        /// Size of the base object X.
        #[arg(long, default_value_t = 1, value_name = "N")]
        base_size: usize,
        /// Answer-object size for the continuation monad.
        #[arg(long, default_value_t = 2, value_name = "N")]
        answers: usize,
        /// Length bound for the bounded-list monad.
        #[arg(long, default_value_t = 3, value_name = "N")]
        max_len: usize,
    },
    /// Check the functor, monad and strength laws exhaustively.
    VerifyLaws {
        /// Model file (.cscm) supplying the monoid or semiring.
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
        /// Which bundled monad to check.
        #[arg(long, value_enum, default_value_t = MonadKind::Writer)]
        monad: MonadKind,
        /// Check all objects of size 1..=N.
        #[arg(long, default_value_t = 3, value_name = "N")]
        max_size: usize,
        /// Answer-object size for the continuation monad.
        #[arg(long, default_value_t = 2, value_name = "N")]
        answers: usize,
        /// Length bound for the bounded-list monad.
        #[arg(long, default_value_t = 3, value_name = "N")]
        max_len: usize,
    },
    /// Cross-check centrality of Kleisli maps against centre factorisation.
    VerifyIso {
        /// Model file (.cscm) supplying the monoid or semiring.
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
        /// Which bundled monad to check.
        #[arg(long, value_enum, default_value_t = MonadKind::Writer)]
        monad: MonadKind,
        /// Size of the source object X.
        #[arg(long, default_value_t = 1, value_name = "N")]
        x_size: usize,
        /// Size of the target object Y.
        #[arg(long, default_value_t = 1, value_name = "N")]
        y_size: usize,
        /// Answer-object size for the continuation monad.
        #[arg(long, default_value_t = 2, value_name = "N")]
        answers: usize,
        /// Length bound for the bounded-list monad.
        #[arg(long, default_value_t = 3, value_name = "N")]
        max_len: usize,
    },
    /// Check that a model satisfies every axiom of a theory.
    Soundness {
        /// Theory file (.csct).
        #[arg(long, value_name = "FILE")]
        theory: PathBuf,
        /// Model file (.cscm).
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Number of fuzzed derived equations to re-interpret.
        #[arg(long, default_value_t = 50, value_name = "N")]
        fuzz: usize,
    },
    /// Check a vocabulary translation between two theories.
    TranslateCheck {
        /// Translation file (.csctr); theory paths inside resolve
        /// relative to its directory.
        translation: PathBuf,
        /// Model file (.cscm) for the target theory, used as an oracle.
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
    },
    /// Walk through the dihedral-group example end to end.
    D4Demo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MonadKind {
    /// Writer monad `X x M` over the monoid in the model file.
    Writer,
    /// Free-module monad over the semiring in the model file.
    Semiring,
    /// Continuation monad with a finite answer object.
    Continuation,
    /// Lists of bounded length.
    List,
    /// The identity monad.
    Identity,
}

/// Strictly positive, deduplicated, ascending test sizes.
#[derive(Clone, Debug)]
struct Sizes(Vec<usize>);

fn parse_sizes(text: &str) -> Result<Sizes, String> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let n: usize = part
            .parse()
            .map_err(|_| format!("`{part}` is not a positive size"))?;
        if n == 0 {
            return Err("test sizes must be at least 1".to_string());
        }
        out.push(n);
    }
    if out.is_empty() {
        return Err("at least one test size is required".to_string());
    }
    out.sort_unstable();
    out.dedup();
    Ok(Sizes(out))
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 3 } else { 0 };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let code = match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            if cli.json {
                println!("{}", json!({ "error": err.to_string() }));
            } else {
                eprintln!("error: {err}");
            }
            3
        }
    };
    std::process::exit(code);
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Check { theory, term } => cmd_check(cli, theory, term),
        Command::Normalize { theory, term } => cmd_normalize(cli, theory, term),
        Command::Eq {
            theory,
            left,
            right,
            model,
        } => cmd_eq(cli, theory, left, right, model.as_deref()),
        Command::Eval {
            theory,
            term,
            model,
        } => cmd_eval(cli, theory, term, model),
        Command::Centre {
            model,
            monad,
            base_size,
            answers,
            max_len,
        } => cmd_centre(cli, model.as_deref(), *monad, *base_size, *answers, *max_len),
        Command::VerifyLaws {
            model,
            monad,
            max_size,
            answers,
            max_len,
        } => cmd_verify_laws(cli, model.as_deref(), *monad, *max_size, *answers, *max_len),
        Command::VerifyIso {
            model,
            monad,
            x_size,
            y_size,
            answers,
            max_len,
        } => cmd_verify_iso(
            cli,
            model.as_deref(),
            *monad,
            *x_size,
            *y_size,
            *answers,
            *max_len,
        ),
        Command::Soundness {
            theory,
            model,
            fuzz,
        } => cmd_soundness(cli, theory, model, *fuzz),
        Command::TranslateCheck { translation, model } => {
            cmd_translate_check(cli, translation, model.as_deref())
        }
        Command::D4Demo => cmd_d4_demo(cli),
    }
}

// ---------------------------------------------------------------- loading

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()).into())
}

fn load_theory(path: &Path) -> Result<Theory, CliError> {
    Theory::from_path(path).map_err(|e| format!("in {}: {e}", path.display()).into())
}

fn load_term(th: &Theory, path: &Path) -> Result<(Context, Term), CliError> {
    let text = read_file(path)?;
    parse_term_file(th, &text).map_err(|e| format!("in {}: {e}", path.display()).into())
}

fn load_model_file(path: &Path) -> Result<ModelFile, CliError> {
    let text = read_file(path)?;
    ModelFile::parse(&text).map_err(|e| format!("in {}: {e}", path.display()).into())
}

/// Build the writer-monad model a `.cscm` file describes and validate it
/// against the theory before using it as an oracle.
fn load_writer_model(
    cli: &Cli,
    th: &Theory,
    path: &Path,
) -> Result<Model, CliError> {
    let file = load_model_file(path)?;
    let model = file
        .build_writer_model_with_cap(th, cli.size_cap)
        .map_err(|e| -> CliError { format!("in {}: {e}", path.display()).into() })?;
    if let Err(problems) = model.validate(th, &cli.test_sizes.0) {
        let mut msg = format!("model {} does not fit the theory:", path.display());
        for p in problems {
            let _ = write!(msg, "\n  {p}");
        }
        return Err(msg.into());
    }
    Ok(model)
}

/// Construct one of the bundled monads, pulling algebraic data from the
/// model file when the kind needs it.
fn build_monad(
    cli: &Cli,
    kind: MonadKind,
    model: Option<&Path>,
    answers: usize,
    max_len: usize,
) -> Result<Box<dyn FiniteMonad>, CliError> {
    let need_file = |what: &str| -> Result<ModelFile, CliError> {
        let path = model.ok_or_else(|| {
            format!("the {what} monad needs --model <FILE> for its algebraic data")
        })?;
        load_model_file(path)
    };
    match kind {
        MonadKind::Writer => {
            let file = need_file("writer")?;
            let monoid = file
                .monoid
                .ok_or("model file has no `monoid` block for the writer monad")?;
            Ok(Box::new(WriterMonad::new(monoid).with_cap(cli.size_cap)))
        }
        MonadKind::Semiring => {
            let file = need_file("semiring")?;
            let semiring = file
                .semiring
                .ok_or("model file has no `semiring` block for the module monad")?;
            Ok(Box::new(SemiringMonad::new(semiring).with_cap(cli.size_cap)))
        }
        MonadKind::Continuation => {
            if answers == 0 {
                return Err("--answers must be at least 1".into());
            }
            Ok(Box::new(
                ContinuationMonad::new(FinSet::of_size(answers)).with_cap(cli.size_cap),
            ))
        }
        MonadKind::List => Ok(Box::new(ListMonad::new(max_len).with_cap(cli.size_cap))),
        MonadKind::Identity => Ok(Box::new(IdentityMonad::new())),
    }
}

// ------------------------------------------------------------- formatting

fn judgement_string(ctx: &Context, term: &Term, ty: &Type) -> String {
    if ctx.is_empty() {
        format!("|- {term} : {ty}")
    } else {
        format!("{ctx} |- {term} : {ty}")
    }
}

fn method_summary(method: &ProofMethod) -> String {
    match method {
        ProofMethod::SharedCanonicalForm => "shared canonical form".to_string(),
        ProofMethod::InclusionInjective(inner) => format!(
            "inclusion is injective; {}",
            method_summary(&inner.method)
        ),
        ProofMethod::Bridged(steps) => format!("{}-step axiom bridge", steps.len()),
    }
}

fn proof_json(proof: &EqualityProof) -> serde_json::Value {
    let bridge: Vec<String> = match &proof.method {
        ProofMethod::Bridged(steps) => steps.iter().map(|s| s.rule.clone()).collect(),
        _ => Vec::new(),
    };
    json!({
        "canonical_lhs": proof.lhs.output.to_string(),
        "canonical_rhs": proof.rhs.output.to_string(),
        "method": method_summary(&proof.method),
        "bridge_rules": bridge,
    })
}

// ------------------------------------------------------------ subcommands

fn cmd_check(cli: &Cli, theory: &Path, term: &Path) -> Result<i32, CliError> {
    let th = load_theory(theory)?;
    let (ctx, t) = load_term(&th, term)?;
    match typecheck::infer(&th, &ctx, &t) {
        Ok(ty) => {
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "ok": true,
                        "context": ctx.to_string(),
                        "term": t.to_string(),
                        "type": ty.to_string(),
                    })
                );
            } else {
                println!("{}", judgement_string(&ctx, &t, &ty));
            }
            Ok(0)
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "ok": false, "error": e.to_string() }));
            } else {
                eprintln!("type error: {e}");
            }
            Ok(1)
        }
    }
}

fn cmd_normalize(cli: &Cli, theory: &Path, term: &Path) -> Result<i32, CliError> {
    let th = load_theory(theory)?;
    let (ctx, t) = load_term(&th, term)?;
    match normalize(&th, &ctx, &t) {
        Ok(n) => {
            if cli.json {
                let steps: Vec<_> = n
                    .steps
                    .iter()
                    .map(|s| json!({ "rule": s.rule, "path": s.path }))
                    .collect();
                println!(
                    "{}",
                    json!({
                        "input": n.input.to_string(),
                        "output": n.output.to_string(),
                        "steps": steps,
                    })
                );
            } else {
                println!("{}", n.output);
                if n.steps.is_empty() {
                    println!("already canonical");
                } else {
                    let rules: Vec<&str> = n.steps.iter().map(|s| s.rule).collect();
                    println!("{} steps: {}", n.steps.len(), rules.join(", "));
                }
            }
            Ok(0)
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": e.to_string() }));
            } else {
                eprintln!("normalization failed: {e}");
            }
            Ok(1)
        }
    }
}

fn cmd_eq(
    cli: &Cli,
    theory: &Path,
    left: &Path,
    right: &Path,
    model: Option<&Path>,
) -> Result<i32, CliError> {
    let th = load_theory(theory)?;
    let (lctx, l) = load_term(&th, left)?;
    let (rctx, r) = load_term(&th, right)?;
    let ctx = merge_contexts(&lctx, &rctx)?;
    let oracle = match model {
        Some(path) => Some(load_writer_model(cli, &th, path)?),
        None => None,
    };
    let verdict = decide_equal(&th, &ctx, &l, &r, oracle.as_ref(), cli.budget)
        .map_err(|e| -> CliError { format!("cannot compare the terms: {e}").into() })?;
    match verdict {
        Verdict::Equal(proof) => {
            if cli.json {
                println!("{}", json!({ "verdict": "equal", "proof": proof_json(&proof) }));
            } else {
                println!("equal ({})", method_summary(&proof.method));
                println!("canonical form: {}", proof.lhs.output);
            }
            Ok(0)
        }
        Verdict::Distinct(counter) => {
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "verdict": "distinct",
                        "model": counter.model,
                        "environment": counter.environment,
                        "lhs_value": counter.lhs_value,
                        "rhs_value": counter.rhs_value,
                    })
                );
            } else {
                println!("distinct");
                println!("{counter}");
            }
            Ok(1)
        }
        Verdict::Unknown(reason) => {
            if cli.json {
                println!("{}", json!({ "verdict": "unknown", "reason": reason }));
            } else {
                println!("unknown: {reason}");
            }
            Ok(2)
        }
    }
}

/// Two term files may each carry a context; insist that they agree (one
/// may leave its context empty and inherit the other's).
fn merge_contexts(left: &Context, right: &Context) -> Result<Context, CliError> {
    if right.is_empty() {
        return Ok(left.clone());
    }
    if left.is_empty() {
        return Ok(right.clone());
    }
    let lp: Vec<_> = left.iter().collect();
    let rp: Vec<_> = right.iter().collect();
    if lp == rp {
        Ok(left.clone())
    } else {
        Err("the two term files declare different contexts".into())
    }
}

fn cmd_eval(cli: &Cli, theory: &Path, term: &Path, model: &Path) -> Result<i32, CliError> {
    let th = load_theory(theory)?;
    let (ctx, t) = load_term(&th, term)?;
    let m = load_writer_model(cli, &th, model)?;
    let f = m
        .interpret_term(&th, &ctx, &t)
        .map_err(|e| -> CliError { format!("cannot interpret the term: {e}").into() })?;
    let dom = f.dom();
    let cod = f.cod();
    if cli.json {
        let rows: Vec<_> = (0..dom.size())
            .map(|i| {
                json!({
                    "environment": dom.label(i),
                    "value": cod.label(f.apply(i)),
                })
            })
            .collect();
        println!(
            "{}",
            json!({
                "model": m.name(),
                "environments": dom.size(),
                "rows": rows,
            })
        );
    } else if ctx.is_empty() {
        println!("value: {}", cod.label(f.apply(0)));
    } else {
        const SHOWN: usize = 64;
        for i in 0..dom.size().min(SHOWN) {
            println!("{} -> {}", dom.label(i), cod.label(f.apply(i)));
        }
        if dom.size() > SHOWN {
            println!("... ({} more environments)", dom.size() - SHOWN);
        }
    }
    Ok(0)
}

fn cmd_centre(
    cli: &Cli,
    model: Option<&Path>,
    kind: MonadKind,
    base_size: usize,
    answers: usize,
    max_len: usize,
) -> Result<i32, CliError> {
    if base_size == 0 {
        return Err("--base-size must be at least 1".into());
    }
    let m = build_monad(cli, kind, model, answers, max_len)?;
    let base = FinSet::of_size(base_size);
    let result = centre_at(&*m, &base, &cli.test_sizes.0)
        .map_err(|e| -> CliError { format!("centre computation overflowed: {e}").into() })?;
    let labels: Vec<String> = result
        .central
        .iter()
        .map(|&i| result.ambient.label(i))
        .collect();
    if cli.json {
        println!(
            "{}",
            json!({
                "monad": m.name(),
                "base_size": base_size,
                "ambient_size": result.ambient.size(),
                "central": labels,
                "test_sizes": result.test_sizes,
                "stable": result.stable,
            })
        );
    } else {
        println!("monad: {}", m.name());
        println!("{result}");
        println!("central elements: {}", labels.join(", "));
    }
    Ok(0)
}

fn cmd_verify_laws(
    cli: &Cli,
    model: Option<&Path>,
    kind: MonadKind,
    max_size: usize,
    answers: usize,
    max_len: usize,
) -> Result<i32, CliError> {
    if max_size == 0 {
        return Err("--max-size must be at least 1".into());
    }
    let m = build_monad(cli, kind, model, answers, max_len)?;
    let sizes: Vec<usize> = (1..=max_size).collect();
    let report = check_monad_laws(&*m, &sizes);
    if cli.json {
        println!("{}", serde_json::to_string(&report)?);
    } else {
        println!("{report}");
    }
    Ok(if report.all_passed() { 0 } else { 1 })
}

fn cmd_verify_iso(
    cli: &Cli,
    model: Option<&Path>,
    kind: MonadKind,
    x_size: usize,
    y_size: usize,
    answers: usize,
    max_len: usize,
) -> Result<i32, CliError> {
    if x_size == 0 || y_size == 0 {
        return Err("--x-size and --y-size must be at least 1".into());
    }
    let m = build_monad(cli, kind, model, answers, max_len)?;
    let x = FinSet::of_size(x_size);
    let y = FinSet::of_size(y_size);
    let report = verify_centre_iso(&*m, &x, &y, &cli.test_sizes.0)
        .map_err(|e| -> CliError { format!("witness check overflowed: {e}").into() })?;
    if cli.json {
        println!(
            "{}",
            json!({
                "monad": report.monad,
                "x_size": report.x_size,
                "y_size": report.y_size,
                "kleisli": report.kleisli_count,
                "central": report.central_count,
                "factoring": report.factoring_count,
                "mismatches": report.mismatches,
            })
        );
    } else {
        println!("{report}");
    }
    Ok(if report.consistent() { 0 } else { 1 })
}

fn cmd_soundness(cli: &Cli, theory: &Path, model: &Path, fuzz: usize) -> Result<i32, CliError> {
    let th = load_theory(theory)?;
    let file = load_model_file(model)?;
    let m = file
        .build_writer_model_with_cap(&th, cli.size_cap)
        .map_err(|e| -> CliError { format!("in {}: {e}", model.display()).into() })?;
    if let Err(problems) = m.validate(&th, &cli.test_sizes.0) {
        if cli.json {
            let list: Vec<String> = problems.iter().map(|p| p.to_string()).collect();
            println!("{}", json!({ "sound": false, "structural": list }));
        } else {
            println!("model does not fit the theory:");
            for p in &problems {
                println!("  {p}");
            }
        }
        return Ok(1);
    }
    let report = check_model_soundness(&m, &th, fuzz, cli.seed);
    if cli.json {
        let violations: Vec<_> = report
            .axiom_violations
            .iter()
            .chain(report.fuzz_violations.iter())
            .map(|v| {
                json!({
                    "description": v.description,
                    "environment": v.environment,
                    "lhs_value": v.lhs_value,
                    "rhs_value": v.rhs_value,
                })
            })
            .collect();
        println!(
            "{}",
            json!({
                "sound": report.is_sound(),
                "axioms_checked": report.axioms_checked,
                "axiom_errors": report.axiom_errors,
                "fuzz_checked": report.fuzz_checked,
                "fuzz_skipped": report.fuzz_skipped,
                "violations": violations,
            })
        );
    } else {
        println!("{report}");
    }
    Ok(if report.is_sound() { 0 } else { 1 })
}

fn cmd_translate_check(
    cli: &Cli,
    translation: &Path,
    model: Option<&Path>,
) -> Result<i32, CliError> {
    let text = read_file(translation)?;
    let file = parse_translation_file(&text)
        .map_err(|e| -> CliError { format!("in {}: {e}", translation.display()).into() })?;
    let dir = translation.parent().unwrap_or_else(|| Path::new("."));
    let source = load_theory(&dir.join(&file.source))?;
    let target = load_theory(&dir.join(&file.target))?;
    let oracle = match model {
        Some(path) => Some(load_writer_model(cli, &target, path)?),
        None => None,
    };
    let tr = file.into_translation(source, target);
    let verdict = tr
        .check(oracle.as_ref(), cli.budget)
        .map_err(|e| -> CliError { format!("translation is unusable: {e}").into() })?;
    match verdict {
        TranslationVerdict::Verified => {
            if cli.json {
                println!("{}", json!({ "verdict": "verified" }));
            } else {
                println!("verified: every translated axiom holds in the target theory");
            }
            Ok(0)
        }
        TranslationVerdict::FailedAt {
            axiom_index,
            axiom,
            counter,
        } => {
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "verdict": "failed",
                        "axiom_index": axiom_index,
                        "axiom": axiom,
                        "model": counter.model,
                        "environment": counter.environment,
                        "lhs_value": counter.lhs_value,
                        "rhs_value": counter.rhs_value,
                    })
                );
            } else {
                println!("failed at axiom {axiom_index}: {axiom}");
                println!("{counter}");
            }
            Ok(1)
        }
        TranslationVerdict::Unknown {
            axiom_index,
            axiom,
            reason,
        } => {
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "verdict": "unknown",
                        "axiom_index": axiom_index,
                        "axiom": axiom,
                        "reason": reason,
                    })
                );
            } else {
                println!("unknown at axiom {axiom_index}: {axiom}");
                println!("  {reason}");
            }
            Ok(2)
        }
    }
}

fn cmd_d4_demo(cli: &Cli) -> Result<i32, CliError> {
    let d4 = fixtures::d4();
    let centre = fixtures::d4_centre();
    let centre_labels: Vec<String> = d4.centre_elements().iter().map(|&i| d4.label(i)).collect();
    let endo = central_endo_report(&d4, Some(&centre), &cli.test_sizes.0)
        .map_err(|e| -> CliError { format!("centre computation overflowed: {e}").into() })?;
    let th = fixtures::writer_theory(&d4, &centre);
    let model = fixtures::writer_model(&d4, &centre);
    let (lctx, lhs) = parse_term_file(&th, "do_T _ <- act_r; act_s")
        .map_err(|e| -> CliError { e.to_string().into() })?;
    let (_, rhs) = parse_term_file(&th, "do_T _ <- act_s; act_r")
        .map_err(|e| -> CliError { e.to_string().into() })?;
    let verdict = decide_equal(&th, &lctx, &lhs, &rhs, Some(&model), cli.budget)
        .map_err(|e| -> CliError { e.to_string().into() })?;

    let distinct = verdict.is_distinct();
    let ok = centre_labels == ["e", "r2"] && !endo.central_is_power_of_monoid_size && distinct;

    if cli.json {
        let witness = match &verdict {
            Verdict::Distinct(c) => {
                json!({ "lhs_value": c.lhs_value, "rhs_value": c.rhs_value })
            }
            _ => json!(null),
        };
        println!(
            "{}",
            json!({
                "monoid": "D4",
                "centre": centre_labels,
                "kleisli_endos": endo.kleisli_endos,
                "central_endos": endo.central_endos,
                "central_is_power_of_monoid_size": endo.central_is_power_of_monoid_size,
                "swap_refuted": distinct,
                "swap_witness": witness,
                "ok": ok,
            })
        );
    } else {
        println!("The dihedral group of the square has eight elements but only");
        println!(
            "two commute with everything: {}.",
            centre_labels.join(" and ")
        );
        println!();
        println!("{endo}");
        println!();
        println!("Sequencing two writer actions in different orders is observable:");
        println!("  {lhs}    vs    {rhs}");
        match &verdict {
            Verdict::Distinct(c) => println!("{c}"),
            other => println!("unexpectedly not refuted: {other:?}"),
        }
    }
    Ok(if ok { 0 } else { 1 })
}
