//! `ncheck`: command-line front end for the noncontingency toolkit.
//!
//! [`run`] takes the argument vector and returns the exit code with the
//! full report, so tests can drive every subcommand in process.
//!
//! Exit codes: 0 holds / ok, 1 refuted (witness printed), 2 inconclusive,
//! 64 usage or input error.

pub mod fixtures;
pub mod repro;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use noncontingency::equivalence::{distinguishing_formula, equivalent, EquivalenceError};
use noncontingency::kripke::{check_property, parse_pointed_model, print_model, print_pointed_model, to_dot};
use noncontingency::morphisms::{check_frame_morphism, check_model_morphism, parse_map};
use noncontingency::proofs::{check_proof, parse_proof, Library};
use noncontingency::semantics::satisfies_at;
use noncontingency::syntax::{language_of, modal_depth, vars};
use noncontingency::transforms::{reflexive_closure, reflexivize_endpoints, serialize, symmetrize, TransformResult};
use noncontingency::validity::{countermodel_search, SearchBudget, SearchOutcome};
use noncontingency::{parse, LanguageTag, Model, PropertyTag, WorldId};

pub const OK: i32 = 0;
pub const REFUTED: i32 = 1;
pub const INCONCLUSIVE: i32 = 2;
pub const USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "ncheck", version, about = "Model checking, equivalence, validity and proof checking for [.] and [+]")]
struct Cli {
    /// Emit a JSON object instead of the text report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse a formula and print it canonically.
    Parse { formula: String },
    /// Evaluate a formula at a world.
    Mc {
        model: String,
        /// World to evaluate at; defaults to the model's `point:`.
        #[arg(long)]
        at: Option<String>,
        formula: String,
    },
    /// Compare two pointed models in a language.
    Equiv {
        model1: String,
        #[arg(long)]
        at1: Option<String>,
        model2: String,
        #[arg(long)]
        at2: Option<String>,
        #[arg(long, value_enum, default_value_t = Lang::Dot)]
        lang: Lang,
        /// Comma-separated variables; defaults to those declared in either model.
        #[arg(long)]
        vars: Option<String>,
    },
    /// Check a world map against the (Var), (Forth) and (Back) conditions.
    Morphism {
        model1: String,
        model2: String,
        map: String,
        /// Ignore valuations.
        #[arg(long)]
        frame: bool,
    },
    /// Apply a model transformation and print the result.
    Transform {
        #[arg(value_enum)]
        kind: TransformKind,
        model: String,
    },
    /// Report every frame property.
    Props { model: String },
    /// Exhaustive validity check over small frames of a class.
    Valid {
        formula: String,
        #[arg(long, default_value = "all")]
        class: String,
        #[arg(long)]
        max_worlds: Option<usize>,
    },
    /// Search for a countermodel within the budget.
    Counter {
        formula: String,
        #[arg(long, default_value = "all")]
        class: String,
        #[arg(long)]
        max_worlds: Option<usize>,
    },
    /// Proof scripts.
    Proof {
        #[command(subcommand)]
        action: ProofCmd,
    },
    /// Replay built-in fixtures.
    Repro {
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        all: bool,
    },
    /// Graphviz rendering of a model.
    Dot { model: String },
}

#[derive(Subcommand, Debug)]
enum ProofCmd {
    /// Check a proof file.
    Check {
        file: String,
        /// Directory of proofs to import theorems from; defaults to the built-in proofs.
        #[arg(long)]
        lib: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Lang {
    Dot,
    Plus,
    Full,
}

impl Lang {
    fn tag(self) -> LanguageTag {
        match self {
            Lang::Dot => LanguageTag::Ldot,
            Lang::Plus => LanguageTag::Lplus,
            Lang::Full => LanguageTag::Lfull,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Lang::Dot => "L(⊡)",
            Lang::Plus => "L(⊞)",
            Lang::Full => "Lfull",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TransformKind {
    Serialize,
    Symmetrize,
    ReflexiveClosure,
    ReflexivizeEndpoints,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Budget(String),
}

fn input(e: impl ToString) -> CliError {
    CliError::Input(e.to_string())
}

/// A finished command: exit code, text report, JSON report.
struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl Report {
    fn new(code: i32, text: impl Into<String>, json: Value) -> Self {
        Report { code, text: text.into(), json }
    }
}

/// Runs one command line. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            return (code, e.render().to_string());
        }
    };
    let json = cli.json;
    match dispatch(cli.cmd) {
        Ok(r) if json => (r.code, format!("{}\n", r.json)),
        Ok(r) => {
            let mut text = r.text;
            if !text.ends_with('\n') {
                text.push('\n');
            }
            (r.code, text)
        }
        Err(e) => {
            let code = match e {
                CliError::Input(_) => USAGE,
                CliError::Budget(_) => INCONCLUSIVE,
            };
            if json {
                (code, format!("{}\n", json!({"verdict": "error", "error": e.to_string()})))
            } else {
                (code, format!("error: {e}\n"))
            }
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<Report, CliError> {
    match cmd {
        Cmd::Parse { formula } => cmd_parse(&formula),
        Cmd::Mc { model, at, formula } => cmd_mc(&model, at.as_deref(), &formula),
        Cmd::Equiv { model1, at1, model2, at2, lang, vars } => {
            cmd_equiv(&model1, at1.as_deref(), &model2, at2.as_deref(), lang, vars.as_deref())
        }
        Cmd::Morphism { model1, model2, map, frame } => cmd_morphism(&model1, &model2, &map, frame),
        Cmd::Transform { kind, model } => cmd_transform(kind, &model),
        Cmd::Props { model } => cmd_props(&model),
        Cmd::Valid { formula, class, max_worlds } => cmd_search(&formula, &class, max_worlds, false),
        Cmd::Counter { formula, class, max_worlds } => cmd_search(&formula, &class, max_worlds, true),
        Cmd::Proof { action: ProofCmd::Check { file, lib } } => cmd_proof(&file, lib.as_deref()),
        Cmd::Repro { name, all } => cmd_repro(name.as_deref(), all),
        Cmd::Dot { model } => cmd_dot(&model),
    }
}

/// Reads a file, falling back to the embedded fixture of the same name.
fn read_source(arg: &str) -> Result<String, CliError> {
    match std::fs::read_to_string(arg) {
        Ok(s) => Ok(s),
        Err(e) => fixtures::lookup(arg).map(str::to_string).ok_or_else(|| input(format!("{arg}: {e}"))),
    }
}

fn load_model(arg: &str) -> Result<(Model, Option<WorldId>), CliError> {
    parse_pointed_model(&read_source(arg)?).map_err(|e| input(format!("{arg}: {e}")))
}

fn world(m: &Model, arg: &str, given: Option<&str>, point: Option<WorldId>) -> Result<WorldId, CliError> {
    match given {
        Some(name) => m.index_of(name).ok_or_else(|| input(format!("{arg}: no world named '{name}'"))),
        None => point.ok_or_else(|| input(format!("{arg}: no world given and no 'point:' line"))),
    }
}

fn cmd_parse(src: &str) -> Result<Report, CliError> {
    let f = parse(src).map_err(input)?;
    let v: Vec<String> = vars(&f).into_iter().collect();
    let lang = language_of(&f);
    let depth = modal_depth(&f);
    let text = format!("{f}\nlanguage: {lang}\ndepth: {depth}\nvariables: {}", v.join(" "));
    Ok(Report::new(
        OK,
        text,
        json!({"verdict": "ok", "formula": f.to_string(), "language": lang.to_string(), "depth": depth, "variables": v}),
    ))
}

fn cmd_mc(arg: &str, at: Option<&str>, src: &str) -> Result<Report, CliError> {
    let (m, point) = load_model(arg)?;
    let w = world(&m, arg, at, point)?;
    let f = parse(src).map_err(input)?;
    let holds = satisfies_at(&m, w, &f);
    Ok(Report::new(
        if holds { OK } else { REFUTED },
        holds.to_string(),
        json!({"verdict": holds.to_string(), "world": m.world_name(w), "formula": f.to_string()}),
    ))
}

fn cmd_equiv(
    a1: &str,
    at1: Option<&str>,
    a2: &str,
    at2: Option<&str>,
    lang: Lang,
    vars: Option<&str>,
) -> Result<Report, CliError> {
    let (m1, p1) = load_model(a1)?;
    let (m2, p2) = load_model(a2)?;
    let (w1, w2) = (world(&m1, a1, at1, p1)?, world(&m2, a2, at2, p2)?);
    let varset: Vec<String> = match vars {
        Some(s) => s.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect(),
        None => {
            let mut v: Vec<String> = m1.declared_vars().chain(m2.declared_vars()).map(String::from).collect();
            v.sort();
            v.dedup();
            v
        }
    };
    let fail = |e: EquivalenceError| match e {
        EquivalenceError::ClassCap { .. } | EquivalenceError::Budget(_) => CliError::Budget(e.to_string()),
        _ => input(e),
    };
    let r = equivalent(&m1, w1, &m2, w2, lang.tag(), &varset).map_err(fail)?;
    if r.equivalent {
        let steps = r.fixpoint.map_or("unknown".into(), |k| k.to_string());
        return Ok(Report::new(
            OK,
            format!("{}-equivalent (partition stable after {steps} refinement steps)", lang.label()),
            json!({"verdict": "equivalent", "language": lang.tag().to_string(), "fixpoint": r.fixpoint}),
        ));
    }
    let f = distinguishing_formula(&m1, w1, &m2, w2, lang.tag(), &varset)
        .map_err(fail)?
        .ok_or_else(|| input("refinement separated the points but produced no formula"))?;
    let depth = r.separation_depth.unwrap_or(0);
    Ok(Report::new(
        REFUTED,
        format!("{} distinguishes at depth {depth} via {f}", lang.label()),
        json!({
            "verdict": "inequivalent",
            "language": lang.tag().to_string(),
            "separation_depth": depth,
            "formula": f.to_string(),
        }),
    ))
}

fn cmd_morphism(a1: &str, a2: &str, map: &str, frame_only: bool) -> Result<Report, CliError> {
    let (src, _) = load_model(a1)?;
    let (tgt, _) = load_model(a2)?;
    let f = parse_map(&read_source(map)?, src.frame(), tgt.frame()).map_err(input)?;
    let report = if frame_only {
        check_frame_morphism(src.frame(), tgt.frame(), &f)
    } else {
        let vars: Vec<String> = src.declared_vars().map(String::from).collect();
        check_model_morphism(&src, &tgt, &f, &vars)
    }
    .map_err(input)?;
    let ok = report.is_morphism();
    let kind = if frame_only { "frame" } else { "model" };
    let head = if ok {
        format!("{} {kind} ⊡-morphism", if report.surjective { "surjective" } else { "non-surjective" })
    } else {
        format!("not a {kind} ⊡-morphism")
    };
    Ok(Report::new(
        if ok { OK } else { REFUTED },
        format!("{head}\n{}", report.describe(src.frame(), tgt.frame())),
        json!({
            "verdict": if ok { "morphism" } else { "not-morphism" },
            "var": report.var_ok,
            "forth": report.forth_ok,
            "back": report.back_ok,
            "surjective": report.surjective,
        }),
    ))
}

fn cmd_transform(kind: TransformKind, arg: &str) -> Result<Report, CliError> {
    let (m, _) = load_model(arg)?;
    let result: TransformResult = match kind {
        TransformKind::Serialize => serialize(&m),
        TransformKind::ReflexiveClosure => reflexive_closure(&m),
        TransformKind::ReflexivizeEndpoints => reflexivize_endpoints(&m),
        TransformKind::Symmetrize => match symmetrize(&m) {
            Ok(r) => r,
            Err(e) => {
                return Ok(Report::new(
                    REFUTED,
                    e.to_string(),
                    json!({"verdict": "rejected", "error": e.to_string()}),
                ))
            }
        },
    };
    let text = print_model(&result.output);
    let morphism = result.report.is_morphism();
    Ok(Report::new(
        OK,
        format!(
            "{text}# map to input: {}\n# {}",
            result.map.print(result.output.frame(), m.frame()).trim_end().replace('\n', ", "),
            result.report.describe(result.output.frame(), m.frame()).replace('\n', "\n# ")
        ),
        json!({"verdict": "ok", "model": text, "morphism": morphism, "surjective": result.report.surjective}),
    ))
}

fn cmd_props(arg: &str) -> Result<Report, CliError> {
    let (m, _) = load_model(arg)?;
    let mut lines = Vec::new();
    let mut obj = serde_json::Map::new();
    for tag in PropertyTag::ALL_TAGS {
        let r = check_property(m.frame(), tag);
        lines.push(format!("{tag}: {}", r.describe(m.frame())));
        obj.insert(tag.name().into(), Value::Bool(r.holds));
    }
    Ok(Report::new(OK, lines.join("\n"), json!({"verdict": "ok", "properties": obj})))
}

fn cmd_search(src: &str, class: &str, max_worlds: Option<usize>, counter: bool) -> Result<Report, CliError> {
    let f = parse(src).map_err(input)?;
    let tag: PropertyTag = class.parse().map_err(input)?;
    let mut budget = SearchBudget::from_env().map_err(input)?;
    if let Some(n) = max_worlds {
        budget.max_worlds = n;
    }
    budget.max_vars = budget.max_vars.max(vars(&f).len().min(4));
    Ok(match countermodel_search(&f, tag, budget).map_err(input)? {
        SearchOutcome::Countermodel(c) => {
            let model = print_pointed_model(&c.model, c.point);
            Report::new(
                REFUTED,
                format!("countermodel ({} worlds, {tag}):\n{model}", c.model.size()),
                json!({"verdict": "countermodel", "worlds": c.model.size(), "model": model}),
            )
        }
        SearchOutcome::ValidWithinBudget { max_worlds, frames_checked } => Report::new(
            OK,
            if counter { "no countermodel within budget".to_string() } else { "valid within budget".to_string() },
            json!({"verdict": "valid-within-budget", "max_worlds": max_worlds, "frames_checked": frames_checked}),
        ),
        SearchOutcome::Inconclusive { worlds, frames_checked } => Report::new(
            INCONCLUSIVE,
            format!("inconclusive: frame cap reached at {worlds} worlds after {frames_checked} frames"),
            json!({"verdict": "inconclusive", "worlds": worlds, "frames_checked": frames_checked}),
        ),
    })
}

/// Library built from the embedded proofs.
pub fn builtin_library() -> Library {
    let mut lib = Library::default();
    let proofs: Vec<_> = fixtures::proof_stems()
        .filter_map(|(stem, text)| parse_proof(text).ok().map(|p| (stem, p)))
        .collect();
    loop {
        let before = lib.theorems.len();
        for (stem, p) in &proofs {
            if !lib.theorems.contains_key(*stem) && check_proof(p, &lib).ok {
                lib.insert(stem, p.system, p.conclusion().expect("nonempty").clone());
            }
        }
        if lib.theorems.len() == before {
            return lib;
        }
    }
}

fn cmd_proof(file: &str, lib_dir: Option<&Path>) -> Result<Report, CliError> {
    let proof = parse_proof(&read_source(file)?).map_err(|e| input(format!("{file}: {e}")))?;
    let lib = match lib_dir {
        Some(d) => Library::load_dir(d).map_err(input)?,
        None => builtin_library(),
    };
    let report = check_proof(&proof, &lib);
    Ok(match report.first_bad_line {
        None => {
            let concl = proof.conclusion().expect("nonempty").to_string();
            Report::new(
                OK,
                format!("ok: {} lines in {}, proves {concl}", proof.lines.len(), proof.system),
                json!({"verdict": "ok", "system": proof.system.name(), "lines": proof.lines.len(), "conclusion": concl}),
            )
        }
        Some((line, why)) => Report::new(
            REFUTED,
            format!("rejected at line {line}: {why}"),
            json!({"verdict": "rejected", "first_bad_line": line, "reason": why.to_string()}),
        ),
    })
}

fn cmd_repro(name: Option<&str>, all: bool) -> Result<Report, CliError> {
    if let (Some(n), false) = (name, all) {
        let r = repro::run_fixture(n).ok_or_else(|| {
            input(format!("unknown fixture '{n}' (known: {})", repro::NAMES.join(", ")))
        })?;
        return Ok(match r {
            Ok(s) => Report::new(OK, s.clone(), json!({"verdict": "pass", "fixture": n, "summary": s})),
            Err(e) => Report::new(REFUTED, format!("FAIL: {e}"), json!({"verdict": "fail", "fixture": n, "error": e})),
        });
    }
    if !all {
        return Err(input("repro needs a fixture name or --all"));
    }
    let mut lines = vec![format!("ncheck {} repro --all", env!("CARGO_PKG_VERSION"))];
    let mut results = Vec::new();
    let mut passed = 0;
    for n in repro::NAMES {
        match repro::run_fixture(n).expect("listed fixture") {
            Ok(s) => {
                passed += 1;
                lines.push(format!("PASS {n}: {s}"));
                results.push(json!({"fixture": n, "verdict": "pass", "summary": s}));
            }
            Err(e) => {
                lines.push(format!("FAIL {n}: {e}"));
                results.push(json!({"fixture": n, "verdict": "fail", "error": e}));
            }
        }
    }
    let total = repro::NAMES.len();
    lines.push(format!("{passed}/{total} fixtures pass"));
    let ok = passed == total;
    Ok(Report::new(
        if ok { OK } else { REFUTED },
        lines.join("\n"),
        json!({"verdict": if ok { "pass" } else { "fail" }, "fixtures": results}),
    ))
}

fn cmd_dot(arg: &str) -> Result<Report, CliError> {
    let (m, _) = load_model(arg)?;
    let vars: Vec<String> = m.declared_vars().map(String::from).collect();
    let dot = to_dot(&m, &vars);
    Ok(Report::new(OK, dot.clone(), json!({"verdict": "ok", "dot": dot})))
}
