//! `generic`: build generic structures, check their properties, and run the
//! amalgamation constructions on files.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or parse error,
//! 3 `--verify` failed, 4 a precondition of the requested operation failed.

mod dot;
mod io;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use generic_structures::analysis::{extension_property_report, one_point_homogeneity, universality_check};
use generic_structures::autorder::{build_automorphic_order, lemma3_amalgamate, validate_aut_condition, AutError};
use generic_structures::classes::{amalgamate, check_property, membership, ClassError, Property};
use generic_structures::forcing::{
    crossing_amalgamation, generic_build, schedule_for, stronger, Condition, CrossingSpec, ForcingError,
};
use generic_structures::{ClassTag, Elem, Embedding, FinStructure, StructureError};
use serde_json::{json, Value};

#[derive(Debug)]
pub enum Failure {
    CheckFailed,
    Usage(String),
    Verify(String),
    Precondition(&'static str, String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::CheckFailed => 1,
            Failure::Usage(_) => 2,
            Failure::Verify(_) => 3,
            Failure::Precondition(..) => 4,
        }
    }
}

impl From<ClassError> for Failure {
    fn from(e: ClassError) -> Self {
        match e {
            ClassError::UnknownClass(_) | ClassError::ScaleExceeded(_) => Failure::Usage(e.to_string()),
            _ => Failure::Precondition(e.name(), e.to_string()),
        }
    }
}

impl From<ForcingError> for Failure {
    fn from(e: ForcingError) -> Self {
        match e {
            ForcingError::Class(c) => c.into(),
            ForcingError::EmptySchedule => Failure::Usage(e.to_string()),
            _ => Failure::Precondition(e.name(), e.to_string()),
        }
    }
}

impl From<AutError> for Failure {
    fn from(e: AutError) -> Self {
        Failure::Precondition(e.name(), e.to_string())
    }
}

impl From<StructureError> for Failure {
    fn from(e: StructureError) -> Self {
        Failure::Precondition("StructureError", e.to_string())
    }
}

pub fn parse_class(name: &str) -> Result<ClassTag, Failure> {
    name.parse().map_err(|e: ClassError| Failure::Usage(e.to_string()))
}

#[derive(Parser)]
#[command(name = "generic", version, about = "Generic structures from finite conditions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the round-robin generic build and write the artifact.
    Build(BuildArgs),
    /// Check a structure (extension, universality, homogeneity) or a class (HP, JEP, AP, SAP).
    Check(CheckArgs),
    /// Amalgamate two structures or conditions.
    Amalgamate(AmalgamateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args)]
struct BuildArgs {
    /// A class name, or AutOrder for the automorphic order.
    #[arg(long)]
    class: String,
    /// Requirements range over the points 0..n.
    #[arg(long, default_value_t = 5)]
    n: Elem,
    /// Number of steps; one pass of the schedule by default.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Re-check the result; exit 3 if any check fails.
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the step log here, one line per step.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Base point of the orbit requirements (AutOrder only).
    #[arg(long, default_value_t = 0)]
    alpha0: Elem,
}

#[derive(Args)]
struct CheckArgs {
    /// extension, universality, homogeneity, HP, JEP, AP or SAP.
    #[arg(long)]
    property: String,
    /// Needed unless the input artifact names its class.
    #[arg(long)]
    class: Option<String>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Size bound for class properties.
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Classic,
    Lemma3,
    Crossing,
}

#[derive(Args)]
struct AmalgamateArgs {
    #[arg(long, value_enum)]
    op: Op,
    #[arg(long)]
    class: Option<String>,
    #[arg(long)]
    left: PathBuf,
    #[arg(long)]
    right: PathBuf,
    /// Base structure (classic); empty when omitted.
    #[arg(long)]
    base: Option<PathBuf>,
    /// Embedding of the base into the left factor, "x:y,..."; inclusion by default.
    #[arg(long)]
    f: Option<String>,
    /// Embedding of the base into the right factor; inclusion by default.
    #[arg(long)]
    g: Option<String>,
    /// Shared points, "r1,r2,..." (lemma3, crossing).
    #[arg(long, default_value = "")]
    root: String,
    /// Isomorphism from the left condition onto the right one (lemma3).
    #[arg(long)]
    map: Option<String>,
    #[arg(long)]
    a: Option<Elem>,
    #[arg(long)]
    b: Option<Elem>,
    #[arg(long)]
    s: Option<Elem>,
    #[arg(long)]
    sbar: Option<Elem>,
    #[arg(long)]
    t: Option<Elem>,
    #[arg(long)]
    tbar: Option<Elem>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GENERIC_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Build(a) => build(a),
        Command::Check(a) => check(a),
        Command::Amalgamate(a) => amalgamate_cmd(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::CheckFailed => {}
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Verify(m) => eprintln!("verification failed: {m}"),
                Failure::Precondition(name, m) if m.starts_with(name) => eprintln!("error: {m}"),
                Failure::Precondition(name, m) => eprintln!("error: {name}: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn build(args: BuildArgs) -> Result<(), Failure> {
    if args.class == "AutOrder" {
        return build_aut(args);
    }
    let tag = parse_class(&args.class)?;
    let schedule = schedule_for(tag, args.n)?;
    let steps = args.steps.unwrap_or(schedule.len());
    let chain = generic_build(tag, &schedule, steps, args.seed)?;
    if args.verify {
        let m = chain.structure();
        if !membership(tag, m)? {
            return Err(Failure::Verify(format!("result is not a {tag}")));
        }
        for (i, w) in chain.steps.windows(2).enumerate() {
            if !stronger(&w[1], &w[0])? {
                return Err(Failure::Verify(format!("step {} does not extend step {i}", i + 1)));
            }
        }
        for req in schedule.iter().take(steps) {
            if !req.is_satisfied(chain.last())? {
                return Err(Failure::Verify(format!("requirement {} is not met", req.name())));
            }
        }
    }
    if let Some(path) = &args.log {
        io::emit(Some(path), &chain.log_lines().join("\n"))?;
    }
    let text = match args.format {
        Format::Json => io::pretty(&chain.to_json()),
        Format::Dot => dot::structure(tag, chain.structure()),
    };
    io::emit(args.out.as_deref(), &text)
}

fn build_aut(args: BuildArgs) -> Result<(), Failure> {
    let b = build_automorphic_order(args.n, args.steps, args.seed, args.alpha0);
    let p = &b.condition;
    if args.verify {
        if let Some(item) = validate_aut_condition(&p.to_raw()).item() {
            return Err(Failure::Verify(format!("condition violates item {item}")));
        }
        let steps = b.log.len();
        for req in b.schedule.iter().take(steps) {
            if !req.is_satisfied(p) {
                return Err(Failure::Verify(format!("requirement {} is not met", req.name())));
            }
        }
    }
    let lines: Vec<String> = b.log.iter().map(|e| e.line()).collect();
    if let Some(path) = &args.log {
        io::emit(Some(path), &lines.join("\n"))?;
    }
    let text = match args.format {
        Format::Json => io::pretty(&json!({
            "class": "AutOrder",
            "condition": p.to_doc(),
            "log": lines,
            "report": b.report_lines(),
        })),
        Format::Dot => dot::aut_order(p),
    };
    io::emit(args.out.as_deref(), &text)
}

fn check(args: CheckArgs) -> Result<(), Failure> {
    let explicit = args.class.as_deref().map(parse_class).transpose()?;
    if let Ok(property) = args.property.parse::<Property>() {
        let tag = explicit.ok_or_else(|| Failure::Usage("class properties need --class".into()))?;
        let verdict = check_property(tag, property, args.n)?;
        let doc = json!({
            "class": tag.name(),
            "property": property.to_string(),
            "n": args.n,
            "holds": verdict.holds(),
            "counterexample": verdict.counterexample().map(|c| c.to_json()),
        });
        io::emit(args.out.as_deref(), &io::pretty(&doc))?;
        return if verdict.holds() { Ok(()) } else { Err(Failure::CheckFailed) };
    }
    let input = args.input.as_deref().ok_or_else(|| Failure::Usage("--in is required".into()))?;
    let (found, m) = io::read_structure(input)?;
    let tag = explicit
        .or(found)
        .ok_or_else(|| Failure::Usage("the class is unknown; pass --class".into()))?;
    let report = match args.property.as_str() {
        "extension" => extension_property_report(&m, tag, args.k)?,
        "universality" => universality_check(&m, tag, args.k)?,
        "homogeneity" => one_point_homogeneity(&m, tag, args.k)?,
        other => return Err(Failure::Usage(format!("unknown property {other:?}"))),
    };
    io::emit(args.out.as_deref(), &report.to_json())?;
    if report.passed() {
        Ok(())
    } else {
        eprintln!("{} of {} items failed", report.failures().len(), report.items.len());
        Err(Failure::CheckFailed)
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required for this operation")))
}

fn amalgamate_cmd(args: AmalgamateArgs) -> Result<(), Failure> {
    match args.op {
        Op::Classic => classic(&args),
        Op::Lemma3 => lemma3(&args),
        Op::Crossing => crossing(&args),
    }
}

fn class_of(args: &AmalgamateArgs, left: Option<ClassTag>, right: Option<ClassTag>) -> Result<ClassTag, Failure> {
    if let Some(name) = &args.class {
        return parse_class(name);
    }
    match (left, right) {
        (Some(a), Some(b)) if a != b => Err(Failure::Usage(format!("inputs disagree on the class: {a} vs {b}"))),
        (Some(a), _) | (None, Some(a)) => Ok(a),
        (None, None) => Err(Failure::Usage("the class is unknown; pass --class".into())),
    }
}

fn embedding_arg(
    text: Option<&str>,
    base: &FinStructure,
    target: &FinStructure,
) -> Result<Embedding, Failure> {
    let map: BTreeMap<Elem, Elem> = match text {
        Some(t) => io::parse_map(t)?,
        None => base.universe().iter().map(|&x| (x, x)).collect(),
    };
    Ok(Embedding::new(base, target, map)?)
}

fn classic(args: &AmalgamateArgs) -> Result<(), Failure> {
    let (lt, left) = io::read_structure(&args.left)?;
    let (rt, right) = io::read_structure(&args.right)?;
    let tag = class_of(args, lt, rt)?;
    let base = match &args.base {
        Some(p) => io::read_structure(p)?.1,
        None => FinStructure::empty(left.sig().clone()),
    };
    let base = base.widen(left.sig())?;
    let f = embedding_arg(args.f.as_deref(), &base, &left)?;
    let g = embedding_arg(args.g.as_deref(), &base, &right)?;
    let am = amalgamate(tag, &base, &left, &right, &f, &g)?;
    let (lmap, rmap) = (io::render_pairs(am.left.map()), io::render_pairs(am.right.map()));
    let doc = json!({
        "class": tag.name(),
        "structure": am.result.to_doc(),
        "left": lmap,
        "right": rmap,
    });
    write_result(args.out.as_deref(), &doc, &[("left", &lmap), ("right", &rmap)])
}

fn lemma3(args: &AmalgamateArgs) -> Result<(), Failure> {
    let l1 = io::read_aut(&args.left)?;
    let l2 = io::read_aut(&args.right)?;
    let root = io::parse_set(&args.root)?;
    let h = io::parse_map(&need(args.map.as_deref(), "map")?)?;
    let c = lemma3_amalgamate(&l1, &l2, &root, &h, need(args.a, "a")?, need(args.b, "b")?)?;
    let doc = json!({ "class": "AutOrder", "condition": c.to_doc() });
    write_result(args.out.as_deref(), &doc, &[])
}

fn crossing(args: &AmalgamateArgs) -> Result<(), Failure> {
    let (lt, left) = io::read_structure(&args.left)?;
    let (rt, right) = io::read_structure(&args.right)?;
    let tag = class_of(args, lt, rt)?;
    let p_s = Condition::new(tag, left)?;
    let p_t = Condition::new(tag, right)?;
    let root = io::parse_set(&args.root)?;
    let spec = CrossingSpec {
        s: need(args.s, "s")?,
        sbar: need(args.sbar, "sbar")?,
        t: need(args.t, "t")?,
        tbar: need(args.tbar, "tbar")?,
    };
    let r = crossing_amalgamation(&p_s, &p_t, &root, spec)?;
    let doc = json!({ "class": tag.name(), "structure": r.structure().to_doc() });
    write_result(args.out.as_deref(), &doc, &[])
}

/// With `--out`, the witness maps are echoed on stdout as `name=pairs`.
fn write_result(out: Option<&Path>, doc: &Value, maps: &[(&str, &String)]) -> Result<(), Failure> {
    io::emit(out, &io::pretty(doc))?;
    if out.is_some() {
        for (name, pairs) in maps {
            println!("{name}={pairs}");
        }
    }
    Ok(())
}
