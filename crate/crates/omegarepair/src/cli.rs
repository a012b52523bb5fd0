//! Command-line front end. Every result is printed as `KEY VALUE` lines.
//!
//! Exit codes: 0 success, 1 usage, 2 parse or validation error, 3 infeasible
//! or infinite threshold, 4 size or budget limit, 5 oracle mismatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use omegarepair_core::impair::{graph_impair_threshold, graph_impair_witness, impair_product, project_witness};
use omegarepair_core::mask::{dsum_mask_bad_nba, limsup_bad_nba, mask_from_bad, sup_bad_nba};
use omegarepair_core::oracle::{compare_seed, GeneratorConfig, OracleBudget};
use omegarepair_core::product::restrict_domain;
use omegarepair_core::repair::{arena_repair_strategy, arena_repair_threshold, RepairInstance};
use omegarepair_core::strategy::worst_case;
use omegarepair_core::{
    eval_aggregator, kripke_to_nba, validate, Aggregator, Attainment, Error, KripkeStructure, Model, Nba, ProductOptions,
    Rational, RepairMachine, ThresholdResult,
};

use crate::format::{parse_model, serialize_nba, ModelFile, ParseError};
use crate::{dot, report};

pub const COMPLEMENT_LIMIT_VAR: &str = "OMEGAREPAIR_COMPLEMENT_LIMIT";

/// States of the strategy unfolding explored by `WORST_CASE`.
const UNFOLD_LIMIT: usize = 1 << 16;

/// Redraws allowed per oracle seed before it is reported as skipped.
const ORACLE_TRIES: usize = 20;

pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const INFEASIBLE: i32 = 3;
    pub const SIZE_LIMIT: i32 = 4;
    pub const MISMATCH: i32 = 5;
}

#[derive(Parser, Debug)]
#[command(name = "omegarepair", version, about = "Threshold repair, impairment and masking for weighted rewriting of Kripke traces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Aggregate a cost lasso.
    Eval(EvalArgs),
    /// Optimal repair threshold and a strategy achieving it.
    Repair(RepairArgs),
    /// Optimal impairment threshold and an attack witness.
    Impair(ImpairArgs),
    /// Mask of inputs with no bad rewrite within the threshold.
    Mask(MaskArgs),
    /// Synchronized product of structure, machine and specification.
    Product(ProductArgs),
    /// Compare solvers with brute force on seeded random instances.
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Take the aggregator from this machine.
    #[arg(long, conflicts_with = "aggregator", required_unless_present = "aggregator")]
    rm: Option<PathBuf>,
    /// `DSUM p/q`, `MEAN`, `SUP` or `LIMSUP`.
    #[arg(long)]
    aggregator: Option<String>,
    /// `p1,p2|c1,c2`.
    #[arg(long, allow_hyphen_values = true)]
    costs: String,
}

#[derive(Args, Debug)]
struct RepairArgs {
    #[arg(long)]
    kripke: PathBuf,
    #[arg(long)]
    rm: PathBuf,
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    epsilon: Option<String>,
    /// Write the strategy here.
    #[arg(long)]
    strategy: Option<PathBuf>,
    /// Write the arena here, strategy edges highlighted.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ImpairArgs {
    #[arg(long)]
    kripke: PathBuf,
    #[arg(long)]
    rm: PathBuf,
    #[arg(long)]
    bad: PathBuf,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    witness: Option<PathBuf>,
    #[arg(long)]
    witness_dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MaskArgs {
    #[arg(long)]
    kripke: PathBuf,
    #[arg(long)]
    rm: PathBuf,
    #[arg(long)]
    bad: PathBuf,
    #[arg(long)]
    threshold: String,
    #[arg(long)]
    epsilon: Option<String>,
    /// Chain depth, or `auto` for the isolation depth.
    #[arg(long, default_value = "auto")]
    depth: String,
    #[arg(short = 'o', long)]
    output: PathBuf,
    /// Write the bad-word automaton instead of the mask.
    #[arg(long)]
    bad_only: bool,
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProductArgs {
    #[arg(long)]
    kripke: PathBuf,
    #[arg(long)]
    rm: PathBuf,
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long)]
    max_prefix: Option<usize>,
    #[arg(long)]
    max_cycle: Option<usize>,
    #[arg(long, default_value_t = 24)]
    max_vertices: usize,
    #[arg(long, default_value_t = 512)]
    max_strategies: u64,
    #[arg(long, default_value_t = 200_000)]
    max_lassos: usize,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => exit::USAGE,
            Failure::Parse(_) => exit::PARSE,
            Failure::Core(e) => match e {
                Error::Parse(_) | Error::Malformed(_) | Error::AlphabetMismatch(_) | Error::BadDiscount => exit::PARSE,
                Error::Infeasible | Error::UndecidableMeanMask => exit::INFEASIBLE,
                Error::SizeLimit { .. } | Error::BudgetExceeded(_) => exit::SIZE_LIMIT,
                _ => exit::USAGE,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Parse(m) => m.clone(),
            Failure::Core(Error::UndecidableMeanMask) => {
                format!("{}; use SUP, LIMSUP or DSUM", Error::UndecidableMeanMask)
            }
            Failure::Core(e) => e.to_string(),
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Eval(a) => eval(a, out),
        Command::Repair(a) => repair(a, out),
        Command::Impair(a) => impair(a, out),
        Command::Mask(a) => mask(a, out),
        Command::Product(a) => product(a, out),
        Command::Oracle(a) => oracle(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn load(path: &Path, kind: &str) -> Result<ModelFile, Failure> {
    let text = read(path)?;
    let located = |e: ParseError| Failure::Parse(format!("{}: {e}", path.display()));
    let m = parse_model(&text).map_err(located)?;
    if m.kind() != kind {
        return Err(Failure::Parse(format!("{}: expected a {kind} file, found {}", path.display(), m.kind())));
    }
    let d = match &m {
        ModelFile::Kripke(k) => validate(Model::Kripke(k)),
        ModelFile::Nba(n) => validate(Model::Nba(n)),
        ModelFile::Rm(t) => validate(Model::Rm(t)),
    };
    if !d.is_ok() {
        let list: Vec<String> = d.errors.iter().map(|f| f.to_string()).collect();
        return Err(Failure::Parse(format!("{}: {}", path.display(), list.join("; "))));
    }
    Ok(m)
}

fn load_kripke(p: &Path) -> Result<KripkeStructure, Failure> {
    match load(p, "KRIPKE")? {
        ModelFile::Kripke(k) => Ok(k),
        _ => unreachable!(),
    }
}

fn load_nba(p: &Path) -> Result<Nba, Failure> {
    match load(p, "NBA")? {
        ModelFile::Nba(n) => Ok(n),
        _ => unreachable!(),
    }
}

fn load_rm(p: &Path) -> Result<RepairMachine, Failure> {
    match load(p, "RM")? {
        ModelFile::Rm(t) => Ok(t),
        _ => unreachable!(),
    }
}

fn rational(flag: &str, s: &str) -> Result<Rational, Failure> {
    s.parse().map_err(|_| Failure::Usage(format!("--{flag}: expected p/q, found `{s}`")))
}

fn epsilon(s: &Option<String>) -> Result<Option<Rational>, Failure> {
    let Some(s) = s else { return Ok(None) };
    let e = rational("epsilon", s)?;
    if !e.is_positive() {
        return Err(Error::NonPositiveEpsilon.into());
    }
    Ok(Some(e))
}

fn parse_aggregator(s: &str) -> Result<Aggregator, Failure> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    let agg = match parts.as_slice() {
        ["DSUM", l] => Aggregator::DSum(rational("aggregator", l)?),
        ["MEAN"] => Aggregator::Mean,
        ["SUP"] => Aggregator::Sup,
        ["LIMSUP"] => Aggregator::LimSup,
        _ => return Err(Failure::Usage(format!("--aggregator: expected `DSUM p/q`, MEAN, SUP or LIMSUP, found `{s}`"))),
    };
    agg.check().map_err(|_| Failure::Usage("--aggregator: discount factor must lie strictly between 0 and 1".into()))?;
    Ok(agg)
}

fn print_threshold(out: &mut dyn Write, r: &ThresholdResult) -> Result<(), Failure> {
    writeln!(out, "TAU* {} {}", r.value, r.attainment).and_then(|_| {
        writeln!(out, "MEMORY {}", r.memory)?;
        writeln!(out, "GOOD {}", r.good_set())?;
        writeln!(out, "BAD {}", r.bad_set())
    })
    .map_err(|e| Failure::Usage(e.to_string()))
}

fn io(e: std::io::Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn eval(a: EvalArgs, out: &mut dyn Write) -> Outcome {
    let agg = match (&a.rm, &a.aggregator) {
        (Some(p), _) => load_rm(p)?.aggregator().clone(),
        (None, Some(s)) => parse_aggregator(s)?,
        (None, None) => unreachable!("clap requires one of them"),
    };
    let costs = report::parse_costs(&a.costs).map_err(|m| Failure::Usage(format!("--costs: {m}")))?;
    writeln!(out, "VALUE {}", eval_aggregator(&agg, &costs)).map_err(io)?;
    Ok(exit::OK)
}

fn repair(a: RepairArgs, out: &mut dyn Write) -> Outcome {
    let (k, t, b) = (load_kripke(&a.kripke)?, load_rm(&a.rm)?, load_nba(&a.spec)?);
    let eps = epsilon(&a.epsilon)?;
    let inst = RepairInstance::new(&k, &t, &b, ProductOptions::default())?;
    let agg = &inst.aggregator;
    let r = arena_repair_threshold(&inst.arena, agg)?;
    print_threshold(out, &r)?;
    if r.value.is_infinite() {
        return Ok(exit::INFEASIBLE);
    }
    if eps.is_none() && a.strategy.is_none() && a.dot.is_none() {
        return Ok(exit::OK);
    }
    let eps = match (eps, agg) {
        (Some(e), _) => e,
        (None, Aggregator::Sup | Aggregator::LimSup) => Rational::one(),
        (None, _) => return Err(Failure::Usage("--epsilon is required for DSUM and MEAN strategies".into())),
    };
    let (_, s) = arena_repair_strategy(&inst.arena, agg, &eps)?;
    writeln!(out, "MODES {}", s.modes.len()).map_err(io)?;
    if let Ok(w) = worst_case(&s, &inst.arena, agg, UNFOLD_LIMIT) {
        writeln!(out, "WORST_CASE {w}").map_err(io)?;
    }
    if let Some(p) = &a.strategy {
        write_file(p, &report::strategy_text(&s))?;
    }
    if let Some(p) = &a.dot {
        let chosen: Vec<bool> = inst
            .arena
            .edges()
            .iter()
            .map(|e| s.modes.iter().any(|m| m.map.get(&e.src) == Some(&e.dst)))
            .collect();
        write_file(p, &dot::arena_dot(&k, &t, &b, &inst.arena, &chosen))?;
    }
    Ok(exit::OK)
}

fn impair(a: ImpairArgs, out: &mut dyn Write) -> Outcome {
    let (k, t, bad) = (load_kripke(&a.kripke)?, load_rm(&a.rm)?, load_nba(&a.bad)?);
    let eps = epsilon(&a.epsilon)?;
    let p = impair_product(&k, &t, &bad)?;
    let r = graph_impair_threshold(&p.graph, t.aggregator())?;
    print_threshold(out, &r)?;
    if r.value.is_infinite() {
        return Ok(exit::INFEASIBLE);
    }
    if eps.is_none() && a.witness.is_none() && a.witness_dot.is_none() {
        return Ok(exit::OK);
    }
    let eps = match eps {
        Some(e) => e,
        None if r.attainment == Attainment::Attained => Rational::one(),
        None => return Err(Failure::Usage("--epsilon is required when the threshold is only an infimum".into())),
    };
    let (_, gw) = graph_impair_witness(&p.graph, t.aggregator(), &eps)?;
    let w = project_witness(&k, &p, &gw)?;
    let text = report::witness_text(&k, &t, &bad, &w);
    out.write_all(text.as_bytes()).map_err(io)?;
    if let Some(path) = &a.witness {
        write_file(path, &text)?;
    }
    if let Some(path) = &a.witness_dot {
        write_file(path, &dot::witness_dot(&k, &t, &bad, &w))?;
    }
    Ok(exit::OK)
}

fn complement_limit() -> Result<usize, Failure> {
    match std::env::var(COMPLEMENT_LIMIT_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("{COMPLEMENT_LIMIT_VAR}: expected a state count, found `{v}`"))),
        Err(_) => Ok(omegarepair_core::complement::DEFAULT_COMPLEMENT_LIMIT),
    }
}

fn mask(a: MaskArgs, out: &mut dyn Write) -> Outcome {
    let (k, t, bad_spec) = (load_kripke(&a.kripke)?, load_rm(&a.rm)?, load_nba(&a.bad)?);
    let tau = rational("threshold", &a.threshold)?;
    if tau.is_negative() {
        return Err(Failure::Usage("--threshold must be non-negative".into()));
    }
    let eps = epsilon(&a.epsilon)?;
    let depth = match a.depth.as_str() {
        "auto" => None,
        d => Some(d.parse::<usize>().map_err(|_| Failure::Usage(format!("--depth: expected a number or auto, found `{d}`")))?),
    };
    let limit = complement_limit()?;
    let tq = restrict_domain(&t, &kripke_to_nba(&k)?)?;
    let bad = match t.aggregator() {
        Aggregator::Mean => return Err(Error::UndecidableMeanMask.into()),
        Aggregator::DSum(_) => {
            let eps = eps.ok_or_else(|| Failure::Usage("--epsilon (the isolation margin) is required for DSUM masks".into()))?;
            let m = dsum_mask_bad_nba(&tq, &bad_spec, &tau, &eps, depth)?;
            writeln!(out, "N_STAR {}", m.n_star).map_err(io)?;
            writeln!(out, "DEPTH {}", m.depth).map_err(io)?;
            writeln!(out, "DANGER_STATES {}", m.danger.len()).map_err(io)?;
            m.nba
        }
        Aggregator::Sup => sup_bad_nba(&tq, &bad_spec, &tau)?,
        Aggregator::LimSup => limsup_bad_nba(&tq, &bad_spec, &tau)?,
    };
    writeln!(out, "BAD_STATES {}", bad.num_states()).map_err(io)?;
    let result = if a.bad_only {
        bad
    } else {
        let m = mask_from_bad(&tq, &bad, limit)?;
        writeln!(out, "MASK_STATES {}", m.num_states()).map_err(io)?;
        m
    };
    write_file(&a.output, &serialize_nba(&result))?;
    if let Some(p) = &a.dot {
        write_file(p, &dot::nba_dot(&result))?;
    }
    Ok(exit::OK)
}

fn product(a: ProductArgs, out: &mut dyn Write) -> Outcome {
    let (k, t, b) = (load_kripke(&a.kripke)?, load_rm(&a.rm)?, load_nba(&a.spec)?);
    let p = omegarepair_core::build_product(&k, &t, &b, ProductOptions::default())?;
    let fin = p.final_vertices(&b).iter().filter(|&&f| f).count();
    let acc = (0..p.graph.edges().len()).filter(|&e| p.graph.is_accepting_edge(e)).count();
    writeln!(out, "VERTICES {}", p.vertices.len()).map_err(io)?;
    writeln!(out, "EDGES {}", p.graph.edges().len()).map_err(io)?;
    writeln!(out, "INITIAL {}", p.graph.initial().len()).map_err(io)?;
    writeln!(out, "FINAL {fin}").map_err(io)?;
    writeln!(out, "ACCEPTING_EDGES {acc}").map_err(io)?;
    if let Some(path) = &a.dot {
        write_file(path, &dot::product_dot(&k, &t, &b, &p))?;
    }
    Ok(exit::OK)
}

fn oracle(a: OracleArgs, out: &mut dyn Write) -> Outcome {
    let mut budget = OracleBudget { max_vertices: a.max_vertices, max_strategies: a.max_strategies, max_lassos: a.max_lassos, ..OracleBudget::default() };
    if let Some(p) = a.max_prefix {
        budget.max_prefix = p;
    }
    if let Some(c) = a.max_cycle {
        budget.max_cycle = c;
    }
    let cfg = GeneratorConfig::default();
    let (mut ok, mut bad, mut skipped) = (0u64, 0u64, 0u64);
    for seed in a.seed..a.seed.saturating_add(a.count) {
        match compare_seed(seed, &cfg, &budget, ORACLE_TRIES) {
            Ok(cs) => {
                for c in cs {
                    writeln!(out, "{}", c.report_line()).map_err(io)?;
                    if c.ok() {
                        ok += 1;
                    } else {
                        bad += 1;
                    }
                }
            }
            Err(Error::BudgetExceeded(why)) => {
                writeln!(out, "SEED {seed} SKIPPED {}", why.replace(' ', "_")).map_err(io)?;
                skipped += 1;
            }
            Err(e) => return Err(e.into()),
        }
    }
    writeln!(out, "SUMMARY OK {ok} MISMATCH {bad} SKIPPED {skipped}").map_err(io)?;
    Ok(if bad > 0 { exit::MISMATCH } else { exit::OK })
}

