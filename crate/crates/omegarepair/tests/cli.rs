use std::path::PathBuf;
use std::process::Command;

use omegarepair::cli::{exit, run, COMPLEMENT_LIMIT_VAR};
use omegarepair::report::parse_strategy;
use omegarepair::{parse_nba, serialize_model, ModelFile};
use omegarepair_core::fixtures::*;
use omegarepair_core::lasso::Lasso;
use omegarepair_core::membership::lasso_from_names;
use omegarepair_core::{lasso_membership, Aggregator, Rational};

fn fx(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn cli(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("omegarepair").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

/// Value of the first `KEY ...` line.
fn field<'a>(out: &'a str, key: &str) -> Option<&'a str> {
    out.lines().find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
}

#[test]
fn eval_prints_the_appendix_value() {
    let r = cli(&["eval", "--aggregator", "DSUM 1/2", "--costs", "2,0|1,4"]);
    assert_eq!((r.code, r.out.as_str()), (exit::OK, "VALUE 3/1\n"));
    for (agg, v) in [("SUP", "4/1"), ("LIMSUP", "4/1"), ("MEAN", "5/2")] {
        assert_eq!(field(&cli(&["eval", "--aggregator", agg, "--costs", "2,0|1,4"]).out, "VALUE"), Some(v));
    }
    let r = cli(&["eval", "--rm", &fx("appendix.rm"), "--costs", "2,0|1,4"]);
    assert_eq!(field(&r.out, "VALUE"), Some("3/1"));
    assert_eq!(field(&cli(&["eval", "--aggregator", "MEAN", "--costs", "|3"]).out, "VALUE"), Some("3/1"));
}

#[test]
fn eval_rejects_bad_arguments() {
    assert_eq!(cli(&["eval", "--aggregator", "MEAN", "--costs", "1,2"]).code, exit::USAGE);
    assert_eq!(cli(&["eval", "--aggregator", "MEAN", "--costs", "1|"]).code, exit::USAGE);
    assert_eq!(cli(&["eval", "--aggregator", "DSUM 2", "--costs", "|1"]).code, exit::USAGE);
    assert_eq!(cli(&["eval", "--costs", "|1"]).code, exit::USAGE);
    assert_eq!(cli(&["eval", "--rm", &fx("printer.nba"), "--costs", "|1"]).code, exit::PARSE);
    assert_eq!(cli(&["eval", "--rm", "/nonexistent/x.rm", "--costs", "|1"]).code, exit::USAGE);
}

#[test]
fn usage_errors_exit_one() {
    let r = cli(&["frobnicate"]);
    assert_eq!(r.code, exit::USAGE);
    assert!(r.err.contains("unrecognized subcommand"));
    assert_eq!(cli(&["repair", "--kripke", &fx("printer.kripke")]).code, exit::USAGE);
    assert_eq!(cli(&[]).code, exit::USAGE);
    assert_eq!(cli(&["--help"]).code, exit::OK);
}

#[test]
fn impair_on_dsum_inf_reports_an_infimum() {
    let args = ["impair", "--kripke", &fx("single_loop.kripke"), "--rm", &fx("dsum_inf.rm"), "--bad", &fx("infinitely_many_y.nba")];
    let r = cli(&args);
    assert_eq!(r.code, exit::OK);
    assert!(r.out.lines().any(|l| l == "TAU* 1/1 INFIMUM_ONLY"), "{}", r.out);
    assert_eq!(field(&r.out, "BAD"), Some("(1/1,inf)"));

    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt");
    let d = dir.path().join("w.dot");
    let mut more = args.to_vec();
    let (ws, ds) = (w.display().to_string(), d.display().to_string());
    more.extend(["--epsilon", "1/8", "--witness", &ws, "--witness-dot", &ds]);
    let r = cli(&more);
    assert_eq!(r.code, exit::OK);
    assert_eq!(field(&r.out, "COST"), Some("9/8"));
    let text = std::fs::read_to_string(&w).unwrap();
    assert!(text.starts_with("TRACE "));
    assert_eq!(field(&text, "REWRITE"), Some("x.x.x.x.y.y|y.y"));
    assert!(std::fs::read_to_string(&d).unwrap().starts_with("digraph witness"));
}

#[test]
fn impair_needs_epsilon_only_for_infima() {
    let base = ["impair", "--kripke", &fx("single_loop.kripke"), "--rm", &fx("dsum_inf.rm"), "--bad", &fx("infinitely_many_y.nba")];
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt").display().to_string();
    let mut a = base.to_vec();
    a.extend(["--witness", &w]);
    let r = cli(&a);
    assert_eq!(r.code, exit::USAGE);
    assert!(r.err.contains("--epsilon"));
    let mut a = base.to_vec();
    a.extend(["--epsilon", "0"]);
    assert_eq!(cli(&a).code, exit::USAGE);

    let r = cli(&[
        "impair", "--kripke", &fx("printer.kripke"), "--rm", &fx("printer_sup.rm"), "--bad", &fx("printer.nba"), "--witness", &w,
    ]);
    assert_eq!(r.code, exit::OK);
    assert_eq!(field(&r.out, "TAU*"), Some("0/1 ATTAINED"));
    assert_eq!(field(&r.out, "COST"), Some("0/1"));
}

#[test]
fn infinite_thresholds_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let never = dir.path().join("never.nba");
    std::fs::write(&never, "NBA\nALPHABET x y\nSTATE n INIT\nEDGE n x n\nEDGE n y n\n").unwrap();
    let r = cli(&["impair", "--kripke", &fx("single_loop.kripke"), "--rm", &fx("dsum_inf.rm"), "--bad", &never.display().to_string()]);
    assert_eq!(r.code, exit::INFEASIBLE);
    assert_eq!(field(&r.out, "TAU*"), Some("inf ATTAINED"));

    let never_bot = dir.path().join("never.spec");
    std::fs::write(&never_bot, "NBA\nALPHABET bot sq tr\nSTATE n INIT\nEDGE n bot n\n").unwrap();
    let r = cli(&["repair", "--kripke", &fx("printer.kripke"), "--rm", &fx("printer_sup.rm"), "--spec", &never_bot.display().to_string()]);
    assert_eq!(r.code, exit::INFEASIBLE);
}

#[test]
fn repair_on_the_printer() {
    let sup = cli(&["repair", "--kripke", &fx("printer.kripke"), "--rm", &fx("printer_sup.rm"), "--spec", &fx("printer.nba")]);
    assert_eq!(sup.code, exit::OK);
    assert_eq!(field(&sup.out, "TAU*"), Some("3/1 ATTAINED"));
    assert_eq!(field(&sup.out, "MEMORY"), Some("POSITIONAL"));
    assert_eq!(field(&sup.out, "GOOD"), Some("[3/1,inf)"));

    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.txt");
    let d = dir.path().join("a.dot");
    let (ss, ds) = (s.display().to_string(), d.display().to_string());
    let mean = cli(&[
        "repair", "--kripke", &fx("printer.kripke"), "--rm", &fx("printer_mean.rm"), "--spec", &fx("printer.nba"),
        "--epsilon", "1/10", "--strategy", &ss, "--dot", &ds,
    ]);
    assert_eq!(mean.code, exit::OK);
    assert_eq!(field(&mean.out, "TAU*"), Some("0/1 INFIMUM_ONLY"));
    assert_eq!(field(&mean.out, "MEMORY"), Some("INFINITE_FOR_EXACT"));
    let worst: Rational = field(&mean.out, "WORST_CASE").unwrap().parse().unwrap();
    assert!(worst <= Rational::new(1, 10));
    let strategy = parse_strategy(&std::fs::read_to_string(&s).unwrap()).unwrap();
    assert_eq!(strategy.epsilon, Some(Rational::new(1, 10)));
    assert!(!strategy.modes.is_empty());
    let dot = std::fs::read_to_string(&d).unwrap();
    assert!(dot.starts_with("digraph arena") && dot.contains("color=red"));

    let r = cli(&["repair", "--kripke", &fx("printer.kripke"), "--rm", &fx("printer_mean.rm"), "--spec", &fx("printer.nba"), "--strategy", &ss]);
    assert_eq!(r.code, exit::USAGE);
}

#[test]
fn strategy_text_round_trips() {
    let k = printer_kripke();
    let (t, b) = (printer_machine(Aggregator::DSum(Rational::new(1, 2))), printer_spec());
    let s = omegarepair_core::repair_strategy(&k, &t, &b, &Rational::new(1, 4)).unwrap();
    let text = omegarepair::report::strategy_text(&s);
    assert_eq!(parse_strategy(&text).unwrap(), s);
    assert!(parse_strategy("").is_err());
    assert!(parse_strategy("STRATEGY\nMAP 0 -> 1\n").is_err());
    assert!(parse_strategy("STRATEGY\nMODE 1\n").is_err());
    assert!(parse_strategy("STRATEGY\nMODE 0\nEXIT SOMETIMES\n").is_err());
}

#[test]
fn product_summary_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("p.dot");
    let r = cli(&[
        "product", "--kripke", &fx("printer.kripke"), "--rm", &fx("printer_sup.rm"), "--spec", &fx("printer.nba"), "--dot",
        &d.display().to_string(),
    ]);
    assert_eq!(r.code, exit::OK);
    let p = omegarepair_core::build_product(&printer_kripke(), &printer_machine(Aggregator::Sup), &printer_spec(), Default::default()).unwrap();
    assert_eq!(field(&r.out, "VERTICES"), Some(p.vertices.len().to_string().as_str()));
    assert_eq!(field(&r.out, "EDGES"), Some(p.graph.edges().len().to_string().as_str()));
    let dot = std::fs::read_to_string(&d).unwrap();
    assert!(dot.starts_with("digraph product"));
    assert!(dot.contains("doublecircle"));
    assert!(dot.contains("(s_bot, q0, p0, 1)"));
}

#[test]
fn alphabet_mismatch_is_an_input_error() {
    let r = cli(&["product", "--kripke", &fx("single_loop.kripke"), "--rm", &fx("printer_sup.rm"), "--spec", &fx("printer.nba")]);
    assert_eq!(r.code, exit::PARSE, "{}", r.err);
}

#[test]
fn parse_errors_exit_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.kripke");
    std::fs::write(&f, "KRIPKE\nSTATE s LABEL a INIT\nEDGE s t\n").unwrap();
    let r = cli(&["product", "--kripke", &f.display().to_string(), "--rm", &fx("dsum_inf.rm"), "--spec", &fx("infinitely_many_y.nba")]);
    assert_eq!(r.code, exit::PARSE);
    assert!(r.err.contains("line 3, column 8"), "{}", r.err);

    std::fs::write(&f, "KRIPKE\nSTATE s LABEL a\nSTATE t LABEL a INIT\nEDGE t s\n").unwrap();
    let r = cli(&["product", "--kripke", &f.display().to_string(), "--rm", &fx("dsum_inf.rm"), "--spec", &fx("infinitely_many_y.nba")]);
    assert_eq!(r.code, exit::PARSE);
    assert!(r.err.contains("DEAD_END"), "{}", r.err);

    std::fs::write(&f, "").unwrap();
    let r = cli(&["eval", "--rm", &f.display().to_string(), "--costs", "|1"]);
    assert_eq!(r.code, exit::PARSE);
    assert!(r.err.contains("empty"));
}

#[test]
fn mean_masks_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("m.nba").display().to_string();
    let r = cli(&["mask", "--kripke", &fx("printer.kripke"), "--rm", &fx("printer_mean.rm"), "--bad", &fx("printer.nba"), "--threshold", "1", "-o", &o]);
    assert_eq!(r.code, exit::INFEASIBLE);
    assert!(r.err.contains("undecidable"), "{}", r.err);
}

#[test]
fn dsum_mask_on_dsum_inf() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("m.nba");
    let os = o.display().to_string();
    let base = ["mask", "--kripke", &fx("single_loop.kripke"), "--rm", &fx("dsum_inf.rm"), "--bad", &fx("infinitely_many_y.nba"), "-o", &os];

    let mut a = base.to_vec();
    a.extend(["--threshold", "3/2"]);
    let r = cli(&a);
    assert_eq!(r.code, exit::USAGE);
    assert!(r.err.contains("--epsilon"));

    // Every rewrite of a^ω costs more than 1, so τ = 1/2 keeps it; τ = 3/2 drops it.
    let aw = lasso_from_names(&omegarepair_core::Alphabet::from_names(["a"]), &[], &["a"]).unwrap();
    for (tau, member) in [("1/2", true), ("3/2", false)] {
        let mut a = base.to_vec();
        a.extend(["--threshold", tau, "--epsilon", "1/4"]);
        let r = cli(&a);
        assert_eq!(r.code, exit::OK, "{}", r.err);
        assert_eq!(field(&r.out, "N_STAR"), Some("4"));
        let mask = parse_nba(&std::fs::read_to_string(&o).unwrap()).unwrap();
        assert_eq!(lasso_membership(&mask, &aw).unwrap(), member, "τ = {tau}");
    }

    let mut a = base.to_vec();
    a.extend(["--threshold", "1/2", "--epsilon", "1/4", "--depth", "2"]);
    assert_eq!(field(&cli(&a).out, "DEPTH"), Some("2"));
    let mut a = base.to_vec();
    a.extend(["--threshold", "1/2", "--epsilon", "1/4", "--depth", "deep"]);
    assert_eq!(cli(&a).code, exit::USAGE);
}

#[test]
fn sup_mask_bad_set_on_the_printer() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("bad.nba");
    let os = o.display().to_string();
    let r = cli(&[
        "mask", "--kripke", &fx("printer.kripke"), "--rm", &fx("printer_sup.rm"), "--bad", &fx("printer.nba"), "--threshold", "2",
        "--bad-only", "-o", &os,
    ]);
    assert_eq!(r.code, exit::OK, "{}", r.err);
    let bad = parse_nba(&std::fs::read_to_string(&o).unwrap()).unwrap();
    let al = bad.alphabet().clone();
    // ⊥△^ω can only be fixed by paying 3.
    let w = lasso_from_names(&al, &["bot"], &["tr"]).unwrap();
    assert!(!lasso_membership(&bad, &w).unwrap());
    let w = lasso_from_names(&al, &["bot"], &["tr", "sq"]).unwrap();
    assert!(lasso_membership(&bad, &w).unwrap());
}

#[test]
fn complement_gate_follows_the_environment() {
    let bin = env!("CARGO_BIN_EXE_omegarepair");
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("m.nba").display().to_string();
    let args = ["mask", "--kripke", &fx("printer.kripke"), "--rm", &fx("printer_sup.rm"), "--bad", &fx("printer.nba"), "--threshold", "2", "-o", &o];
    let code = |limit: Option<&str>| {
        let mut c = Command::new(bin);
        c.args(args);
        match limit {
            Some(l) => c.env(COMPLEMENT_LIMIT_VAR, l),
            None => c.env_remove(COMPLEMENT_LIMIT_VAR),
        };
        let out = c.output().unwrap();
        (out.status.code().unwrap(), String::from_utf8(out.stderr).unwrap())
    };
    let (c, e) = code(None);
    assert_eq!(c, exit::OK, "{e}");
    let mask = parse_nba(&std::fs::read_to_string(&o).unwrap()).unwrap();
    let al = mask.alphabet().clone();
    assert!(lasso_membership(&mask, &lasso_from_names(&al, &["bot"], &["tr"]).unwrap()).unwrap());
    assert!(!lasso_membership(&mask, &lasso_from_names(&al, &["bot"], &["tr", "sq"]).unwrap()).unwrap());
    let (c, e) = code(Some("3"));
    assert_eq!(c, exit::SIZE_LIMIT);
    assert!(e.contains("complementation limit 3"), "{e}");
    assert_eq!(code(Some("many")).0, exit::USAGE);
}

#[test]
fn limsup_bad_set_is_written_as_nba() {
    let dir = tempfile::tempdir().unwrap();
    let rm = dir.path().join("t.rm");
    std::fs::write(&rm, serialize_model(&ModelFile::Rm(dsum_inf_machine(Rational::new(1, 2)).with_aggregator(Aggregator::LimSup)))).unwrap();
    let o = dir.path().join("m.nba");
    let r = cli(&[
        "mask", "--kripke", &fx("single_loop.kripke"), "--rm", &rm.display().to_string(), "--bad", &fx("infinitely_many_y.nba"),
        "--threshold", "1", "--bad-only", "-o", &o.display().to_string(),
    ]);
    assert_eq!(r.code, exit::OK, "{}", r.err);
    let bad = parse_nba(&std::fs::read_to_string(&o).unwrap()).unwrap();
    let aw = Lasso::new(vec![], vec![bad.alphabet().lookup("a").unwrap()]).unwrap();
    // x^i y^ω has limsup 1, so a^ω has a bad rewrite at τ = 1 but not below.
    assert!(lasso_membership(&bad, &aw).unwrap());
    let r = cli(&[
        "mask", "--kripke", &fx("single_loop.kripke"), "--rm", &rm.display().to_string(), "--bad", &fx("infinitely_many_y.nba"),
        "--threshold", "1/2", "--bad-only", "-o", &o.display().to_string(),
    ]);
    assert_eq!(r.code, exit::OK, "{}", r.err);
    let bad = parse_nba(&std::fs::read_to_string(&o).unwrap()).unwrap();
    assert!(!lasso_membership(&bad, &aw).unwrap());
}

#[test]
fn oracle_reports_are_deterministic() {
    let a = cli(&["oracle", "--seed", "3", "--count", "3"]);
    let b = cli(&["oracle", "--seed", "3", "--count", "3"]);
    assert_eq!(a.code, exit::OK);
    assert_eq!(a.out, b.out);
    let lines: Vec<&str> = a.out.lines().filter(|l| l.starts_with("SEED")).collect();
    assert_eq!(lines.len(), 24);
    assert!(lines.iter().all(|l| l.contains("VERDICT OK")));
    assert_eq!(field(&a.out, "SUMMARY"), Some("OK 24 MISMATCH 0 SKIPPED 0"));
    let tight = cli(&["oracle", "--seed", "3", "--count", "2", "--max-vertices", "1"]);
    assert!(tight.out.contains("SKIPPED"));
}
