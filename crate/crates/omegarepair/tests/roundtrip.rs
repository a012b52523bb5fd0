use std::path::PathBuf;

use omegarepair::format::{serialize_kripke, serialize_nba, serialize_rm};
use omegarepair::{parse_kripke, parse_model, parse_nba, parse_rm, serialize_model, ModelFile};
use omegarepair_core::fixtures::*;
use omegarepair_core::{Aggregator, Alphabet, KripkeStructure, Nba, Rational, RepairMachine, RmTransition, Symbol};
use proptest::prelude::*;

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn half() -> Rational {
    Rational::new(1, 2)
}

fn core_fixtures() -> Vec<ModelFile> {
    vec![
        ModelFile::Kripke(printer_kripke()),
        ModelFile::Kripke(single_loop_kripke()),
        ModelFile::Nba(printer_spec()),
        ModelFile::Nba(infinitely_many_y()),
        ModelFile::Rm(printer_machine(Aggregator::Mean)),
        ModelFile::Rm(printer_machine(Aggregator::Sup)),
        ModelFile::Rm(printer_machine(Aggregator::LimSup)),
        ModelFile::Rm(appendix_machine(Aggregator::DSum(half()))),
        ModelFile::Rm(dsum_inf_machine(half())),
        ModelFile::Rm(mean_inset_machine()),
    ]
}

#[test]
fn core_fixtures_round_trip() {
    for m in core_fixtures() {
        let text = serialize_model(&m);
        let back = parse_model(&text).unwrap();
        assert_eq!(back, m, "{text}");
        assert_eq!(serialize_model(&back), text);
    }
}

#[test]
fn fixture_files_match_core_fixtures() {
    assert_eq!(parse_kripke(&fixture("printer.kripke")).unwrap(), printer_kripke());
    assert_eq!(parse_kripke(&fixture("single_loop.kripke")).unwrap(), single_loop_kripke());
    assert_eq!(parse_nba(&fixture("printer.nba")).unwrap(), printer_spec());
    assert_eq!(parse_nba(&fixture("infinitely_many_y.nba")).unwrap(), infinitely_many_y());
    assert_eq!(parse_rm(&fixture("printer_mean.rm")).unwrap(), printer_machine(Aggregator::Mean));
    assert_eq!(parse_rm(&fixture("printer_sup.rm")).unwrap(), printer_machine(Aggregator::Sup));
    assert_eq!(parse_rm(&fixture("appendix.rm")).unwrap(), appendix_machine(Aggregator::DSum(half())));
    assert_eq!(parse_rm(&fixture("dsum_inf.rm")).unwrap(), dsum_inf_machine(half()));
    assert_eq!(parse_rm(&fixture("mean_inset.rm")).unwrap(), mean_inset_machine());
}

#[test]
fn fixture_files_round_trip() {
    for name in [
        "printer.kripke",
        "single_loop.kripke",
        "printer.nba",
        "infinitely_many_y.nba",
        "printer_mean.rm",
        "printer_sup.rm",
        "appendix.rm",
        "dsum_inf.rm",
        "mean_inset.rm",
    ] {
        let m = parse_model(&fixture(name)).unwrap();
        let text = serialize_model(&m);
        assert_eq!(parse_model(&text).unwrap(), m, "{name}");
    }
}

#[test]
fn printer_machine_has_the_appending_edge() {
    let t = parse_rm(&fixture("printer_mean.rm")).unwrap();
    assert_eq!(t.num_states(), 1);
    assert_eq!(t.transitions().len(), 5);
    assert!(serialize_rm(&t).lines().any(|l| l == "EDGE q0 sq q0 sq.tr 3"));
}

#[test]
fn serialization_sorts_edges() {
    let text = "KRIPKE\nSTATE b LABEL x\nSTATE a LABEL y INIT\nEDGE a b\nEDGE b b\nEDGE a a\nEDGE b a\n";
    let out = serialize_kripke(&parse_kripke(text).unwrap());
    assert_eq!(out, "KRIPKE\nSTATE b LABEL x\nSTATE a LABEL y INIT\nEDGE b b\nEDGE b a\nEDGE a b\nEDGE a a\n");
    let shuffled = "NBA\nALPHABET u v\nEDGE q v q\nSTATE q INIT ACC\nEDGE q u q\n";
    assert_eq!(serialize_nba(&parse_nba(shuffled).unwrap()), "NBA\nALPHABET u v\nSTATE q INIT ACC\nEDGE q u q\nEDGE q v q\n");
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let text = "# header comment\n\nNBA   # trailing\nALPHABET x\n\nSTATE q INIT ACC # flags\nEDGE q x q\n";
    let n = parse_nba(text).unwrap();
    assert_eq!(n.num_states(), 1);
    assert!(n.is_accepting(0));
}

fn err_at(text: &str) -> (usize, usize, String) {
    let e = parse_model(text).unwrap_err();
    (e.line, e.column, e.message)
}

#[test]
fn diagnostics_carry_line_and_column() {
    let (l, c, m) = err_at("");
    assert_eq!((l, c), (1, 1));
    assert!(m.contains("empty"));
    assert!(err_at("# only a comment\n").2.contains("empty"));

    let (l, c, m) = err_at("NBA\nALPHABET x\nSTATE q INIT\nEDGE q z q\n");
    assert_eq!((l, c), (4, 8));
    assert!(m.contains("unknown alphabet symbol `z`"), "{m}");

    let (l, c, m) = err_at("KRIPKE\nSTATE s LABEL a INIT\nSTATE s LABEL b\n");
    assert_eq!((l, c), (3, 7));
    assert!(m.contains("duplicate state `s`"));

    let (l, c, m) = err_at("KRIPKE\nSTATE s LABEL a INIT\nEDGE s t\n");
    assert_eq!((l, c), (3, 8));
    assert!(m.contains("unknown state `t`"));

    let (l, c, m) = err_at("RM SUP\nIN a\nOUT x\nSTATE q INIT ACC\nEDGE q a q x.w 1\n");
    assert_eq!((l, c), (5, 14));
    assert!(m.contains("unknown output symbol `w`"), "{m}");

    let (l, _, m) = err_at("RM DSUM 3/2\nIN a\nOUT x\n");
    assert_eq!(l, 1);
    assert!(m.contains("strictly between 0 and 1"));

    assert!(err_at("RM SUP\nIN a\nOUT x\nSTATE q INIT\nEDGE q a q x -1\n").2.contains("non-negative"));
    assert!(err_at("RM SUP\nIN a\nSTATE q INIT\n").2.contains("missing OUT"));
    assert!(err_at("RM AVG\n").2.contains("unknown aggregator"));
    assert!(err_at("NBA\nSTATE q\n").2.contains("missing ALPHABET"));
    assert!(err_at("NBA\nALPHABET x\nSTATE q INIT INIT\n").2.contains("repeated flag"));
    assert!(err_at("KRIPKE\nSTATE s LABEL a\nEDGE s s s\n").2.contains("unexpected"));
    assert!(err_at("AUTOMATON\n").2.contains("header"));
    assert!(err_at("NBA\nALPHABET x x\n").2.contains("duplicate alphabet symbol"));
}

#[test]
fn kind_specific_parsers_reject_other_kinds() {
    let e = parse_nba(&fixture("printer.kripke")).unwrap_err();
    assert!(e.message.contains("expected a NBA file, found KRIPKE"));
    assert!(parse_rm(&fixture("printer.nba")).is_err());
    assert!(parse_kripke(&fixture("appendix.rm")).is_err());
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

prop_compose! {
    fn arb_kripke()(n in 1usize..5, labels in 1usize..4)
        (edges in proptest::collection::btree_set((0..n, 0..n), 0..10),
         lab in proptest::collection::vec(0..labels, n),
         init in proptest::collection::vec(any::<bool>(), n)) -> KripkeStructure {
        let mut k = KripkeStructure::new();
        for (i, l) in lab.iter().enumerate() {
            k.add_state(format!("s{i}"), &format!("l{l}"), init[i]);
        }
        for (a, b) in edges {
            k.add_edge(a, b);
        }
        k
    }
}

prop_compose! {
    fn arb_nba()(n in 1usize..5, letters in 1usize..4)
        (delta in proptest::collection::btree_set((0..n, 0..letters as u32, 0..n), 0..12),
         flags in proptest::collection::vec((any::<bool>(), any::<bool>()), n),
         letters in Just(letters)) -> Nba {
        let mut a = Nba::new(Alphabet::from_names(names("x", letters)));
        for (i, &(init, acc)) in flags.iter().enumerate() {
            a.add_state(format!("q{i}"), init, acc);
        }
        for (p, s, q) in delta {
            a.add_transition(p, Symbol(s), q);
        }
        a
    }
}

fn arb_aggregator() -> impl Strategy<Value = Aggregator> {
    prop_oneof![
        (1i64..8, 2i64..9).prop_filter("λ<1", |(p, q)| p < q).prop_map(|(p, q)| Aggregator::DSum(Rational::new(p, q))),
        Just(Aggregator::Mean),
        Just(Aggregator::Sup),
        Just(Aggregator::LimSup),
    ]
}

prop_compose! {
    fn arb_rm()(n in 1usize..4, ins in 1usize..3, outs in 1usize..3, agg in arb_aggregator())
        (delta in proptest::collection::vec(
            (0..n, 0..ins as u32, 0..n, proptest::collection::vec(0..outs as u32, 0..3), 0i64..6), 0..10),
         flags in proptest::collection::vec((any::<bool>(), any::<bool>()), n),
         ins in Just(ins), outs in Just(outs), agg in Just(agg)) -> RepairMachine {
        let mut t = RepairMachine::new(Alphabet::from_names(names("a", ins)), Alphabet::from_names(names("b", outs)), agg);
        for (i, &(init, acc)) in flags.iter().enumerate() {
            t.add_state(format!("r{i}"), init, acc);
        }
        for (from, input, to, out, cost) in delta {
            t.add_transition(RmTransition { from, input: Symbol(input), to, output: out.into_iter().map(Symbol).collect(), cost });
        }
        t
    }
}

proptest! {
    #[test]
    fn kripke_round_trip(k in arb_kripke()) {
        let text = serialize_kripke(&k);
        prop_assert_eq!(parse_kripke(&text).unwrap(), k);
    }

    #[test]
    fn nba_round_trip(a in arb_nba()) {
        let text = serialize_nba(&a);
        prop_assert_eq!(parse_nba(&text).unwrap(), a);
    }

    #[test]
    fn rm_round_trip(t in arb_rm()) {
        let text = serialize_rm(&t);
        let back = parse_rm(&text).unwrap();
        prop_assert_eq!(serialize_rm(&back), text);
        prop_assert_eq!(back, t);
    }
}
