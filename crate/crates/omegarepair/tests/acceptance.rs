//! Acceptance criteria 1 to 9, one `ACCEPTANCE <n> PASS|FAIL` line each.
//!
//! Lines are written straight to stdout so they show up without
//! `--nocapture`. All values are compared as exact rationals; every
//! tolerance used is a named constant below.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};

use omegarepair::cli::{exit, run};
use omegarepair::{parse_model, serialize_model, ModelFile};
use omegarepair_core::aggregator::eval_aggregator;
use omegarepair_core::complement::complement_nba;
use omegarepair_core::fixtures::*;
use omegarepair_core::impair::{graph_impair_threshold, graph_impair_witness, mean_round_index, mean_round_value};
use omegarepair_core::mask::{dsum_mask_bad_nba, dsum_mask_chain_check, synthesize_mask, MaskOptions};
use omegarepair_core::membership::lasso_from_names;
use omegarepair_core::oracle::*;
use omegarepair_core::repair::{arena_repair_strategy, RepairInstance};
use omegarepair_core::strategy::worst_case;
use omegarepair_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn fin(x: Rational) -> Threshold {
    Threshold::Finite(x)
}

/// Epsilons for the mean witnesses of the inset graph.
const INSET_EPSILONS: [(i64, i64); 3] = [(1, 2), (1, 4), (1, 10)];
/// Witness epsilon on the dsum-inf instance and the cost it must hit.
const DSUM_INF_EPSILON: (i64, i64) = (1, 8);
const DSUM_INF_WITNESS_COST: (i64, i64) = (9, 8);
/// Loop counts of the dsum-inf lasso family.
const DSUM_INF_LOOPS: std::ops::RangeInclusive<u32> = 1..=6;
/// Strategy epsilons for the printer upper bounds.
const PRINTER_EPSILONS: [(i64, i64); 2] = [(1, 10), (1, 100)];
/// Random instances compared with brute force.
const ORACLE_INSTANCES: usize = 200;
const ORACLE_TRIES: usize = 20;
/// Random tuples and epsilons for the mean rounds.
const MEAN_TUPLES: u64 = 20;
const MEAN_EPSILONS: [(i64, i64); 4] = [(1, 2), (1, 10), (1, 100), (1, 1000)];
/// Mask chain: instances, isolation margin and how far past `n*` to check.
const CHAIN_INSTANCES: u64 = 20;
const CHAIN_EPSILON: (i64, i64) = (1, 2);
const CHAIN_EXTRA_DEPTH: usize = 2;
/// Sup masks: instances and lasso bounds of the exhaustive sample.
const SUP_INSTANCES: usize = 20;
const SAMPLE_PREFIX: usize = 3;
const SAMPLE_CYCLE: usize = 2;
/// Complement check: random NBAs, their size and lassos per NBA.
const XOR_NBAS: u64 = 40;
const XOR_STATES: usize = 4;
const XOR_LASSOS: usize = 50;

/// Runs `input` through `t` choosing, at each letter, the transition picked
/// by `choose`. Returns the cost lasso and the output word lasso.
fn drive(
    t: &RepairMachine,
    input: &Lasso<Symbol>,
    choose: impl Fn(usize, &RmTransition) -> bool,
) -> (Lasso<u64>, Lasso<Symbol>) {
    let mut q = *t.initial().iter().next().unwrap();
    let mut costs = Vec::new();
    let mut words = Vec::new();
    for i in 0..input.span() {
        let tr = t.moves(q, *input.at(i)).find(|tr| choose(i, tr)).expect("a move").clone();
        costs.push(tr.cost as u64);
        words.push(tr.output.clone());
        q = tr.to;
    }
    let p = input.prefix().len();
    let cost = Lasso::new(costs[..p].to_vec(), costs[p..].to_vec()).unwrap();
    let flat = |ws: &[Vec<Symbol>]| ws.concat();
    (cost, Lasso::new(flat(&words[..p]), flat(&words[p..])).unwrap())
}

fn criterion_1() {
    let t = appendix_machine(Aggregator::Mean);
    let w = lasso_from_names(t.input_alphabet(), &["b", "a"], &["a", "b"]).unwrap();
    let (costs, _) = drive(&t, &w, |_, _| true);
    assert_eq!(costs, Lasso::new(vec![2, 0], vec![1, 4]).unwrap());
    let expect = [(Aggregator::DSum(r(1, 2)), r(3, 1)), (Aggregator::Sup, r(4, 1)), (Aggregator::LimSup, r(4, 1)), (Aggregator::Mean, r(5, 2))];
    for (agg, v) in expect {
        assert_eq!(eval_aggregator(&agg, &costs), v, "{agg}");
    }
}

fn criterion_2() {
    let lambda = r(1, 2);
    let (k, t, a) = (single_loop_kripke(), dsum_inf_machine(lambda.clone()), infinitely_many_y());
    let res = impair_threshold(&k, &t, &a).unwrap();
    assert_eq!(res.value, fin(r(1, 1)));
    assert_eq!(res.attainment, Attainment::InfimumOnly);
    let eps = r(DSUM_INF_EPSILON.0, DSUM_INF_EPSILON.1);
    let (_, w) = impair_witness(&k, &t, &a, &eps).unwrap();
    assert_eq!(w.cost, r(DSUM_INF_WITNESS_COST.0, DSUM_INF_WITNESS_COST.1));
    let agg = Aggregator::DSum(lambda.clone());
    for i in DSUM_INF_LOOPS {
        let mut prefix = vec![1];
        prefix.extend(std::iter::repeat_n(0, i as usize));
        prefix.push(1);
        let v = eval_aggregator(&agg, &Lasso::new(prefix, vec![1]).unwrap());
        assert_eq!(v, Rational::one() + r(1, 2).pow(i), "i = {i}");
        assert_eq!(v, Rational::one() + lambda.pow(i + 1) / (Rational::one() - &lambda), "i = {i}");
    }
}

fn criterion_3() {
    let g = mean_inset_graph();
    let res = graph_impair_threshold(&g, &Aggregator::Mean).unwrap();
    assert_eq!(res.value, fin(Rational::zero()));
    assert_eq!(res.attainment, Attainment::InfimumOnly);
    assert_eq!(res.memory, MemoryClass::InfiniteForExact);
    for (n, d) in INSET_EPSILONS {
        let eps = r(n, d);
        let (_, w) = graph_impair_witness(&g, &Aggregator::Mean, &eps).unwrap();
        let cycle: Vec<u64> = w.edges.cycle().iter().map(|&e| g.edge(e).weight).collect();
        assert!(Rational::mean_of(&cycle) <= eps, "ε = {eps}");
        assert_eq!(w.cost, Rational::mean_of(&cycle));
    }
}

fn criterion_4() {
    let (k, b) = (printer_kripke(), printer_spec());
    let t = printer_machine(Aggregator::Mean);
    let al = t.input_alphabet();
    let tr = al.lookup("tr").unwrap();
    let trace = lasso_from_names(al, &["bot"], &["tr"]).unwrap();
    // Every triangle job gets a square appended.
    let (costs, out) = drive(&t, &trace, |_, m| m.input != tr || m.output.len() == 2);
    assert_eq!(eval_aggregator(&Aggregator::Mean, &costs), r(3, 1));
    assert!(lasso_membership(&b, &out).unwrap());
    // Only every third triangle gets one.
    let trace3 = trace.unrolled(3);
    let p = trace3.prefix().len();
    let (costs, out) = drive(&t, &trace3, |i, m| m.input != tr || (m.output.len() == 2) == (i >= p && (i - p) % 3 == 2));
    assert_eq!(eval_aggregator(&Aggregator::Mean, &costs), r(1, 1));
    assert!(out.same_infinite_sequence(&lasso_from_names(al, &["bot"], &["tr", "tr", "tr", "sq"]).unwrap()));
    assert!(lasso_membership(&b, &out).unwrap());

    let budget = OracleBudget { max_vertices: 64, ..OracleBudget::default() };
    for (agg, tau) in [(Aggregator::Mean, r(0, 1)), (Aggregator::Sup, r(3, 1))] {
        let t = printer_machine(agg.clone());
        assert_eq!(repair_threshold(&k, &t, &b).unwrap().value, fin(tau.clone()), "{agg}");
        // Brute force over Max strategies that depend on the trace state
        // only gives a lower bound; strategies give upper bounds.
        let lower = brute_repair_threshold(&k, &t, &b, MaxClass::ByKripkeState, &budget).unwrap();
        assert!(lower <= fin(tau.clone()), "{agg}: lower {lower}");
        let inst = RepairInstance::new(&k, &t, &b, ProductOptions::default()).unwrap();
        for (n, d) in PRINTER_EPSILONS {
            let eps = r(n, d);
            let (_, s) = arena_repair_strategy(&inst.arena, &agg, &eps).unwrap();
            let upper = worst_case(&s, &inst.arena, &agg, 1 << 20).unwrap();
            assert!(upper >= lower && upper <= fin(&tau + &eps), "{agg}: upper {upper}");
        }
        if agg == Aggregator::Sup {
            assert_eq!(lower, fin(tau));
        }
    }
}

fn criterion_5() {
    let budget = OracleBudget { max_vertices: 24, max_strategies: 512, ..OracleBudget::default() };
    let (mut compared, mut seed, mut lines) = (0, 0u64, Vec::new());
    while compared < ORACLE_INSTANCES {
        match compare_seed(seed, &GeneratorConfig::default(), &budget, ORACLE_TRIES) {
            Ok(cs) => {
                assert_eq!(cs.len(), 8);
                lines.extend(cs);
                compared += 1;
            }
            Err(Error::BudgetExceeded(_)) => {}
            Err(e) => panic!("seed {seed}: {e}"),
        }
        seed += 1;
    }
    let bad: Vec<String> = lines.iter().filter(|c| !c.ok()).map(Comparison::report_line).collect();
    assert!(bad.is_empty(), "{}", bad.join("\n"));
    assert!(lines.iter().all(|c| c.report_line().contains("VERDICT OK")));
    for p in ["REPAIR", "IMPAIR"] {
        let finite = lines.iter().filter(|c| c.problem == p && !c.oracle.is_infinite()).count();
        assert!(finite > 0, "{p}: every threshold infinite");
    }
}

fn criterion_6() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..MEAN_TUPLES {
        let (n1, n2) = (rng.random_range(1..=4u64), rng.random_range(1..=4u64));
        let d1 = rng.random_range(0..=4 * n1);
        // The second cycle is the dearer one.
        let d2 = rng.random_range(d1 * n2 / n1 + 1..=d1 * n2 / n1 + 8);
        let (en, ed) = MEAN_EPSILONS[rng.random_range(0..MEAN_EPSILONS.len())];
        let eps = r(en, ed);
        let idx = mean_round_index(d1, n1, d2, n2, &eps);
        for i in 1..=idx {
            let laps = 2u64.pow(i + 1) - 1;
            let closed = Rational::from(laps * d1 + u64::from(i) * d2) / Rational::from(laps * n1 + u64::from(i) * n2);
            assert_eq!(mean_round_value(d1, n1, d2, n2, i), closed, "({d1},{n1},{d2},{n2}) i = {i}");
        }
        let gap = (mean_round_value(d1, n1, d2, n2, idx) - r(d1 as i64, n1 as i64)).abs();
        assert!(gap <= eps, "({d1},{n1},{d2},{n2}) ε = {eps}: gap {gap} at {idx}");
        if idx > 1 {
            assert!(mean_round_value(d1, n1, d2, n2, idx - 1) - r(d1 as i64, n1 as i64) > eps);
        }
    }
}

fn random_tq(seed: u64, agg: Option<Aggregator>) -> (RepairMachine, Nba) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = GeneratorConfig { max_states: 2, ..GeneratorConfig::default() };
    let inst = random_instance(&mut rng, &cfg);
    let agg = agg.unwrap_or(Aggregator::DSum(inst.lambda.clone()));
    (inst.machine.with_aggregator(agg), inst.nba)
}

fn criterion_7() {
    let eps = r(CHAIN_EPSILON.0, CHAIN_EPSILON.1);
    let budget = OracleBudget::default();
    let (mut inside, mut outside) = (0, 0);
    for seed in 0..CHAIN_INSTANCES {
        let (tq, a) = random_tq(seed, None);
        let sample = all_lassos(tq.input_alphabet(), SAMPLE_PREFIX, SAMPLE_CYCLE);
        let tau = Rational::from(1 + seed % 3);
        let n_star = dsum_mask_bad_nba(&tq, &a, &tau, &eps, None).unwrap().n_star;
        let rep = dsum_mask_chain_check(&tq, &a, &tau, &eps, n_star + CHAIN_EXTRA_DEPTH, &sample).unwrap();
        assert!(rep.chain_holds(), "seed {seed}: {:?}", rep.violations);
        let agg = tq.aggregator().clone();
        let dom = tq.domain_nba();
        for (i, w) in sample.iter().enumerate() {
            let member = rep.members[n_star][i];
            if member {
                inside += 1;
                let found = bounded_bad_rewrite(&tq, &a, w, &tau, &agg, &budget).unwrap();
                assert!(found.is_some_and(|(_, c)| c <= tau), "seed {seed}: {w:?} has no rewrite within τ");
            } else {
                outside += 1;
            }
            if lasso_membership(&dom, w).unwrap() && bounded_bad_rewrite(&tq, &a, w, &(&tau - &eps), &agg, &budget).unwrap().is_some() {
                assert!(member, "seed {seed}: {w:?} missed");
            }
        }
    }
    assert!(inside > 0 && outside > 0, "{inside} inside, {outside} outside");
}

fn criterion_8() {
    let budget = OracleBudget::default();
    let (mut done, mut seed) = (0, 100u64);
    while done < SUP_INSTANCES {
        let (tq, a) = random_tq(seed, Some(Aggregator::Sup));
        let tau = Rational::from(1 + seed % 4);
        seed += 1;
        let mask = match synthesize_mask(&tq, &a, &tau, &MaskOptions::default()) {
            Ok(m) => m.mask,
            Err(Error::SizeLimit { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        let dom = tq.domain_nba();
        for w in all_lassos(tq.input_alphabet(), SAMPLE_PREFIX, SAMPLE_CYCLE) {
            let bad = bounded_bad_rewrite(&tq, &a, &w, &tau, &Aggregator::Sup, &budget).unwrap().is_some();
            let expect = lasso_membership(&dom, &w).unwrap() && !bad;
            assert_eq!(lasso_membership(&mask, &w).unwrap(), expect, "seed {} {w:?}", seed - 1);
        }
        done += 1;
    }
    let al = Alphabet::from_names(["x", "y"]);
    for s in 0..XOR_NBAS {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let a = random_nba(&mut rng, &al, XOR_STATES);
        let c = complement_nba(&a).unwrap();
        for _ in 0..XOR_LASSOS {
            let w = random_lasso(&mut rng, &al, 4, 4);
            assert!(lasso_membership(&a, &w).unwrap() != lasso_membership(&c, &w).unwrap(), "nba {s}: {w:?}");
        }
    }
}

fn criterion_9() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let aggs = [Aggregator::DSum(r(2, 3)), Aggregator::Mean, Aggregator::Sup, Aggregator::LimSup];
    for _ in 0..200 {
        let prefix: Vec<u64> = (0..rng.random_range(0..4)).map(|_| rng.random_range(0..6)).collect();
        let cycle: Vec<u64> = (0..rng.random_range(1..4)).map(|_| rng.random_range(0..6)).collect();
        let l = Lasso::new(prefix, cycle).unwrap();
        let k = rng.random_range(0..4);
        for agg in &aggs {
            let v = eval_aggregator(agg, &l);
            // Rotation into the prefix and unrolling the cycle keep the value.
            assert_eq!(eval_aggregator(agg, &l.rotated(k)), v, "{agg} rotate {l:?}");
            assert_eq!(eval_aggregator(agg, &l.unrolled(k + 1)), v, "{agg} unroll {l:?}");
            // Positive scaling scales the value.
            let scaled = l.map(|c| c * 3);
            assert_eq!(eval_aggregator(agg, &scaled), &v * Rational::from(3u64), "{agg} scale");
        }
        // The sup of the whole run bounds its limsup, which bounds its mean.
        let (s, ls, m) = (eval_aggregator(&aggs[2], &l), eval_aggregator(&aggs[3], &l), eval_aggregator(&aggs[1], &l));
        assert!(s >= ls && ls >= m);
    }
    // Graph-level: the minimax lasso sup is at least the cheapest limsup cycle.
    for seed in 0..40 {
        let (tq, a) = random_tq(500 + seed, Some(Aggregator::Sup));
        let k = single_state_kripke(tq.input_alphabet());
        let p = omegarepair_core::impair::impair_product(&k, &tq, &a).unwrap();
        let sup = graph_impair_threshold(&p.graph, &Aggregator::Sup).unwrap().value;
        let limsup = graph_impair_threshold(&p.graph, &Aggregator::LimSup).unwrap().value;
        assert!(sup >= limsup, "seed {seed}");
    }
    // Text formats round-trip on every fixture.
    for m in [
        ModelFile::Kripke(printer_kripke()),
        ModelFile::Nba(printer_spec()),
        ModelFile::Rm(printer_machine(Aggregator::Mean)),
        ModelFile::Rm(appendix_machine(Aggregator::DSum(r(1, 2)))),
        ModelFile::Rm(dsum_inf_machine(r(1, 2))),
        ModelFile::Nba(infinitely_many_y()),
        ModelFile::Rm(mean_inset_machine()),
    ] {
        assert_eq!(parse_model(&serialize_model(&m)).unwrap(), m);
    }
    // The CLI agrees with the library on the golden aggregator value.
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(["omegarepair", "eval", "--aggregator", "DSUM 1/2", "--costs", "2,0|1,4"], &mut out, &mut err);
    assert_eq!((code, String::from_utf8(out).unwrap()), (exit::OK, "VALUE 3/1\n".to_string()));
}

/// A structure whose traces are all words over `al`.
fn single_state_kripke(al: &Alphabet) -> KripkeStructure {
    let mut k = KripkeStructure::new();
    let names = al.names().to_vec();
    for (i, n) in names.iter().enumerate() {
        k.add_state(format!("s{i}"), n, true);
    }
    for i in 0..names.len() {
        for j in 0..names.len() {
            k.add_edge(i, j);
        }
    }
    k
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn()); 9] = [
        ("golden aggregator values on the four-state machine", criterion_1),
        ("discounted infimum, its witness and the lasso family", criterion_2),
        ("mean infimum on the two-vertex graph and its witnesses", criterion_3),
        ("printer strategies and repair thresholds", criterion_4),
        ("solvers equal brute force on 200 random instances", criterion_5),
        ("mean round values and round index", criterion_6),
        ("discounted mask chain inclusion, soundness and completeness", criterion_7),
        ("sup masks against brute force, complement membership", criterion_8),
        ("aggregator, ordering and round-trip properties", criterion_9),
    ];
    let results: Vec<(usize, &str, std::result::Result<(), String>)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, f)| {
                s.spawn(move || {
                    catch_unwind(AssertUnwindSafe(f)).map_err(|e| {
                        e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()
                    })
                })
            })
            .collect();
        handles.into_iter().enumerate().map(|(i, h)| (i + 1, criteria[i].0, h.join().unwrap())).collect()
    });
    let mut stdout = std::io::stdout().lock();
    for (i, name, res) in &results {
        let verdict = if res.is_ok() { "PASS" } else { "FAIL" };
        writeln!(stdout, "ACCEPTANCE {i} {verdict} {name}").unwrap();
    }
    let failed: Vec<String> = results.iter().filter_map(|(i, _, r)| r.as_ref().err().map(|m| format!("{i}: {m}"))).collect();
    assert!(failed.is_empty(), "{}", failed.join("\n"));
}
