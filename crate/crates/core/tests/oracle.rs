use omegarepair_core::fixtures::{dsum_inf_graph, mean_inset_graph, printer_kripke, printer_machine, printer_spec};
use omegarepair_core::oracle::*;
use omegarepair_core::repair::{arena_repair_strategy, RepairInstance};
use omegarepair_core::strategy::worst_case;
use omegarepair_core::*;

const SEEDS: u64 = 200;

fn budget() -> OracleBudget {
    OracleBudget { max_vertices: 24, max_strategies: 512, ..OracleBudget::default() }
}

#[test]
fn random_instances_agree_with_brute_force() {
    let mut lines = Vec::new();
    let mut skipped = 0;
    for seed in 0..SEEDS {
        match compare_seed(seed, &GeneratorConfig::default(), &budget(), 20) {
            Ok(cs) => lines.extend(cs),
            Err(Error::BudgetExceeded(_)) => skipped += 1,
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
    let bad: Vec<String> = lines.iter().filter(|c| !c.ok()).map(Comparison::report_line).collect();
    assert!(bad.is_empty(), "{}", bad.join("\n"));
    assert!(skipped * 10 < SEEDS, "{skipped} seeds over budget");
    let finite = lines.iter().filter(|c| !c.oracle.is_infinite()).count();
    assert!(finite * 4 > lines.len(), "only {finite} of {} finite", lines.len());
}

#[test]
fn comparisons_are_deterministic() {
    let a = compare_seed(7, &GeneratorConfig::default(), &budget(), 20).unwrap();
    let b = compare_seed(7, &GeneratorConfig::default(), &budget(), 20).unwrap();
    assert_eq!(a, b);
    assert!(a[0].report_line().starts_with("SEED 7 AGG "));
}

#[test]
fn graph_fixtures_match_brute_force() {
    let half = Aggregator::DSum(Rational::new(1, 2));
    let b = OracleBudget::default();
    assert_eq!(brute_impair_threshold(&dsum_inf_graph(), &half, &b).unwrap(), Threshold::Finite(Rational::one()));
    assert_eq!(brute_impair_threshold(&mean_inset_graph(), &Aggregator::Mean, &b).unwrap(), Threshold::Finite(Rational::zero()));
}

#[test]
fn printer_is_bracketed() {
    let b = OracleBudget { max_vertices: 64, ..OracleBudget::default() };
    let eps = Rational::new(1, 10);
    for agg in [Aggregator::Sup, Aggregator::LimSup, Aggregator::Mean] {
        let inst = RepairInstance::new(&printer_kripke(), &printer_machine(agg.clone()), &printer_spec(), ProductOptions::default()).unwrap();
        let lower = brute_repair_thresholds(&inst.arena, std::slice::from_ref(&agg), MaxClass::ByKripkeState, &b).unwrap().remove(0);
        let (r, s) = arena_repair_strategy(&inst.arena, &agg, &eps).unwrap();
        let upper = worst_case(&s, &inst.arena, &agg, 1 << 20).unwrap();
        assert!(lower <= r.value, "{agg}: lower {lower} above {}", r.value);
        assert!(upper.finite().unwrap() <= &(r.value.finite().unwrap() + &eps), "{agg}: upper {upper}");
        if matches!(agg, Aggregator::Sup | Aggregator::LimSup) {
            assert_eq!(lower, r.value);
        }
    }
}

#[test]
fn positional_enumeration_refuses_large_arenas() {
    let inst = RepairInstance::new(&printer_kripke(), &printer_machine(Aggregator::Sup), &printer_spec(), ProductOptions::default()).unwrap();
    let r = brute_repair_thresholds(&inst.arena, &[Aggregator::Sup], MaxClass::Positional, &OracleBudget::default());
    assert!(matches!(r, Err(Error::BudgetExceeded(_))));
}
