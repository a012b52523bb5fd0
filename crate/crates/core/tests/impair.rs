use omegarepair_core::fixtures::{
    dsum_inf_graph, dsum_inf_machine, infinitely_many_y, mean_inset_graph, mean_inset_machine, single_loop_kripke,
};
use omegarepair_core::impair::{graph_impair_threshold, graph_impair_witness, mean_round_index, mean_round_value};
use omegarepair_core::*;

fn half() -> Aggregator {
    Aggregator::DSum(Rational::new(1, 2))
}

#[test]
fn dsum_inf_threshold_is_one_and_not_attained() {
    let r = graph_impair_threshold(&dsum_inf_graph(), &half()).unwrap();
    assert_eq!(r.value, Threshold::Finite(Rational::one()));
    assert_eq!(r.attainment, Attainment::InfimumOnly);
    assert!(r.good_set().contains(&Rational::one()));
}

#[test]
fn dsum_inf_witness_costs_nine_eighths() {
    let g = dsum_inf_graph();
    let (_, w) = graph_impair_witness(&g, &half(), &Rational::new(1, 8)).unwrap();
    assert_eq!(w.cost, Rational::new(9, 8));
    assert_eq!(w.vertices(&g), Lasso::new(vec![0, 1, 1, 1, 1], vec![2]).unwrap());
}

#[test]
fn dsum_inf_loop_family() {
    for i in 1..=6u32 {
        let costs = Lasso::new([vec![1], vec![0; i as usize], vec![1]].concat(), vec![1]).unwrap();
        let v = eval_aggregator(&half(), &costs);
        assert_eq!(v, Rational::one() + Rational::new(1, 2).pow(i));
        // Same family written as 1 + λ^{i+1}/(1−λ).
        assert_eq!(v, Rational::one() + Rational::new(1, 2).pow(i + 1) / Rational::new(1, 2));
    }
}

#[test]
fn inset_mean_is_zero_with_infinite_memory() {
    let g = mean_inset_graph();
    let r = graph_impair_threshold(&g, &Aggregator::Mean).unwrap();
    assert_eq!(r.value, Threshold::Finite(Rational::zero()));
    assert_eq!(r.attainment, Attainment::InfimumOnly);
    assert_eq!(r.memory, MemoryClass::InfiniteForExact);
    for eps in [Rational::new(1, 2), Rational::new(1, 4), Rational::new(1, 10)] {
        let (_, w) = graph_impair_witness(&g, &Aggregator::Mean, &eps).unwrap();
        assert!(w.cost <= eps, "{} > {eps}", w.cost);
        assert!(w.edges.cycle().iter().any(|&e| g.is_accepting_edge(e)));
    }
    let (_, w) = graph_impair_witness(&g, &Aggregator::Mean, &Rational::new(1, 4)).unwrap();
    assert_eq!(w.edges.cycle().len(), 31 + 2);
}

#[test]
fn sup_witness_is_exact() {
    let g = dsum_inf_graph();
    for agg in [Aggregator::Sup, Aggregator::LimSup] {
        let (r, w) = graph_impair_witness(&g, &agg, &Rational::new(1, 8)).unwrap();
        assert_eq!(r.value, Threshold::Finite(w.cost.clone()));
        assert_eq!(r.attainment, Attainment::Attained);
    }
}

#[test]
fn no_accepting_lasso_is_safe() {
    let mut g = dsum_inf_graph();
    g = g.induced(&[true, true, false]).0;
    for agg in [half(), Aggregator::Mean, Aggregator::Sup, Aggregator::LimSup] {
        let r = graph_impair_threshold(&g, &agg).unwrap();
        assert_eq!(r.value, Threshold::Infinite);
        assert!(r.bad_set().is_empty());
        assert!(matches!(graph_impair_witness(&g, &agg, &Rational::one()), Err(Error::Infeasible)));
    }
}

#[test]
fn witness_projects_to_words() {
    let k = single_loop_kripke();
    let bad = infinitely_many_y();
    for (t, eps) in [
        (dsum_inf_machine(Rational::new(1, 2)), Rational::new(1, 8)),
        (mean_inset_machine(), Rational::new(1, 4)),
        (mean_inset_machine().with_aggregator(Aggregator::Sup), Rational::one()),
    ] {
        let (r, w) = impair_witness(&k, &t, &bad, &eps).unwrap();
        let Threshold::Finite(tau) = r.value else { panic!() };
        assert!(w.cost <= &tau + &eps);
        assert!(lasso_membership(&bad, &w.rewrite).unwrap());
        assert!(lasso_membership(&kripke_to_nba(&k).unwrap(), &w.trace).unwrap());
    }
    let r = impair_threshold(&k, &dsum_inf_machine(Rational::new(1, 2)), &bad).unwrap();
    assert_eq!(r.value, Threshold::Finite(Rational::one()));
    let r = impair_threshold(&k, &mean_inset_machine(), &bad).unwrap();
    assert_eq!(r.value, Threshold::Finite(Rational::zero()));
}

#[test]
fn round_values_follow_closed_form() {
    assert_eq!(mean_round_value(0, 1, 2, 2, 4), Rational::new(8, 39));
    assert_eq!(mean_round_index(0, 1, 2, 2, &Rational::new(1, 4)), 4);
    assert_eq!(mean_round_index(0, 1, 2, 2, &Rational::new(1, 10)), 6);
}
