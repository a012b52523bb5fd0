use omegarepair_core::fixtures::{dsum_inf_graph, mean_inset_graph};
use omegarepair_core::product::GameArena;
use omegarepair_core::solvers::dsum::{dsum_residual_is_zero, min_dsum_single, solve_dsum_game};
use omegarepair_core::solvers::karp::karp_min_mean_cycle;
use omegarepair_core::solvers::lassos::{min_limsup_cycle, minimax_lasso_sup, prune_graph};
use omegarepair_core::solvers::mean::{mean_values_by_iteration, solve_mean_game};
use omegarepair_core::solvers::{solve_buchi_game, Subgame};
use omegarepair_core::{Error, Rational, Threshold, WeightedGraph};
use omegarepair_core::product::Player;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

#[test]
fn dsum_inf_values() {
    let g = dsum_inf_graph();
    let vm = min_dsum_single(&g, &r(1, 2)).unwrap();
    assert_eq!(vm.value(0), &r(1, 1));
    assert_eq!(vm.value(1), &r(0, 1));
    assert_eq!(vm.value(2), &r(2, 1));
}

#[test]
fn geometric_loop_value() {
    let mut g = WeightedGraph::new(1);
    g.add_edge(0, 0, 5, false);
    let vm = min_dsum_single(&g, &r(2, 3)).unwrap();
    assert_eq!(vm.value(0), &r(15, 1));
}

#[test]
fn max_forces_heavier_loop() {
    // Min vertex 0 has one move to Max vertex 2, which picks Min vertex 0
    // (loop of weight 1 back through Max vertex 2) or Min vertex 1 whose only
    // move is the weight-3 loop through Max vertex 3.
    let mut a = GameArena::with_sizes(2, 2);
    a.add_edge(0, 2, 1, 0);
    a.add_edge(2, 0, 0, 0);
    a.add_edge(2, 1, 0, 0);
    a.add_edge(1, 3, 3, 0);
    a.add_edge(3, 1, 0, 0);
    let l = r(1, 2);
    let vm = solve_dsum_game(&a, &l).unwrap();
    assert_eq!(vm.value(1), &r(6, 1));
    assert_eq!(vm.value(0), &(r(1, 1) + l.clone() * r(6, 1)));
    assert!(dsum_residual_is_zero(&a, &Subgame::full(&a), &l, &vm));
}

#[test]
fn no_successor_is_reported() {
    let mut g = WeightedGraph::new(2);
    g.add_edge(0, 1, 1, false);
    assert_eq!(min_dsum_single(&g, &r(1, 2)).unwrap_err(), Error::NoSuccessor(1));
}

#[test]
fn mean_inset_value_zero() {
    let g = mean_inset_graph();
    let a = GameArena::single_player(&g);
    let vm = solve_mean_game(&a);
    assert_eq!(vm.value(0), &r(0, 1));
    assert_eq!(vm.value(1), &r(0, 1));
    let c = karp_min_mean_cycle(&g).unwrap();
    assert_eq!(c.value, r(0, 1));
    assert_eq!(c.cycle.cycle(), &[0]);
}

#[test]
fn mean_alternating_cycle() {
    let mut g = WeightedGraph::new(2);
    g.add_edge(0, 1, 1, false);
    g.add_edge(1, 0, 4, false);
    let a = GameArena::single_player(&g);
    assert_eq!(solve_mean_game(&a).value(0), &r(5, 2));
    assert_eq!(mean_values_by_iteration(&a)[0], r(5, 2));
}

#[test]
fn karp_triangle_and_loop() {
    let mut g = WeightedGraph::new(3);
    g.add_edge(0, 1, 1, false);
    g.add_edge(1, 2, 2, false);
    g.add_edge(2, 0, 3, false);
    g.add_edge(2, 2, 1, false);
    let c = karp_min_mean_cycle(&g).unwrap();
    assert_eq!(c.value, r(1, 1));
    assert_eq!(c.length, 1);
    let mut acyclic = WeightedGraph::new(2);
    acyclic.add_edge(0, 1, 1, false);
    assert_eq!(karp_min_mean_cycle(&acyclic).unwrap_err(), Error::Acyclic);
}

#[test]
fn bottleneck_searches_on_dsum_inf() {
    let g = dsum_inf_graph();
    assert_eq!(minimax_lasso_sup(&g).result.value, Threshold::Finite(r(1, 1)));
    assert_eq!(min_limsup_cycle(&g).result.value, Threshold::Finite(r(1, 1)));
    let (p, _) = prune_graph(&g);
    assert_eq!(p.num_vertices(), 3);
}

#[test]
fn limsup_ignores_prefix_bridge() {
    let mut g = WeightedGraph::new(2);
    g.add_edge(0, 1, 100, false);
    g.add_edge(1, 1, 0, false);
    g.set_initial(0);
    g.set_final(1);
    assert_eq!(min_limsup_cycle(&g).result.value, Threshold::Finite(r(0, 1)));
    assert_eq!(minimax_lasso_sup(&g).result.value, Threshold::Finite(r(100, 1)));
}

#[test]
fn buchi_single_loop() {
    let mut g = WeightedGraph::new(1);
    g.add_edge(0, 0, 0, true);
    g.set_initial(0);
    let a = GameArena::single_player(&g);
    let res = solve_buchi_game(&a, Player::Min);
    assert!(res.min_winning.iter().all(|&x| x));
    let mut h = WeightedGraph::new(1);
    h.add_edge(0, 0, 0, false);
    let a = GameArena::single_player(&h);
    let res = solve_buchi_game(&a, Player::Min);
    assert!(!res.min_winning[0]);
}
