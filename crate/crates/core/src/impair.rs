//! Impair verification: the cheapest cost at which some trace can be
//! rewritten into an undesirable language, and witnesses within ε of it.
//!
//! Everything is first solved on a weighted graph whose accepting lassos
//! from the initial vertices are the attacks; the product-level entry points
//! build that graph and project witnesses back to words.

use alloc::vec::Vec;

use crate::aggregator::{eval_aggregator, Aggregator};
use crate::automata::{KripkeStructure, Nba, RepairMachine, Symbol};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::lasso::Lasso;
use crate::product::{build_product, ProductGraph, ProductOptions, ProductVertex};
use crate::rational::{Rational, Threshold};
use crate::repair::discount_steps;
use crate::solvers::dsum::min_dsum_single;
use crate::solvers::karp::{cycle_through, karp_within, zero_cycle};
use crate::solvers::lassos::{min_limsup_cycle, minimax_lasso_sup};
use crate::threshold::{Attainment, MemoryClass, Orientation, ThresholdResult};

/// An attack on the graph: a lasso of edge ids from an initial vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphWitness {
    pub edges: Lasso<usize>,
    pub cost: Rational,
}

impl GraphWitness {
    fn new(g: &WeightedGraph, agg: &Aggregator, edges: Lasso<usize>) -> Self {
        let cost = eval_aggregator(agg, &edges.map(|&e| g.edge(e).weight));
        GraphWitness { edges, cost }
    }

    pub fn vertices(&self, g: &WeightedGraph) -> Lasso<usize> {
        self.edges.map(|&e| g.edge(e).src)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImpairWitness {
    pub trace: Lasso<Symbol>,
    pub rewrite: Lasso<Symbol>,
    pub run: Lasso<ProductVertex>,
    pub cost: Rational,
}

fn finite(x: Rational, att: Attainment, mem: MemoryClass) -> ThresholdResult {
    ThresholdResult::new(Threshold::Finite(x), att, mem, Orientation::Impair)
}

/// The `i`-th round mean: `(2^{i+1}−1)` laps of a cycle `(d1, n1)` for each
/// lap of `(d2, n2)`, over `i` rounds.
pub fn mean_round_value(d1: u64, n1: u64, d2: u64, n2: u64, i: u32) -> Rational {
    let laps = Rational::from(2u64).pow(i + 1) - Rational::one();
    let i = Rational::from(u64::from(i));
    (&laps * Rational::from(d1) + &i * Rational::from(d2)) / (&laps * Rational::from(n1) + &i * Rational::from(n2))
}

/// Least `i ≥ 1` with `a_i ≤ d1/n1 + ε`.
pub fn mean_round_index(d1: u64, n1: u64, d2: u64, n2: u64, epsilon: &Rational) -> u32 {
    let target = Rational::new(d1 as i64, n1 as i64) + epsilon;
    let mut i = 1;
    while mean_round_value(d1, n1, d2, n2, i) > target {
        i += 1;
    }
    i
}

/// Vertices from which an accepting lasso starts; the searches below stay
/// inside them.
fn lasso_region(g: &WeightedGraph) -> Vec<bool> {
    g.accepting_lasso_region(|_| true)
}

pub fn graph_impair_threshold(g: &WeightedGraph, agg: &Aggregator) -> Result<ThresholdResult> {
    Ok(analyze(g, agg)?.map(|a| a.result).unwrap_or_else(|| ThresholdResult::infinite(Orientation::Impair)))
}

pub fn graph_impair_witness(g: &WeightedGraph, agg: &Aggregator, epsilon: &Rational) -> Result<(ThresholdResult, GraphWitness)> {
    if !epsilon.is_positive() {
        return Err(Error::NonPositiveEpsilon);
    }
    let an = analyze(g, agg)?.ok_or(Error::Infeasible)?;
    let w = match an.exact {
        Some(l) => GraphWitness::new(g, agg, l),
        None => match (&an.detail, agg) {
            (Detail::DSum { values, strategy, start }, Aggregator::DSum(l)) => {
                dsum_witness(g, agg, l, epsilon, values, strategy, *start)?
            }
            (Detail::Mean { keep, cycle }, _) => mean_witness(g, agg, epsilon, keep, cycle)?,
            _ => unreachable!("only discounted and mean thresholds can be unattained"),
        },
    };
    Ok((an.result, w))
}

enum Detail {
    None,
    DSum { values: Vec<Option<Rational>>, strategy: Vec<Option<usize>>, start: usize },
    Mean { keep: Vec<bool>, cycle: Vec<usize> },
}

struct Analysis {
    result: ThresholdResult,
    /// An optimal lasso when the threshold is attained.
    exact: Option<Lasso<usize>>,
    detail: Detail,
}

fn analyze(g: &WeightedGraph, agg: &Aggregator) -> Result<Option<Analysis>> {
    agg.check()?;
    let region = lasso_region(g);
    if !g.initial().iter().any(|&v| region[v]) {
        return Ok(None);
    }
    match agg {
        Aggregator::Sup | Aggregator::LimSup => {
            let r = if *agg == Aggregator::Sup { minimax_lasso_sup(g) } else { min_limsup_cycle(g) };
            Ok(Some(Analysis { result: r.result, exact: r.lasso, detail: Detail::None }))
        }
        Aggregator::DSum(l) => dsum_analysis(g, l, &region).map(Some),
        Aggregator::Mean => mean_analysis(g, &region).map(Some),
    }
}

/// Graph edge ids kept by `induced(keep)`, in the induced graph's order.
fn induced_edge_ids(g: &WeightedGraph, keep: &[bool]) -> Vec<usize> {
    (0..g.edges().len()).filter(|&e| keep[g.edge(e).src] && keep[g.edge(e).dst]).collect()
}

fn dsum_analysis(g: &WeightedGraph, lambda: &Rational, region: &[bool]) -> Result<Analysis> {
    let (sub, old_of_new) = g.induced(region);
    let edge_of_new = induced_edge_ids(g, region);
    let vm = min_dsum_single(&sub, lambda)?;
    let mut values = alloc::vec![None; g.num_vertices()];
    let mut strategy = alloc::vec![None; g.num_vertices()];
    for (i, &v) in old_of_new.iter().enumerate() {
        values[v] = vm.values[i].clone();
        strategy[v] = vm.strategy_min[i].map(|e| edge_of_new[e]);
    }
    let (start, tau) = g
        .initial()
        .iter()
        .filter_map(|&v| values[v].clone().map(|x| (v, x)))
        .fold(None, |best: Option<(usize, Rational)>, (v, x)| match best {
            Some((_, ref b)) if *b <= x => best,
            _ => Some((v, x)),
        })
        .expect("an initial vertex lies in the lasso region");
    let tight = |e: usize| {
        let ed = g.edge(e);
        region[ed.src]
            && region[ed.dst]
            && values[ed.src].as_ref() == Some(&(Rational::from(ed.weight) + lambda * values[ed.dst].as_ref().unwrap()))
    };
    // Optimal initial vertices with an accepting lasso of tight edges.
    let tight_region = g.accepting_lasso_region(tight);
    let optimal: Vec<usize> = g.initial().iter().copied().filter(|&v| values[v].as_ref() == Some(&tau) && tight_region[v]).collect();
    if let Some(&v0) = optimal.first() {
        let reach = g.reachable(&[v0], tight);
        let e = g
            .accepting_cycle_edges(tight)
            .into_iter()
            .find(|&e| reach[g.edge(e).src])
            .expect("tight region contains an accepting cycle");
        let src = g.edge(e).src;
        let prefix = g.bfs_path(&[v0], |v| v == src, tight).expect("reachable");
        let cycle = cycle_through(g, e, tight).expect("edge on a tight cycle");
        return Ok(Analysis {
            result: finite(tau, Attainment::Attained, MemoryClass::Positional),
            exact: Some(Lasso::new(prefix, cycle)?),
            detail: Detail::None,
        });
    }
    Ok(Analysis {
        result: finite(tau, Attainment::InfimumOnly, MemoryClass::Finite),
        exact: None,
        detail: Detail::DSum { values, strategy, start },
    })
}

/// `k` optimal steps, then a shortest path to an accepting cycle and that
/// cycle forever; the tail after `k` steps costs at most `λᵏ·W/(1−λ)`.
fn dsum_witness(
    g: &WeightedGraph,
    agg: &Aggregator,
    lambda: &Rational,
    epsilon: &Rational,
    values: &[Option<Rational>],
    strategy: &[Option<usize>],
    start: usize,
) -> Result<GraphWitness> {
    let inside = |e: usize| values[g.edge(e).src].is_some() && values[g.edge(e).dst].is_some();
    let k = discount_steps(lambda, g.max_weight(), epsilon);
    let mut prefix = Vec::new();
    let mut v = start;
    for _ in 0..k {
        let e = strategy[v].expect("optimal successor inside the region");
        prefix.push(e);
        v = g.edge(e).dst;
    }
    let (path, cycle) = path_to_accepting_cycle(g, v, inside)?;
    prefix.extend(path);
    Ok(GraphWitness::new(g, agg, Lasso::new(prefix, cycle)?))
}

/// Shortest path from `v` to the source of an accepting cycle edge, and the
/// cycle through that edge.
fn path_to_accepting_cycle(g: &WeightedGraph, v: usize, keep: impl Fn(usize) -> bool + Copy) -> Result<(Vec<usize>, Vec<usize>)> {
    let acc = g.accepting_cycle_edges(keep);
    let mut is_src = alloc::vec![false; g.num_vertices()];
    for &e in &acc {
        is_src[g.edge(e).src] = true;
    }
    let path = g.bfs_path(&[v], |u| is_src[u], keep).ok_or(Error::Infeasible)?;
    let end = path.last().map_or(v, |&e| g.edge(e).dst);
    let e = acc.into_iter().find(|&e| g.edge(e).src == end).expect("goal is an accepting source");
    let cycle = cycle_through(g, e, keep).expect("accepting edge lies on a cycle");
    Ok((path, cycle))
}

fn mean_analysis(g: &WeightedGraph, region: &[bool]) -> Result<Analysis> {
    let reach = g.reachable(g.initial(), |e| region[g.edge(e).src] && region[g.edge(e).dst]);
    let within = |e: usize| region[g.edge(e).src] && region[g.edge(e).dst];
    let scc = g.scc_ids(within);
    // SCCs holding an accepting cycle, reachable from the start.
    let mut comps: Vec<usize> = g.accepting_cycle_edges(within).into_iter().map(|e| scc[g.edge(e).src]).collect();
    comps.sort_unstable();
    comps.dedup();
    let mut found: Vec<(Rational, Vec<bool>, Vec<usize>)> = Vec::new();
    for c in comps {
        let keep: Vec<bool> = (0..g.num_vertices()).map(|v| region[v] && scc[v] == c).collect();
        if !(0..g.num_vertices()).any(|v| keep[v] && reach[v]) {
            continue;
        }
        let r = karp_within(g, &keep)?;
        found.push((r.value, keep, r.edges));
    }
    let tau = found.iter().map(|f| f.0.clone()).min().ok_or(Error::Infeasible)?;
    // Attained iff some optimal component has a minimum-mean cycle through
    // an accepting edge.
    for (value, keep, _) in &found {
        if *value != tau {
            continue;
        }
        if let Some(cycle) = zero_cycle(g, keep, &tau, |e| g.is_accepting_edge(e)) {
            let first = g.edge(cycle[0]).src;
            let prefix = g.bfs_path(g.initial(), |v| v == first, within).expect("component is reachable");
            return Ok(Analysis {
                result: finite(tau, Attainment::Attained, MemoryClass::Positional),
                exact: Some(Lasso::new(prefix, cycle)?),
                detail: Detail::None,
            });
        }
    }
    let (_, keep, cycle) = found.into_iter().find(|f| f.0 == tau).unwrap();
    Ok(Analysis {
        result: finite(tau, Attainment::InfimumOnly, MemoryClass::InfiniteForExact),
        exact: None,
        detail: Detail::Mean { keep, cycle },
    })
}

/// `2^{i+1} − 1` laps of the cheapest cycle, then one walk through an
/// accepting edge back to it, repeated.
fn mean_witness(g: &WeightedGraph, agg: &Aggregator, epsilon: &Rational, keep: &[bool], c1: &[usize]) -> Result<GraphWitness> {
    let inside = |e: usize| keep[g.edge(e).src] && keep[g.edge(e).dst];
    let x = g.edge(c1[0]).src;
    let acc = g.accepting_cycle_edges(inside);
    let mut is_src = alloc::vec![false; g.num_vertices()];
    for &e in &acc {
        is_src[g.edge(e).src] = true;
    }
    let mut back = g.bfs_path(&[x], |u| is_src[u], inside).expect("strongly connected");
    let u = back.last().map_or(x, |&e| g.edge(e).dst);
    let e = acc.into_iter().find(|&e| g.edge(e).src == u).unwrap();
    back.push(e);
    back.extend(g.bfs_path(&[g.edge(e).dst], |v| v == x, inside).expect("strongly connected"));

    let sum = |es: &[usize]| es.iter().map(|&e| g.edge(e).weight).sum::<u64>();
    let (d1, n1, d2, n2) = (sum(c1), c1.len() as u64, sum(&back), back.len() as u64);
    let i = mean_round_index(d1, n1, d2, n2, epsilon);
    let laps = (1usize << (i + 1)) - 1;
    let mut cycle = Vec::with_capacity(laps * c1.len() + back.len());
    for _ in 0..laps {
        cycle.extend_from_slice(c1);
    }
    cycle.extend(back);
    let region = lasso_region(g);
    let within = |e: usize| region[g.edge(e).src] && region[g.edge(e).dst];
    let prefix = g.bfs_path(g.initial(), |v| v == x, within).expect("component is reachable");
    Ok(GraphWitness::new(g, agg, Lasso::new(prefix, cycle)?))
}

/// The product of structure, machine and the undesirable language.
pub fn impair_product(k: &KripkeStructure, t: &RepairMachine, a: &Nba) -> Result<ProductGraph> {
    t.aggregator().check()?;
    build_product(k, t, a, ProductOptions::default())
}

pub fn impair_threshold(k: &KripkeStructure, t: &RepairMachine, a: &Nba) -> Result<ThresholdResult> {
    let p = impair_product(k, t, a)?;
    graph_impair_threshold(&p.graph, t.aggregator())
}

pub fn impair_witness(k: &KripkeStructure, t: &RepairMachine, a: &Nba, epsilon: &Rational) -> Result<(ThresholdResult, ImpairWitness)> {
    let p = impair_product(k, t, a)?;
    let (r, w) = graph_impair_witness(&p.graph, t.aggregator(), epsilon)?;
    Ok((r, project_witness(k, &p, &w)?))
}

/// Reads the trace, the rewrite and the run off a product lasso.
pub fn project_witness(k: &KripkeStructure, p: &ProductGraph, w: &GraphWitness) -> Result<ImpairWitness> {
    let run = w.edges.map(|&e| p.vertices[p.graph.edge(e).src]);
    let trace = run.map(|v| k.label(v.kripke));
    let words = |es: &[usize]| -> Vec<Symbol> {
        es.iter().flat_map(|&e| p.witnesses[e].transition.output.iter().copied()).collect()
    };
    let rewrite = Lasso::new(words(w.edges.prefix()), words(w.edges.cycle()))?;
    Ok(ImpairWitness { trace, rewrite, run, cost: w.cost.clone() })
}
