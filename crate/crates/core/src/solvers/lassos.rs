//! Single-player lasso searches: pruning to accepting lassos and the
//! bottleneck threshold searches for Sup and LimSup.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::graph::WeightedGraph;
use crate::lasso::Lasso;
use crate::product::ProductGraph;
use crate::rational::{Rational, Threshold};
use crate::solvers::karp::cycle_through;
use crate::threshold::{Attainment, MemoryClass, Orientation, ThresholdResult};

/// A threshold with an optimal lasso of edge ids when finite.
#[derive(Clone, Debug)]
pub struct LassoThreshold {
    pub result: ThresholdResult,
    pub lasso: Option<Lasso<usize>>,
}

/// Vertices from which some accepting lasso exists.
pub fn accepting_lasso_vertices(g: &WeightedGraph) -> Vec<bool> {
    g.accepting_lasso_region(|_| true)
}

pub fn prune_to_accepting_lassos(g: &ProductGraph) -> ProductGraph {
    g.induced(&accepting_lasso_vertices(&g.graph)).0
}

pub fn prune_graph(g: &WeightedGraph) -> (WeightedGraph, Vec<usize>) {
    g.induced(&accepting_lasso_vertices(g))
}

/// Prefix from `V_I` to the source of `e` over `prefix_ok` edges, then the
/// cycle through `e` over `cycle_ok` edges.
pub fn lasso_through(
    g: &WeightedGraph,
    e: usize,
    prefix_ok: impl Fn(usize) -> bool,
    cycle_ok: impl Fn(usize) -> bool,
) -> Option<Lasso<usize>> {
    let src = g.edge(e).src;
    let prefix = g.bfs_path(g.initial(), |v| v == src, prefix_ok)?;
    let cycle = cycle_through(g, e, cycle_ok)?;
    Lasso::new(prefix, cycle).ok()
}

fn distinct_weights(g: &WeightedGraph) -> Vec<u64> {
    let set: BTreeSet<u64> = g.edges().iter().map(|e| e.weight).collect();
    set.into_iter().collect()
}

fn found(c: u64, lasso: Lasso<usize>) -> LassoThreshold {
    LassoThreshold {
        result: ThresholdResult::new(
            Threshold::Finite(Rational::from(c)),
            Attainment::Attained,
            MemoryClass::Positional,
            Orientation::Impair,
        ),
        lasso: Some(lasso),
    }
}

/// Least `c` such that an accepting lasso from `V_I` uses only edges of
/// weight at most `c`.
pub fn minimax_lasso_sup(g: &WeightedGraph) -> LassoThreshold {
    for c in distinct_weights(g) {
        let keep = |e: usize| g.edge(e).weight <= c;
        let reach = g.reachable(g.initial(), keep);
        let cand = g.accepting_cycle_edges(keep).into_iter().find(|&e| reach[g.edge(e).src]);
        if let Some(e) = cand {
            let lasso = lasso_through(g, e, keep, keep).expect("edge lies on a reachable cycle");
            return found(c, lasso);
        }
    }
    LassoThreshold { result: ThresholdResult::infinite(Orientation::Impair), lasso: None }
}

/// Least `c` such that a reachable accepting cycle uses only edges of
/// weight at most `c`; the access path is unconstrained.
pub fn min_limsup_cycle(g: &WeightedGraph) -> LassoThreshold {
    let reach = g.reachable(g.initial(), |_| true);
    for c in distinct_weights(g) {
        let keep = |e: usize| g.edge(e).weight <= c;
        let cand = g.accepting_cycle_edges(keep).into_iter().find(|&e| reach[g.edge(e).src]);
        if let Some(e) = cand {
            let lasso = lasso_through(g, e, |_| true, keep).expect("edge lies on a reachable cycle");
            return found(c, lasso);
        }
    }
    LassoThreshold { result: ThresholdResult::infinite(Orientation::Impair), lasso: None }
}
