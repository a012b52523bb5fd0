use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::lasso::Lasso;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleResult {
    pub value: Rational,
    /// Access path from an initial vertex (empty if none reaches the cycle)
    /// and the cycle, as vertices.
    pub cycle: Lasso<usize>,
    /// Cycle edges in order.
    pub edges: Vec<usize>,
    pub total: u64,
    pub length: usize,
}

/// Minimum cycle mean of `g` with a simple witness cycle.
pub fn karp_min_mean_cycle(g: &WeightedGraph) -> Result<CycleResult> {
    karp_within(g, &alloc::vec![true; g.num_vertices()])
}

/// Karp's algorithm on the subgraph induced by `keep`.
pub fn karp_within(g: &WeightedGraph, keep: &[bool]) -> Result<CycleResult> {
    let n = g.num_vertices();
    let usable = |e: usize| {
        let ed = g.edge(e);
        keep[ed.src] && keep[ed.dst]
    };
    let m = keep.iter().filter(|&&k| k).count();
    if m == 0 {
        return Err(Error::Acyclic);
    }
    // d[k][v]: least weight of a walk with exactly k edges ending at v.
    let mut d: Vec<Vec<Option<i128>>> = alloc::vec![alloc::vec![None; n]; m + 1];
    for v in 0..n {
        if keep[v] {
            d[0][v] = Some(0);
        }
    }
    for k in 0..m {
        for (e, ed) in g.edges().iter().enumerate() {
            if !usable(e) {
                continue;
            }
            if let Some(x) = d[k][ed.src] {
                let cand = x + ed.weight as i128;
                if d[k + 1][ed.dst].is_none_or(|y| cand < y) {
                    d[k + 1][ed.dst] = Some(cand);
                }
            }
        }
    }
    let mut best: Option<Rational> = None;
    for v in 0..n {
        let Some(dn) = d[m][v] else { continue };
        let mut worst: Option<Rational> = None;
        for (k, row) in d.iter().enumerate().take(m) {
            if let Some(dk) = row[v] {
                let r = Rational::new((dn - dk) as i64, (m - k) as i64);
                if worst.as_ref().is_none_or(|w| r > *w) {
                    worst = Some(r);
                }
            }
        }
        if let Some(w) = worst {
            if best.as_ref().is_none_or(|b| w < *b) {
                best = Some(w);
            }
        }
    }
    let value = best.ok_or(Error::Acyclic)?;
    let edges = zero_cycle(g, keep, &value, |_| true).expect("a cycle of minimum mean exists");
    let total: u64 = edges.iter().map(|&e| g.edge(e).weight).sum();
    let length = edges.len();
    let verts: Vec<usize> = edges.iter().map(|&e| g.edge(e).src).collect();
    let prefix = g
        .bfs_path(g.initial(), |v| v == verts[0], |_| true)
        .map(|p| p.iter().map(|&e| g.edge(e).src).collect())
        .unwrap_or_default();
    Ok(CycleResult { value, cycle: Lasso::new(prefix, verts)?, edges, total, length })
}

/// Potentials for weights `b·w − a` (no negative cycle assumed inside
/// `keep`), by Bellman–Ford from a virtual source.
pub fn potentials(g: &WeightedGraph, keep: &[bool], mean: &Rational) -> Vec<i128> {
    let (a, b) = mean.parts_i64();
    let n = g.num_vertices();
    let mut pi = alloc::vec![0i128; n];
    for _ in 0..=n {
        let mut changed = false;
        for ed in g.edges() {
            if keep[ed.src] && keep[ed.dst] {
                let w = b as i128 * ed.weight as i128 - a as i128;
                if pi[ed.src] + w < pi[ed.dst] {
                    pi[ed.dst] = pi[ed.src] + w;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    pi
}

/// Edges on which the potentials are tight for mean `mean`.
pub fn tight_edges(g: &WeightedGraph, keep: &[bool], mean: &Rational) -> Vec<bool> {
    let (a, b) = mean.parts_i64();
    let pi = potentials(g, keep, mean);
    g.edges()
        .iter()
        .map(|ed| {
            keep[ed.src] && keep[ed.dst] && pi[ed.src] + b as i128 * ed.weight as i128 - a as i128 == pi[ed.dst]
        })
        .collect()
}

/// A simple cycle of mean exactly `mean` (the minimum inside `keep`) whose
/// designated edge satisfies `want`, if one exists.
pub fn zero_cycle(g: &WeightedGraph, keep: &[bool], mean: &Rational, want: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    let tight = tight_edges(g, keep, mean);
    let scc = g.scc_ids(|e| tight[e]);
    let e = (0..g.edges().len()).find(|&e| tight[e] && want(e) && scc[g.edge(e).src] == scc[g.edge(e).dst])?;
    cycle_through(g, e, |x| tight[x] && scc[g.edge(x).src] == scc[g.edge(e).src])
}

/// Edge `e` followed by a shortest `keep`-path back to its source.
pub fn cycle_through(g: &WeightedGraph, e: usize, keep: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    let ed = g.edge(e);
    let back = g.bfs_path(&[ed.dst], |v| v == ed.src, keep)?;
    let mut cyc = alloc::vec![e];
    cyc.extend(back);
    Some(cyc)
}

/// Best mean reachable from every vertex when maximizing, by Howard's
/// policy iteration in exact arithmetic. Every vertex needs a successor.
pub fn max_mean_values(g: &WeightedGraph) -> Result<Vec<Rational>> {
    let n = g.num_vertices();
    let mut pi: Vec<usize> = Vec::with_capacity(n);
    for v in 0..n {
        pi.push(*g.out_edges(v).first().ok_or(Error::NoSuccessor(v))?);
    }
    loop {
        let (eta, h) = evaluate_policy(g, &pi);
        let mut changed = false;
        for v in 0..n {
            let mut best = pi[v];
            for &e in g.out_edges(v) {
                if eta[g.edge(e).dst] > eta[g.edge(best).dst] {
                    best = e;
                }
            }
            if eta[g.edge(best).dst] > eta[v] {
                pi[v] = best;
                changed = true;
            }
        }
        if !changed {
            for v in 0..n {
                for &e in g.out_edges(v) {
                    let ed = g.edge(e);
                    if eta[ed.dst] != eta[v] {
                        continue;
                    }
                    let cand = Rational::from(ed.weight) - &eta[v] + &h[ed.dst];
                    if cand > h[v] {
                        pi[v] = e;
                        changed = true;
                        break;
                    }
                }
            }
        }
        if !changed {
            return Ok(eta);
        }
    }
}

/// Gain and bias of a positional policy.
fn evaluate_policy(g: &WeightedGraph, pi: &[usize]) -> (Vec<Rational>, Vec<Rational>) {
    let n = g.num_vertices();
    let mut eta = alloc::vec![Rational::zero(); n];
    let mut h = alloc::vec![Rational::zero(); n];
    let mut state = alloc::vec![0u8; n];
    for start in 0..n {
        if state[start] == 2 {
            continue;
        }
        let mut path = Vec::new();
        let mut v = start;
        while state[v] == 0 {
            state[v] = 1;
            path.push(v);
            v = g.edge(pi[v]).dst;
        }
        let mut upto = path.len();
        if state[v] == 1 {
            let idx = path.iter().position(|&x| x == v).unwrap();
            let cycle = &path[idx..];
            let total: u64 = cycle.iter().map(|&c| g.edge(pi[c]).weight).sum();
            let mean = Rational::new(total as i64, cycle.len() as i64);
            eta[cycle[0]] = mean.clone();
            h[cycle[0]] = Rational::zero();
            for &c in cycle.iter().skip(1).rev() {
                let ed = g.edge(pi[c]);
                eta[c] = mean.clone();
                h[c] = Rational::from(ed.weight) - &mean + &h[ed.dst];
            }
            for &c in cycle {
                state[c] = 2;
            }
            upto = idx;
        }
        for &c in path[..upto].iter().rev() {
            let ed = g.edge(pi[c]);
            eta[c] = eta[ed.dst].clone();
            h[c] = Rational::from(ed.weight) - &eta[c] + &h[ed.dst];
            state[c] = 2;
        }
    }
    (eta, h)
}
