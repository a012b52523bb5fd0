//! Brute-force ground truth for small instances: lasso enumeration, Max
//! strategy enumeration, bounded rewrite search and a seeded instance
//! generator.
//!
//! Nothing here shares code with the solvers beyond plain reachability.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aggregator::{eval_aggregator, Aggregator};
use crate::automata::{Alphabet, KripkeStructure, Nba, RepairMachine, RmTransition, Symbol};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::lasso::Lasso;
use crate::product::{build_arena, build_product, output_product, GameArena, ProductOptions};
use crate::rational::{Rational, Threshold};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_prefix: usize,
    pub max_cycle: usize,
    pub max_vertices: usize,
    pub max_strategies: u64,
    pub max_lassos: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_prefix: usize::MAX, max_cycle: usize::MAX, max_vertices: 64, max_strategies: 4096, max_lassos: 200_000 }
    }
}

impl OracleBudget {
    /// Prefix `|V|²` and cycle `|V|`, the bounds that make lasso optima exact.
    pub fn for_vertices(self, n: usize) -> Self {
        OracleBudget { max_prefix: self.max_prefix.min(n * n), max_cycle: self.max_cycle.min(n), ..self }
    }
}

/// Every lasso made of a simple path from `starts` closed by an edge back
/// onto the path, restricted to `keep` vertices. Edge ids.
pub fn enumerate_lassos(g: &WeightedGraph, starts: &[usize], keep: &[bool], budget: &OracleBudget) -> Result<Vec<Lasso<usize>>> {
    let n = g.num_vertices();
    if n > budget.max_vertices {
        return Err(Error::BudgetExceeded(alloc::format!("{n} vertices")));
    }
    let budget = budget.for_vertices(n);
    let mut out = Vec::new();
    let mut on_path = alloc::vec![usize::MAX; n];
    let mut verts: Vec<usize> = Vec::new();
    let mut edges: Vec<usize> = Vec::new();
    let starts: BTreeSet<usize> = starts.iter().copied().filter(|&v| keep[v]).collect();
    for s in starts {
        verts.push(s);
        on_path[s] = 0;
        dfs(g, keep, &budget, &mut on_path, &mut verts, &mut edges, &mut out)?;
        on_path[s] = usize::MAX;
        verts.pop();
    }
    Ok(out)
}

fn dfs(
    g: &WeightedGraph,
    keep: &[bool],
    budget: &OracleBudget,
    on_path: &mut [usize],
    verts: &mut Vec<usize>,
    edges: &mut Vec<usize>,
    out: &mut Vec<Lasso<usize>>,
) -> Result<()> {
    let v = *verts.last().unwrap();
    for &e in g.out_edges(v) {
        let u = g.edge(e).dst;
        if !keep[u] {
            continue;
        }
        let j = on_path[u];
        if j != usize::MAX {
            let cycle_len = edges.len() + 1 - j;
            if j <= budget.max_prefix && cycle_len <= budget.max_cycle {
                let mut cycle = edges[j..].to_vec();
                cycle.push(e);
                out.push(Lasso::new(edges[..j].to_vec(), cycle)?);
                if out.len() > budget.max_lassos {
                    return Err(Error::BudgetExceeded(alloc::format!("more than {} lassos", budget.max_lassos)));
                }
            }
        } else {
            on_path[u] = verts.len();
            verts.push(u);
            edges.push(e);
            dfs(g, keep, budget, on_path, verts, edges, out)?;
            edges.pop();
            verts.pop();
            on_path[u] = usize::MAX;
        }
    }
    Ok(())
}

fn cycle_accepts(g: &WeightedGraph, l: &Lasso<usize>) -> bool {
    l.cycle().iter().any(|&e| g.is_accepting_edge(e))
}

/// Accepting lassos from the initial vertices.
pub fn enumerate_accepting_lassos(g: &WeightedGraph, budget: &OracleBudget) -> Result<Vec<Lasso<usize>>> {
    let all = alloc::vec![true; g.num_vertices()];
    Ok(enumerate_lassos(g, g.initial(), &all, budget)?.into_iter().filter(|l| cycle_accepts(g, l)).collect())
}

fn costs(g: &WeightedGraph, l: &Lasso<usize>) -> Lasso<u64> {
    l.map(|&e| g.edge(e).weight)
}

/// Every simple cycle, each listed once from its least vertex. Edge ids.
pub fn enumerate_simple_cycles(g: &WeightedGraph, budget: &OracleBudget) -> Result<Vec<Vec<usize>>> {
    let n = g.num_vertices();
    if n > budget.max_vertices {
        return Err(Error::BudgetExceeded(alloc::format!("{n} vertices")));
    }
    let mut out = Vec::new();
    for root in 0..n {
        let mut on_path = alloc::vec![false; n];
        on_path[root] = true;
        let mut path = Vec::new();
        cycles_from(g, root, root, &mut on_path, &mut path, &mut out, budget)?;
    }
    Ok(out)
}

fn cycles_from(
    g: &WeightedGraph,
    root: usize,
    v: usize,
    on_path: &mut [bool],
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    budget: &OracleBudget,
) -> Result<()> {
    for &e in g.out_edges(v) {
        let u = g.edge(e).dst;
        if u == root {
            let mut c = path.clone();
            c.push(e);
            out.push(c);
            if out.len() > budget.max_lassos {
                return Err(Error::BudgetExceeded(alloc::format!("more than {} cycles", budget.max_lassos)));
            }
        } else if u > root && !on_path[u] {
            on_path[u] = true;
            path.push(e);
            cycles_from(g, root, u, on_path, path, out, budget)?;
            path.pop();
            on_path[u] = false;
        }
    }
    Ok(())
}

/// Per-graph data shared by all aggregators and start sets.
struct Runs {
    cycles: Vec<Vec<usize>>,
    /// `reach[v][u]`: `u` reachable from `v`.
    reach: Vec<Vec<bool>>,
    /// Vertices lying on an accepting simple cycle.
    on_accepting: Vec<bool>,
    /// Vertices that can reach an accepting simple cycle.
    live: Vec<bool>,
}

impl Runs {
    fn new(g: &WeightedGraph, budget: &OracleBudget) -> Result<Self> {
        let n = g.num_vertices();
        let cycles = enumerate_simple_cycles(g, budget)?;
        let reach: Vec<Vec<bool>> = (0..n).map(|v| g.reachable(&[v], |_| true)).collect();
        let mut on_accepting = alloc::vec![false; n];
        for c in &cycles {
            if c.iter().any(|&e| g.is_accepting_edge(e)) {
                for &e in c {
                    on_accepting[g.edge(e).src] = true;
                }
            }
        }
        let live = (0..n).map(|v| (0..n).any(|u| on_accepting[u] && reach[v][u])).collect();
        Ok(Runs { cycles, reach, on_accepting, live })
    }

    fn reached(&self, starts: &[usize], v: usize) -> bool {
        starts.iter().any(|&s| self.reach[s][v])
    }

    /// Least `c` such that `v` is reachable from `starts` over edges of
    /// weight at most `c`.
    fn bottleneck(g: &WeightedGraph, starts: &[usize]) -> Vec<Option<u64>> {
        let mut ws: Vec<u64> = g.edges().iter().map(|e| e.weight).collect();
        ws.push(0);
        ws.sort_unstable();
        ws.dedup();
        let mut out = alloc::vec![None; g.num_vertices()];
        for c in ws.into_iter().rev() {
            for (v, r) in g.reachable(starts, |e| g.edge(e).weight <= c).into_iter().enumerate() {
                if r {
                    out[v] = Some(c);
                }
            }
        }
        out
    }

    fn value(&self, g: &WeightedGraph, starts: &[usize], agg: &Aggregator, budget: &OracleBudget) -> Result<Threshold> {
        let maxw = |c: &[usize]| c.iter().map(|&e| g.edge(e).weight).max().unwrap_or(0);
        let accepting = |c: &[usize]| c.iter().any(|&e| g.is_accepting_edge(e));
        let src = |c: &[usize]| g.edge(c[0]).src;
        let best = match agg {
            Aggregator::Sup => {
                let bn = Self::bottleneck(g, starts);
                self.cycles
                    .iter()
                    .filter(|c| accepting(c))
                    .filter_map(|c| c.iter().filter_map(|&e| bn[g.edge(e).src]).min().map(|b| Rational::from(b.max(maxw(c)))))
                    .min()
            }
            Aggregator::LimSup => self
                .cycles
                .iter()
                .filter(|c| accepting(c) && self.reached(starts, src(c)))
                .map(|c| Rational::from(maxw(c)))
                .min(),
            Aggregator::Mean => self
                .cycles
                .iter()
                .filter(|c| {
                    let x = src(c);
                    self.reached(starts, x) && (0..g.num_vertices()).any(|u| self.on_accepting[u] && self.reach[x][u] && self.reach[u][x])
                })
                .map(|c| Rational::mean_of(&c.iter().map(|&e| g.edge(e).weight).collect::<Vec<_>>()))
                .min(),
            // Infimum over runs that can still be finished off.
            Aggregator::DSum(_) => enumerate_lassos(g, starts, &self.live, budget)?
                .iter()
                .map(|l| eval_aggregator(agg, &costs(g, l)))
                .min(),
        };
        Ok(best.map(Threshold::Finite).unwrap_or(Threshold::Infinite))
    }
}

/// Least aggregated cost (an infimum for DSum and Mean) over accepting runs
/// from the initial vertices.
pub fn brute_impair_threshold(g: &WeightedGraph, agg: &Aggregator, budget: &OracleBudget) -> Result<Threshold> {
    Ok(brute_impair_thresholds(g, core::slice::from_ref(agg), budget)?.remove(0))
}

pub fn brute_impair_thresholds(g: &WeightedGraph, aggs: &[Aggregator], budget: &OracleBudget) -> Result<Vec<Threshold>> {
    let runs = Runs::new(g, budget)?;
    aggs.iter().map(|a| runs.value(g, g.initial(), a, budget)).collect()
}

/// Which Max strategies the repair oracle ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaxClass {
    /// All positional strategies: the exact game value.
    Positional,
    /// Choices depending only on the Kripke state: a lower bound.
    ByKripkeState,
}

/// Min's graph once Max fixes `choice` (Max vertex ↦ Min vertex).
pub fn fix_max(a: &GameArena, choice: &[usize]) -> WeightedGraph {
    let mut g = WeightedGraph::new(a.n_min());
    for v in 0..a.n_min() {
        for &e in a.out_edges(v) {
            let m = a.edge(e).dst;
            g.add_edge(v, choice[m - a.n_min()], a.edge(e).weight, a.is_accepting(m));
        }
    }
    g
}

fn groups(a: &GameArena) -> Vec<Vec<usize>> {
    if a.min_labels.len() != a.n_min() {
        return a.initial().iter().map(|&v| alloc::vec![v]).collect();
    }
    let mut kr: Vec<usize> = a.initial().iter().map(|&v| a.min_labels[v].kripke).collect();
    kr.sort_unstable();
    kr.dedup();
    kr.into_iter().map(|s| a.initial().iter().copied().filter(|&v| a.min_labels[v].kripke == s).collect()).collect()
}

/// Max over Max strategies of Min's best single-player value, worst start
/// group first.
pub fn brute_repair_thresholds(a: &GameArena, aggs: &[Aggregator], class: MaxClass, budget: &OracleBudget) -> Result<Vec<Threshold>> {
    let options: Vec<Vec<usize>> = match class {
        MaxClass::Positional => (a.n_min()..a.len()).map(|m| a.out_edges(m).iter().map(|&e| a.edge(e).dst).collect()).collect(),
        MaxClass::ByKripkeState => {
            if a.max_labels.len() != a.n_max() {
                return Err(Error::Malformed("arena has no Kripke labels".into()));
            }
            let states: BTreeSet<usize> = a.max_labels.iter().map(|m| m.kripke).collect();
            // One option list per Kripke state: its successor states.
            let mut succ: Vec<Vec<usize>> = Vec::new();
            for &s in &states {
                let mut next: BTreeSet<usize> = BTreeSet::new();
                for (i, m) in a.max_labels.iter().enumerate() {
                    if m.kripke == s {
                        for &e in a.out_edges(a.n_min() + i) {
                            next.insert(a.min_labels[a.edge(e).dst].kripke);
                        }
                    }
                }
                succ.push(next.into_iter().collect());
            }
            let states: Vec<usize> = states.into_iter().collect();
            return by_kripke(a, aggs, &states, &succ, budget);
        }
    };
    let mut count: u64 = 1;
    for o in &options {
        count = count.saturating_mul(o.len() as u64);
    }
    if count > budget.max_strategies {
        return Err(Error::BudgetExceeded(alloc::format!("{count} Max strategies")));
    }
    let mut best: Vec<Threshold> = alloc::vec![Threshold::Finite(Rational::zero()); aggs.len()];
    let mut digits = alloc::vec![0usize; options.len()];
    loop {
        let choice: Vec<usize> = digits.iter().zip(&options).map(|(&d, o)| o[d]).collect();
        raise(&mut best, &against(a, &choice, aggs, budget)?);
        if !increment(&mut digits, &options.iter().map(Vec::len).collect::<Vec<_>>()) {
            return Ok(best);
        }
    }
}

fn by_kripke(a: &GameArena, aggs: &[Aggregator], states: &[usize], succ: &[Vec<usize>], budget: &OracleBudget) -> Result<Vec<Threshold>> {
    let mut best: Vec<Threshold> = alloc::vec![Threshold::Finite(Rational::zero()); aggs.len()];
    let mut digits = alloc::vec![0usize; states.len()];
    loop {
        let pick = |s: usize| succ[states.iter().position(|&x| x == s).unwrap()][digits[states.iter().position(|&x| x == s).unwrap()]];
        let choice: Vec<usize> = (0..a.n_max())
            .map(|i| {
                let m = a.n_min() + i;
                let want = pick(a.max_labels[i].kripke);
                let succs: Vec<usize> = a.out_edges(m).iter().map(|&e| a.edge(e).dst).collect();
                succs.iter().copied().find(|&u| a.min_labels[u].kripke == want).unwrap_or(succs[0])
            })
            .collect();
        raise(&mut best, &against(a, &choice, aggs, budget)?);
        if !increment(&mut digits, &succ.iter().map(Vec::len).collect::<Vec<_>>()) {
            return Ok(best);
        }
    }
}

fn raise(best: &mut [Threshold], vals: &[Threshold]) {
    for (b, v) in best.iter_mut().zip(vals) {
        if *v > *b {
            *b = v.clone();
        }
    }
}

fn increment(digits: &mut [usize], radix: &[usize]) -> bool {
    for (d, &r) in digits.iter_mut().zip(radix) {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}

/// Worst start group of Min's best responses to a fixed Max choice.
fn against(a: &GameArena, choice: &[usize], aggs: &[Aggregator], budget: &OracleBudget) -> Result<Vec<Threshold>> {
    let g = fix_max(a, choice);
    let mut worst: Vec<Threshold> = alloc::vec![Threshold::Finite(Rational::zero()); aggs.len()];
    let runs = Runs::new(&g, budget)?;
    for grp in groups(a) {
        let vals = aggs.iter().map(|x| runs.value(&g, &grp, x, budget)).collect::<Result<Vec<_>>>()?;
        raise(&mut worst, &vals);
    }
    Ok(worst)
}

pub fn brute_repair_threshold(
    k: &KripkeStructure,
    t: &RepairMachine,
    b: &Nba,
    class: MaxClass,
    budget: &OracleBudget,
) -> Result<Threshold> {
    let a = build_arena(&build_product(k, t, b, ProductOptions::default())?);
    Ok(brute_repair_thresholds(&a, core::slice::from_ref(t.aggregator()), class, budget)?.remove(0))
}

/// A cheapest lasso run of `output_product(tq, a)` on `input`, kept if its
/// cost is at most `tau`, as machine transitions with its cost.
///
/// Sup and LimSup optima are simple lassos of the run graph. For DSum the
/// prefix may repeat states: it ranges over all paths of length at most
/// `min(max_prefix, 2|V|)`, followed by the cheapest accepting simple lasso.
pub fn bounded_bad_rewrite(
    tq: &RepairMachine,
    a: &Nba,
    input: &Lasso<Symbol>,
    tau: &Rational,
    agg: &Aggregator,
    budget: &OracleBudget,
) -> Result<Option<(Lasso<RmTransition>, Rational)>> {
    let t2 = output_product(tq, a)?;
    let span = input.span();
    let id = |q: usize, pos: usize| q * span + pos;
    let mut g = WeightedGraph::new(t2.num_states() * span);
    let mut trs: Vec<RmTransition> = Vec::new();
    for q in 0..t2.num_states() {
        for pos in 0..span {
            for tr in t2.moves(q, *input.at(pos)) {
                g.add_edge(id(q, pos), id(tr.to, input.next_position(pos)), tr.cost.max(0) as u64, false);
                trs.push(tr.clone());
            }
            if t2.is_accepting(q) {
                g.set_final(id(q, pos));
            }
        }
    }
    for &q in t2.initial() {
        g.set_initial(id(q, 0));
    }
    let n = g.num_vertices();
    let all = alloc::vec![true; n];
    let budget = OracleBudget { max_vertices: budget.max_vertices.max(n), ..*budget };
    let cheapest = |starts: &[usize]| -> Result<Option<(Lasso<usize>, Rational)>> {
        let mut best: Option<(Lasso<usize>, Rational)> = None;
        for l in enumerate_lassos(&g, starts, &all, &budget)? {
            if cycle_accepts(&g, &l) {
                let c = eval_aggregator(agg, &costs(&g, &l));
                if best.as_ref().is_none_or(|(_, b)| c < *b) {
                    best = Some((l, c));
                }
            }
        }
        Ok(best)
    };
    let found = match agg {
        Aggregator::DSum(lambda) => {
            let suffix: Vec<Option<(Lasso<usize>, Rational)>> = (0..n).map(|v| cheapest(&[v])).collect::<Result<_>>()?;
            let depth = budget.max_prefix.min(2 * n);
            // Cheapest length-k path into each vertex.
            let mut layer: Vec<Option<(Rational, Vec<usize>)>> = alloc::vec![None; n];
            for &v in g.initial() {
                layer[v] = Some((Rational::zero(), Vec::new()));
            }
            let mut best: Option<(Lasso<usize>, Rational)> = None;
            let mut scale = Rational::one();
            for _ in 0..=depth {
                for v in 0..n {
                    if let (Some((c, path)), Some((l, sv))) = (&layer[v], &suffix[v]) {
                        let total = c + &(&scale * sv);
                        if best.as_ref().is_none_or(|(_, b)| total < *b) {
                            let (pre, cyc) = l.clone().into_parts();
                            best = Some((Lasso::new([path.clone(), pre].concat(), cyc)?, total));
                        }
                    }
                }
                let mut next: Vec<Option<(Rational, Vec<usize>)>> = alloc::vec![None; n];
                for v in 0..n {
                    if let Some((c, path)) = &layer[v] {
                        for &e in g.out_edges(v) {
                            let u = g.edge(e).dst;
                            let c2 = c + &(&scale * &Rational::from(g.edge(e).weight));
                            if next[u].as_ref().is_none_or(|(b, _)| c2 < *b) {
                                let mut p2 = path.clone();
                                p2.push(e);
                                next[u] = Some((c2, p2));
                            }
                        }
                    }
                }
                layer = next;
                scale = &scale * lambda;
            }
            best
        }
        _ => cheapest(g.initial())?,
    };
    Ok(found.filter(|(_, c)| c <= tau).map(|(l, c)| (l.map(|&e| trs[e].clone()), c)))
}

/// Shape of random instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub max_states: usize,
    pub max_weight: i64,
    pub max_out_word: usize,
    /// Percent chance that a state is accepting.
    pub accepting_percent: u32,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig { max_states: 3, max_weight: 4, max_out_word: 2, accepting_percent: 50 }
    }
}

#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub kripke: KripkeStructure,
    pub machine: RepairMachine,
    pub nba: Nba,
    pub lambda: Rational,
}

/// One instance drawn from `rng`.
pub fn random_instance(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig) -> RandomInstance {
    let sigma = ["a", "b"];
    let gamma = ["x", "y"];
    let mut k = KripkeStructure::new();
    let ns = rng.random_range(1..=cfg.max_states);
    for i in 0..ns {
        k.add_state(alloc::format!("s{i}"), sigma[rng.random_range(0..2)], i == 0);
    }
    for s in 0..ns {
        let outs = rng.random_range(1..=2.min(ns));
        let mut targets = BTreeSet::new();
        while targets.len() < outs {
            targets.insert(rng.random_range(0..ns));
        }
        for t in targets {
            k.add_edge(s, t);
        }
    }
    let lambda = [Rational::new(1, 2), Rational::new(1, 3), Rational::new(2, 3), Rational::new(3, 4)][rng.random_range(0..4)].clone();
    let mut t = RepairMachine::new(Alphabet::from_names(sigma), Alphabet::from_names(gamma), Aggregator::Mean);
    let nq = rng.random_range(1..=cfg.max_states);
    for i in 0..nq {
        let acc = rng.random_range(0..100) < cfg.accepting_percent;
        t.add_state(alloc::format!("q{i}"), i == 0, acc);
    }
    for q in 0..nq {
        for letter in sigma {
            for _ in 0..rng.random_range(1..=2) {
                let len = rng.random_range(0..=cfg.max_out_word).max(usize::from(rng.random_range(0..4) != 0));
                let word: Vec<&str> = (0..len).map(|_| gamma[rng.random_range(0..2)]).collect();
                t.add_named(q, letter, rng.random_range(0..nq), &word, rng.random_range(0..=cfg.max_weight));
            }
        }
    }
    let mut b = Nba::new(Alphabet::from_names(gamma));
    let np = rng.random_range(1..=cfg.max_states);
    for i in 0..np {
        let acc = rng.random_range(0..100) < cfg.accepting_percent;
        b.add_state(alloc::format!("p{i}"), i == 0, acc);
    }
    for p in 0..np {
        for letter in gamma {
            for _ in 0..rng.random_range(1..=2) {
                b.add_named(p, letter, rng.random_range(0..np));
            }
        }
    }
    RandomInstance { kripke: k, machine: t, nba: b, lambda }
}

/// NBA with up to `max_states` states over `alphabet`.
pub fn random_nba(rng: &mut ChaCha8Rng, alphabet: &Alphabet, max_states: usize) -> Nba {
    let mut b = Nba::new(alphabet.clone());
    let n = rng.random_range(1..=max_states);
    for i in 0..n {
        let acc = rng.random_range(0..2) == 0;
        b.add_state(alloc::format!("p{i}"), i == 0 || rng.random_range(0..4) == 0, acc);
    }
    let letters: Vec<Symbol> = alphabet.symbols().collect();
    for p in 0..n {
        for &s in &letters {
            for _ in 0..rng.random_range(0..=2) {
                b.add_transition(p, s, rng.random_range(0..n));
            }
        }
    }
    b
}

/// Lasso word with prefix below `max_prefix` and cycle up to `max_cycle`.
pub fn random_lasso(rng: &mut ChaCha8Rng, alphabet: &Alphabet, max_prefix: usize, max_cycle: usize) -> Lasso<Symbol> {
    let letters: Vec<Symbol> = alphabet.symbols().collect();
    let p = rng.random_range(0..max_prefix);
    let c = rng.random_range(1..=max_cycle);
    let mut pick = |len: usize| (0..len).map(|_| letters[rng.random_range(0..letters.len())]).collect::<Vec<_>>();
    let prefix = pick(p);
    Lasso::new(prefix, pick(c)).expect("cycle is non-empty")
}

/// All lasso words with prefix length below `max_prefix` and cycle length
/// `1..=max_cycle`.
pub fn all_lassos(alphabet: &Alphabet, max_prefix: usize, max_cycle: usize) -> Vec<Lasso<Symbol>> {
    let letters: Vec<Symbol> = alphabet.symbols().collect();
    let words = |len: usize| {
        let mut ws: Vec<Vec<Symbol>> = alloc::vec![Vec::new()];
        for _ in 0..len {
            ws = ws.into_iter().flat_map(|w| letters.iter().map(move |&s| [w.clone(), alloc::vec![s]].concat())).collect();
        }
        ws
    };
    let mut out = Vec::new();
    for p in 0..max_prefix {
        for c in 1..=max_cycle {
            for pre in words(p) {
                for cyc in words(c) {
                    out.push(Lasso::new(pre.clone(), cyc).expect("cycle is non-empty"));
                }
            }
        }
    }
    out
}

pub fn aggregators(lambda: &Rational) -> [Aggregator; 4] {
    [Aggregator::DSum(lambda.clone()), Aggregator::Mean, Aggregator::Sup, Aggregator::LimSup]
}

/// Solver and oracle thresholds for one problem and aggregator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub seed: u64,
    pub problem: &'static str,
    pub aggregator: Aggregator,
    pub solver: Threshold,
    pub oracle: Threshold,
}

impl Comparison {
    pub fn ok(&self) -> bool {
        self.solver == self.oracle
    }

    /// `SEED <n> AGG <a> SOLVER p/q ORACLE p/q VERDICT OK|MISMATCH PROBLEM <p>`.
    pub fn report_line(&self) -> String {
        alloc::format!(
            "SEED {} AGG {} SOLVER {} ORACLE {} VERDICT {} PROBLEM {}",
            self.seed,
            self.aggregator.keyword(),
            self.solver,
            self.oracle,
            if self.ok() { "OK" } else { "MISMATCH" },
            self.problem
        )
    }
}

/// Draws instances from `seed` until one fits the budget (at most `tries`
/// draws), then compares solvers and oracles on it for every aggregator,
/// repair first, impair second.
pub fn compare_seed(seed: u64, cfg: &GeneratorConfig, budget: &OracleBudget, tries: usize) -> Result<Vec<Comparison>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = Error::BudgetExceeded("no draw".into());
    for _ in 0..tries {
        let inst = random_instance(&mut rng, cfg);
        match compare_instance(seed, &inst, budget) {
            Ok(c) => return Ok(c),
            Err(e @ Error::BudgetExceeded(_)) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

pub fn compare_instance(seed: u64, inst: &RandomInstance, budget: &OracleBudget) -> Result<Vec<Comparison>> {
    let aggs = aggregators(&inst.lambda);
    let product = build_product(&inst.kripke, &inst.machine, &inst.nba, ProductOptions::default())?;
    let arena = build_arena(&product);
    if arena.n_min() > budget.max_vertices {
        return Err(Error::BudgetExceeded(alloc::format!("{} product vertices", arena.n_min())));
    }
    let repair_oracle = brute_repair_thresholds(&arena, &aggs, MaxClass::Positional, budget)?;
    let impair_oracle = brute_impair_thresholds(&product.graph, &aggs, budget)?;
    let mut out = Vec::new();
    for (agg, oracle) in aggs.iter().zip(repair_oracle) {
        let solver = crate::repair::arena_repair_threshold(&arena, agg)?.value;
        out.push(Comparison { seed, problem: "REPAIR", aggregator: agg.clone(), solver, oracle });
    }
    for (agg, oracle) in aggs.iter().zip(impair_oracle) {
        let solver = crate::impair::graph_impair_threshold(&product.graph, agg)?.value;
        out.push(Comparison { seed, problem: "IMPAIR", aggregator: agg.clone(), solver, oracle });
    }
    Ok(out)
}
