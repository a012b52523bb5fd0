//! Mode-based finite-memory strategies for Min and their evaluation against
//! Max behaviours.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::aggregator::{eval_aggregator, Aggregator};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::lasso::Lasso;
use crate::product::GameArena;
use crate::rational::{Rational, Threshold};
use crate::solvers::dsum::min_dsum_single;
use crate::solvers::karp::max_mean_values;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitRule {
    /// Leave after this many rounds in the mode.
    AfterSteps(u64),
    /// Leave after visiting the Min vertex this many times.
    AfterAnchorHits { vertex: usize, hits: u64 },
    /// Leave right after Min enters an accepting Max vertex.
    AfterAcceptingVisit,
    Forever,
}

impl fmt::Display for ExitRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExitRule::AfterSteps(n) => write!(f, "AFTER_STEPS {n}"),
            ExitRule::AfterAnchorHits { vertex, hits } => write!(f, "AFTER_ANCHOR_HITS {vertex} {hits}"),
            ExitRule::AfterAcceptingVisit => f.write_str("AFTER_ACCEPTING_VISIT"),
            ExitRule::Forever => f.write_str("FOREVER"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mode {
    /// Min vertex ↦ Max vertex.
    pub map: BTreeMap<usize, usize>,
    pub exit: ExitRule,
    /// Mode entered when `exit` fires.
    pub next: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FiniteMemoryStrategy {
    pub modes: Vec<Mode>,
    pub epsilon: Option<Rational>,
    pub step_bound: Option<u64>,
    /// Initial Min vertex chosen for each start group.
    pub starts: Vec<usize>,
}

/// A play of a strategy profile, folded into a lasso of rounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Play {
    /// `(min vertex, max vertex, weight)` per round.
    pub rounds: Lasso<(usize, usize, u64)>,
    /// Whether the cycle enters an accepting Max vertex.
    pub accepting: bool,
}

impl Play {
    pub fn costs(&self) -> Lasso<u64> {
        self.rounds.map(|r| r.2)
    }

    pub fn value(&self, agg: &Aggregator) -> Rational {
        eval_aggregator(agg, &self.costs())
    }
}

fn positional_map(a: &GameArena, choice: &[Option<usize>], keep: impl Fn(usize) -> bool) -> BTreeMap<usize, usize> {
    (0..a.n_min())
        .filter(|&v| keep(v))
        .filter_map(|v| choice[v].map(|e| (v, a.edge(e).dst)))
        .collect()
}

impl FiniteMemoryStrategy {
    /// One mode following a positional choice of edges forever.
    pub fn positional(a: &GameArena, choice: &[Option<usize>], keep: impl Fn(usize) -> bool) -> Self {
        FiniteMemoryStrategy {
            modes: alloc::vec![Mode { map: positional_map(a, choice, keep), exit: ExitRule::Forever, next: 0 }],
            epsilon: None,
            step_bound: None,
            starts: Vec::new(),
        }
    }

    pub fn push_mode(&mut self, a: &GameArena, choice: &[Option<usize>], keep: impl Fn(usize) -> bool, exit: ExitRule, next: usize) {
        self.modes.push(Mode { map: positional_map(a, choice, keep), exit, next });
    }

    /// Every referenced vertex exists, maps go from Min to Max vertices
    /// along arena edges, and `next` indices are in range.
    pub fn check(&self, a: &GameArena) -> Result<()> {
        for (i, m) in self.modes.iter().enumerate() {
            if m.next >= self.modes.len() {
                return Err(Error::Malformed(alloc::format!("mode {i} continues to missing mode {}", m.next)));
            }
            for (&v, &w) in &m.map {
                if !a.is_min(v) || w >= a.len() || !a.out_edges(v).iter().any(|&e| a.edge(e).dst == w) {
                    return Err(Error::Malformed(alloc::format!("mode {i} maps {v} to non-successor {w}")));
                }
            }
        }
        Ok(())
    }

    /// Follows `next` past modes that last zero rounds.
    fn skip_empty(&self, mut mode: usize) -> usize {
        for _ in 0..self.modes.len() {
            match self.modes[mode].exit {
                ExitRule::AfterSteps(0) => mode = self.modes[mode].next,
                _ => break,
            }
        }
        mode
    }

    fn choose(&self, mode: usize, v: usize) -> Option<usize> {
        self.modes[mode].map.get(&v).copied().or_else(|| self.modes.iter().find_map(|m| m.map.get(&v).copied()))
    }

    /// Plays from `start` against Max's positional choice (Max vertex ↦ Min
    /// vertex) until the joint state repeats.
    pub fn play(&self, a: &GameArena, start: usize, max_choice: &[usize]) -> Result<Play> {
        let mut seen: BTreeMap<Node, usize> = BTreeMap::new();
        let mut rounds = Vec::new();
        let mut node: Node = (start, self.skip_empty(0), 0, 0);
        loop {
            if let Some(&i) = seen.get(&node) {
                let cycle = rounds.split_off(i);
                let accepting = cycle.iter().any(|&(_, m, _): &(usize, usize, u64)| a.is_accepting(m));
                return Ok(Play { rounds: Lasso::new(rounds, cycle)?, accepting });
            }
            seen.insert(node, rounds.len());
            let (v, mode, count, hits) = node;
            let (m, w) = self.step(a, mode, v)?;
            rounds.push((v, m, w));
            let (mode, count, hits) = advance(self, a, mode, count, hits, v, m);
            node = (max_choice[m - a.n_min()], mode, count, hits);
        }
    }

    /// Min's move at `v` in `mode` and its cost.
    fn step(&self, a: &GameArena, mode: usize, v: usize) -> Result<(usize, u64)> {
        let m = self.choose(mode, v).ok_or_else(|| Error::Malformed(alloc::format!("strategy undefined at vertex {v}")))?;
        let w = a
            .out_edges(v)
            .iter()
            .map(|&e| a.edge(e))
            .filter(|e| e.dst == m)
            .map(|e| e.weight)
            .min()
            .ok_or_else(|| Error::Malformed(alloc::format!("no edge {v} -> {m}")))?;
        Ok((m, w))
    }
}

/// Memory update after Min moves from `v` into `m` in `mode` with `count`
/// rounds spent in it so far.
fn advance(s: &FiniteMemoryStrategy, a: &GameArena, mode: usize, count: u64, hits: u64, v: usize, m: usize) -> (usize, u64, u64) {
    let (fire, count, hits) = match s.modes[mode].exit {
        ExitRule::AfterSteps(n) => (count + 1 >= n, count + 1, 0),
        ExitRule::AfterAnchorHits { vertex, hits: need } => {
            let h = hits + u64::from(v == vertex);
            (h >= need, 0, h)
        }
        ExitRule::AfterAcceptingVisit => (a.is_accepting(m), 0, 0),
        ExitRule::Forever => (false, 0, 0),
    };
    if fire {
        (s.skip_empty(s.modes[mode].next), 0, 0)
    } else {
        (mode, count, hits)
    }
}

/// Memory states are `(vertex, mode, rounds in mode, anchor hits)`.
type Node = (usize, usize, u64, u64);

/// The strategy composed with the arena: a graph whose paths are exactly
/// the plays consistent with the strategy, one edge per round.
pub struct Unfolding {
    pub graph: WeightedGraph,
    pub nodes: Vec<Node>,
}

/// Unfolds the plays from the chosen starts, up to `limit` memory states.
pub fn unfold(s: &FiniteMemoryStrategy, a: &GameArena, limit: usize) -> Result<Unfolding> {
    let mut index: BTreeMap<Node, usize> = BTreeMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut graph = WeightedGraph::new(0);
    let mut queue = Vec::new();
    let intern = |n: Node, index: &mut BTreeMap<Node, usize>, nodes: &mut Vec<Node>, graph: &mut WeightedGraph, queue: &mut Vec<usize>| {
        *index.entry(n).or_insert_with(|| {
            nodes.push(n);
            queue.push(nodes.len() - 1);
            graph.add_vertex()
        })
    };
    for &v in &s.starts {
        let id = intern((v, s.skip_empty(0), 0, 0), &mut index, &mut nodes, &mut graph, &mut queue);
        graph.set_initial(id);
    }
    while let Some(id) = queue.pop() {
        if nodes.len() > limit {
            return Err(Error::BudgetExceeded(alloc::format!("strategy unfolding exceeds {limit} states")));
        }
        let (v, mode, count, hits) = nodes[id];
        let (m, w) = s.step(a, mode, v)?;
        let (mode2, count2, hits2) = advance(s, a, mode, count, hits, v, m);
        for &e in a.out_edges(m) {
            let u = a.edge(e).dst;
            let to = intern((u, mode2, count2, hits2), &mut index, &mut nodes, &mut graph, &mut queue);
            graph.add_edge(id, to, w, a.is_accepting(m));
        }
    }
    Ok(Unfolding { graph, nodes })
}

/// Worst value Max can force against `s`, over all start groups and all
/// (not only positional) Max behaviours. Infinite when Max can avoid the
/// Büchi target forever.
pub fn worst_case(s: &FiniteMemoryStrategy, a: &GameArena, agg: &Aggregator, limit: usize) -> Result<Threshold> {
    let u = unfold(s, a, limit)?;
    let g = &u.graph;
    if g.initial().is_empty() {
        return Err(Error::Malformed("strategy has no start vertex".into()));
    }
    let scc = g.scc_ids(|e| !g.edge(e).accepting);
    if g.edges().iter().any(|e| !e.accepting && scc[e.src] == scc[e.dst]) {
        return Ok(Threshold::Infinite);
    }
    let starts = g.initial().to_vec();
    let value = match agg {
        Aggregator::Sup => Rational::from(g.max_weight()),
        Aggregator::LimSup => {
            let scc = g.scc_ids(|_| true);
            Rational::from(g.edges().iter().filter(|e| scc[e.src] == scc[e.dst]).map(|e| e.weight).max().unwrap_or(0))
        }
        Aggregator::Mean => {
            let eta = max_mean_values(g)?;
            starts.iter().map(|&v| eta[v].clone()).max().unwrap()
        }
        Aggregator::DSum(l) => {
            let w = g.max_weight();
            let mut flipped = g.clone();
            for e in 0..flipped.edges().len() {
                flipped.set_weight(e, w - g.edge(e).weight);
            }
            let vm = min_dsum_single(&flipped, l)?;
            let top = Rational::from(w) / (Rational::one() - l);
            starts.iter().map(|&v| &top - vm.value(v)).max().unwrap()
        }
    };
    Ok(Threshold::Finite(value))
}
