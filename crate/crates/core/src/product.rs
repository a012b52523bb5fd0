//! The synchronized product `K×T×B`, its game arena, and the two transducer
//! products used by mask synthesis.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use crate::automata::{Alphabet, KripkeStructure, Nba, RepairMachine, RmTransition, Symbol};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// `(p, w, p′) ∈ δ̂` with a flag telling whether the path visits an
/// accepting state after leaving `from`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtendedMove {
    pub from: usize,
    pub word: Vec<Symbol>,
    pub to: usize,
    pub visits_accepting: bool,
}

/// All moves of `b` reading `w` from `from`. The empty word yields the single
/// move `(from, ε, from, false)`.
pub fn extended_moves(b: &Nba, from: usize, w: &[Symbol]) -> Result<Vec<ExtendedMove>> {
    if let Some(bad) = w.iter().find(|s| !b.alphabet().contains(**s)) {
        return Err(Error::AlphabetMismatch(alloc::format!("letter #{} not in automaton alphabet", bad.0)));
    }
    let mut frontier: BTreeSet<(usize, bool)> = BTreeSet::new();
    frontier.insert((from, false));
    for &a in w {
        let mut next = BTreeSet::new();
        for &(q, f) in &frontier {
            for t in b.successors(q, a) {
                next.insert((t, f || b.is_accepting(t)));
            }
        }
        frontier = next;
    }
    Ok(frontier
        .into_iter()
        .map(|(to, visits_accepting)| ExtendedMove { from, word: w.to_vec(), to, visits_accepting })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductVertex {
    pub kripke: usize,
    pub rm: usize,
    pub nba: usize,
    pub counter: u8,
}

/// The cheapest `(transition, move)` pair realizing a product edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeWitness {
    pub transition: RmTransition,
    pub nba_move: ExtendedMove,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProductOptions {
    /// Only the endpoint state of a move counts for the specification's
    /// acceptance, and empty outputs may advance the counter.
    pub strict: bool,
}

/// Weighted graph over reachable product vertices. Edge acceptance marks the
/// counter's 2→1 flip.
#[derive(Clone, Debug)]
pub struct ProductGraph {
    pub vertices: Vec<ProductVertex>,
    pub graph: WeightedGraph,
    pub witnesses: Vec<EdgeWitness>,
    index: BTreeMap<ProductVertex, usize>,
}

impl ProductGraph {
    pub fn vertex_id(&self, v: &ProductVertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// `V_F`: specification state accepting and counter 2.
    pub fn final_vertices(&self, b: &Nba) -> Vec<bool> {
        self.vertices.iter().map(|v| v.counter == 2 && b.is_accepting(v.nba)).collect()
    }

    /// Restriction to the vertices flagged in `keep`.
    pub fn induced(&self, keep: &[bool]) -> (ProductGraph, Vec<usize>) {
        let (graph, old_of_new) = self.graph.induced(keep);
        let vertices: Vec<ProductVertex> = old_of_new.iter().map(|&v| self.vertices[v]).collect();
        let witnesses = self
            .graph
            .edges()
            .iter()
            .zip(&self.witnesses)
            .filter(|(e, _)| keep[e.src] && keep[e.dst])
            .map(|(_, w)| w.clone())
            .collect();
        let index = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        (ProductGraph { vertices, graph, witnesses, index }, old_of_new)
    }
}

fn translate(from: &Alphabet, to: &Alphabet, what: &str) -> Result<Vec<Symbol>> {
    from.names()
        .iter()
        .map(|n| to.lookup(n).ok_or_else(|| Error::AlphabetMismatch(alloc::format!("{what}: letter `{n}` missing"))))
        .collect()
}

/// Caches `extended_moves` per `(state, word)`.
struct MoveCache<'a> {
    b: &'a Nba,
    cache: BTreeMap<(usize, Vec<Symbol>), Vec<ExtendedMove>>,
}

impl<'a> MoveCache<'a> {
    fn new(b: &'a Nba) -> Self {
        MoveCache { b, cache: BTreeMap::new() }
    }

    fn get(&mut self, p: usize, w: &[Symbol]) -> Result<&[ExtendedMove]> {
        let key = (p, w.to_vec());
        if !self.cache.contains_key(&key) {
            let moves = extended_moves(self.b, p, w)?;
            self.cache.insert(key.clone(), moves);
        }
        Ok(&self.cache[&key])
    }
}

/// Whether the specification side sees acceptance along a move.
fn spec_accepts(b: &Nba, m: &ExtendedMove, strict: bool) -> bool {
    if strict {
        b.is_accepting(m.from)
    } else {
        !m.word.is_empty() && (b.is_accepting(m.from) || m.visits_accepting)
    }
}

/// Two-flag counter update; returns the new counter and whether the edge
/// flips 2→1.
fn counter_step(counter: u8, rm_target_accepting: bool, spec_accepting: bool) -> (u8, bool) {
    match counter {
        1 => (if rm_target_accepting { 2 } else { 1 }, false),
        _ => {
            if spec_accepting {
                (1, true)
            } else {
                (2, false)
            }
        }
    }
}

/// Builds the part of `K×T×B` reachable from `V_I`.
pub fn build_product(k: &KripkeStructure, t: &RepairMachine, b: &Nba, opts: ProductOptions) -> Result<ProductGraph> {
    let k_to_t = translate(k.alphabet(), t.input_alphabet(), "kripke label vs machine input")?;
    let t_to_b = translate(t.output_alphabet(), b.alphabet(), "machine output vs specification")?;
    let mut moves = MoveCache::new(b);

    let mut vertices: Vec<ProductVertex> = Vec::new();
    let mut index: BTreeMap<ProductVertex, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut graph = WeightedGraph::new(0);
    let mut witnesses = Vec::new();

    let mut intern = |v: ProductVertex, vertices: &mut Vec<ProductVertex>, graph: &mut WeightedGraph, queue: &mut VecDeque<usize>| -> usize {
        if let Some(&i) = index.get(&v) {
            return i;
        }
        vertices.push(v);
        let i = graph.add_vertex();
        index.insert(v, i);
        queue.push_back(i);
        i
    };

    for &s in k.initial() {
        for &q in t.initial() {
            for &p in b.initial() {
                let v = ProductVertex { kripke: s, rm: q, nba: p, counter: 1 };
                let i = intern(v, &mut vertices, &mut graph, &mut queue);
                graph.set_initial(i);
            }
        }
    }

    while let Some(u) = queue.pop_front() {
        let src = vertices[u];
        let input = k_to_t[k.label(src.kripke).index()];
        let mut best: BTreeMap<ProductVertex, (u64, bool, EdgeWitness)> = BTreeMap::new();
        for tr in t.moves(src.rm, input) {
            let cost = tr.cost.max(0) as u64;
            let word: Vec<Symbol> = tr.output.iter().map(|o| t_to_b[o.index()]).collect();
            for m in moves.get(src.nba, &word)? {
                let (c2, flip) = counter_step(src.counter, t.is_accepting(tr.to), spec_accepts(b, m, opts.strict));
                for s2 in k.successors(src.kripke) {
                    let dst = ProductVertex { kripke: s2, rm: tr.to, nba: m.to, counter: c2 };
                    let better = match best.get(&dst) {
                        Some((c, _, _)) => cost < *c,
                        None => true,
                    };
                    if better {
                        let w = EdgeWitness { transition: tr.clone(), nba_move: m.clone() };
                        best.insert(dst, (cost, flip, w));
                    }
                }
            }
        }
        for (dst, (cost, flip, w)) in best {
            let d = intern(dst, &mut vertices, &mut graph, &mut queue);
            graph.add_edge(u, d, cost, flip);
            witnesses.push(w);
        }
    }

    Ok(ProductGraph { vertices, graph, witnesses, index })
}

/// A Max vertex: the Kripke state is still the old one, the rewrite and
/// specification components have moved, and the counter update is fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MaxVertex {
    pub kripke: usize,
    pub rm: usize,
    pub nba: usize,
    pub counter: u8,
    pub accepting: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArenaEdge {
    pub src: usize,
    pub dst: usize,
    pub weight: u64,
    /// Originating product (or graph) edge.
    pub origin: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Player {
    Min,
    Max,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Min => Player::Max,
            Player::Max => Player::Min,
        }
    }
}

/// Bipartite arena. Ids `0..n_min` are Min vertices, the rest are Max
/// vertices. Min edges carry the rewrite cost, Max edges weigh 0.
#[derive(Clone, Debug, Default)]
pub struct GameArena {
    n_min: usize,
    n_max: usize,
    edges: Vec<ArenaEdge>,
    out: Vec<Vec<usize>>,
    initial: Vec<usize>,
    accepting: Vec<bool>,
    pub min_labels: Vec<ProductVertex>,
    pub max_labels: Vec<MaxVertex>,
}

impl GameArena {
    pub fn with_sizes(n_min: usize, n_max: usize) -> Self {
        GameArena {
            n_min,
            n_max,
            edges: Vec::new(),
            out: alloc::vec![Vec::new(); n_min + n_max],
            initial: Vec::new(),
            accepting: alloc::vec![false; n_min + n_max],
            min_labels: Vec::new(),
            max_labels: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, src: usize, dst: usize, weight: u64, origin: usize) -> usize {
        debug_assert!(self.is_min(src) != self.is_min(dst));
        self.edges.push(ArenaEdge { src, dst, weight, origin });
        let id = self.edges.len() - 1;
        self.out[src].push(id);
        id
    }

    pub fn set_initial(&mut self, v: usize) {
        if !self.initial.contains(&v) {
            self.initial.push(v);
            self.initial.sort_unstable();
        }
    }

    pub fn set_accepting(&mut self, v: usize) {
        self.accepting[v] = true;
    }

    pub fn n_min(&self) -> usize {
        self.n_min
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn len(&self) -> usize {
        self.n_min + self.n_max
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_min(&self, v: usize) -> bool {
        v < self.n_min
    }

    pub fn owner(&self, v: usize) -> Player {
        if self.is_min(v) {
            Player::Min
        } else {
            Player::Max
        }
    }

    pub fn edges(&self) -> &[ArenaEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &ArenaEdge {
        &self.edges[e]
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    /// Büchi target: Max vertices reached through a counter flip.
    pub fn is_accepting(&self, v: usize) -> bool {
        self.accepting[v]
    }

    pub fn accepting_set(&self) -> &[bool] {
        &self.accepting
    }

    pub fn max_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).max().unwrap_or(0)
    }

    /// Single-player arena of a graph: one Max vertex per graph edge, with
    /// the edge's destination as its only successor.
    pub fn single_player(g: &WeightedGraph) -> GameArena {
        let n = g.num_vertices();
        let mut a = GameArena::with_sizes(n, g.edges().len());
        for (i, e) in g.edges().iter().enumerate() {
            a.add_edge(e.src, n + i, e.weight, i);
            a.add_edge(n + i, e.dst, 0, i);
            if g.is_accepting_edge(i) {
                a.set_accepting(n + i);
            }
        }
        for &v in g.initial() {
            a.set_initial(v);
        }
        a
    }

    /// Same arena with every weight multiplied by `k`.
    pub fn scaled(&self, k: u64) -> GameArena {
        let mut a = self.clone();
        for e in &mut a.edges {
            e.weight *= k;
        }
        a
    }
}

/// Splits every product edge `u → v` into a Min move to the Max vertex
/// `(s_u, q_v, p_v, c_v, flip)` and a Max move on to `v`.
pub fn build_arena(g: &ProductGraph) -> GameArena {
    let mut max_index: BTreeMap<MaxVertex, usize> = BTreeMap::new();
    for e in g.graph.edges() {
        let (u, v) = (g.vertices[e.src], g.vertices[e.dst]);
        let key = MaxVertex { kripke: u.kripke, rm: v.rm, nba: v.nba, counter: v.counter, accepting: e.accepting };
        let next = max_index.len();
        max_index.entry(key).or_insert(next);
    }
    let n_min = g.vertices.len();
    let mut max_labels = alloc::vec![MaxVertex { kripke: 0, rm: 0, nba: 0, counter: 0, accepting: false }; max_index.len()];
    for (k, &i) in &max_index {
        max_labels[i] = *k;
    }
    let mut a = GameArena::with_sizes(n_min, max_labels.len());
    for (i, e) in g.graph.edges().iter().enumerate() {
        let (u, v) = (g.vertices[e.src], g.vertices[e.dst]);
        let key = MaxVertex { kripke: u.kripke, rm: v.rm, nba: v.nba, counter: v.counter, accepting: e.accepting };
        let m = n_min + max_index[&key];
        a.add_edge(e.src, m, e.weight, i);
        a.add_edge(m, e.dst, 0, i);
        if e.accepting {
            a.set_accepting(m);
        }
    }
    for &v in g.graph.initial() {
        a.set_initial(v);
    }
    a.min_labels = g.vertices.clone();
    a.max_labels = max_labels;
    a
}

fn letters_within(a: &Alphabet, b: &Alphabet) -> bool {
    a.names().iter().all(|n| b.lookup(n).is_some())
}

/// `T′` with `dom(T′) = dom(T) ∩ L(n)`, over states `Q × Q_N × {1,2}`.
pub fn restrict_domain(t: &RepairMachine, n: &Nba) -> Result<RepairMachine> {
    if !letters_within(n.alphabet(), t.input_alphabet()) {
        return Err(Error::AlphabetMismatch("restriction automaton reads letters outside the machine input".into()));
    }
    // Letters the restriction never reads have no runs.
    let t_to_n = t.input_alphabet().translation(n.alphabet());
    let mut out = RepairMachine::new(t.input_alphabet().clone(), t.output_alphabet().clone(), t.aggregator().clone());
    let mut index: BTreeMap<(usize, usize, u8), usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let name = |q: usize, p: usize, f: u8| -> String { alloc::format!("{}|{}|{}", t.name(q), n.name(p), f) };
    let mut get = |key: (usize, usize, u8), out: &mut RepairMachine, queue: &mut VecDeque<((usize, usize, u8), usize)>| -> usize {
        if let Some(&i) = index.get(&key) {
            return i;
        }
        let acc = key.2 == 2 && n.is_accepting(key.1);
        let i = out.add_state(name(key.0, key.1, key.2), false, acc);
        index.insert(key, i);
        queue.push_back((key, i));
        i
    };
    for &q in t.initial() {
        for &p in n.initial() {
            let i = get((q, p, 1), &mut out, &mut queue);
            out.set_initial(i);
        }
    }
    while let Some(((q, p, f), src)) = queue.pop_front() {
        for tr in t.transitions().iter().filter(|tr| tr.from == q) {
            let Some(sym) = t_to_n[tr.input.index()] else { continue };
            for p2 in n.successors(p, sym) {
                let f2 = if f == 1 {
                    if t.is_accepting(tr.to) { 2 } else { 1 }
                } else if n.is_accepting(p) {
                    1
                } else {
                    2
                };
                let dst = get((tr.to, p2, f2), &mut out, &mut queue);
                out.add_transition(RmTransition { from: src, to: dst, ..tr.clone() });
            }
        }
    }
    Ok(out)
}

/// Machine whose accepting runs are the runs of `t` with output in `L(a)`.
///
/// States are `(q, p, f)`; flag 3 marks the state right after the
/// specification side completed a round and is the accepting set.
pub fn output_product(t: &RepairMachine, a: &Nba) -> Result<RepairMachine> {
    let t_to_a = translate(t.output_alphabet(), a.alphabet(), "machine output vs automaton")?;
    let mut moves = MoveCache::new(a);
    let mut out = RepairMachine::new(t.input_alphabet().clone(), t.output_alphabet().clone(), t.aggregator().clone());
    let mut index: BTreeMap<(usize, usize, u8), usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let name = |q: usize, p: usize, f: u8| -> String { alloc::format!("{}|{}|{}", t.name(q), a.name(p), f) };
    let mut get = |key: (usize, usize, u8), out: &mut RepairMachine, queue: &mut VecDeque<((usize, usize, u8), usize)>| -> usize {
        if let Some(&i) = index.get(&key) {
            return i;
        }
        let i = out.add_state(name(key.0, key.1, key.2), false, key.2 == 3);
        index.insert(key, i);
        queue.push_back((key, i));
        i
    };
    for &q in t.initial() {
        for &p in a.initial() {
            let i = get((q, p, 1), &mut out, &mut queue);
            out.set_initial(i);
        }
    }
    while let Some(((q, p, f), src)) = queue.pop_front() {
        for tr in t.transitions().iter().filter(|tr| tr.from == q) {
            let word: Vec<Symbol> = tr.output.iter().map(|o| t_to_a[o.index()]).collect();
            let ms: Vec<ExtendedMove> = moves.get(p, &word)?.to_vec();
            for m in ms {
                let base = if f == 3 { 1 } else { f };
                let (c2, flip) = counter_step(base, t.is_accepting(tr.to), spec_accepts(a, &m, false));
                let f2 = if flip { 3 } else { c2 };
                let dst = get((tr.to, m.to, f2), &mut out, &mut queue);
                out.add_transition(RmTransition { from: src, to: dst, ..tr.clone() });
            }
        }
    }
    Ok(out)
}

/// Removes states that are unreachable or cannot reach an accepting cycle.
pub fn trim(t: &RepairMachine) -> RepairMachine {
    let n = t.num_states();
    let mut g = WeightedGraph::new(n);
    let trs: Vec<&RmTransition> = t.transitions().iter().collect();
    for tr in &trs {
        g.add_edge(tr.from, tr.to, 0, false);
    }
    for &q in t.accepting() {
        if q < n {
            g.set_final(q);
        }
    }
    let init: Vec<usize> = t.initial().iter().copied().filter(|&q| q < n).collect();
    let reach = g.reachable(&init, |_| true);
    let live = g.accepting_lasso_region(|_| true);
    let keep: Vec<bool> = (0..n).map(|q| reach[q] && live[q]).collect();
    let mut new_of_old = alloc::vec![usize::MAX; n];
    let mut out = RepairMachine::new(t.input_alphabet().clone(), t.output_alphabet().clone(), t.aggregator().clone());
    for q in 0..n {
        if keep[q] {
            new_of_old[q] = out.add_state(t.name(q), t.initial().contains(&q), t.is_accepting(q));
        }
    }
    for tr in trs {
        if keep[tr.from] && keep[tr.to] {
            out.add_transition(RmTransition { from: new_of_old[tr.from], to: new_of_old[tr.to], ..tr.clone() });
        }
    }
    out
}
