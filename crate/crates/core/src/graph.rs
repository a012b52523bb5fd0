//! Weighted directed graphs with Büchi acceptance on edges.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use petgraph::graph::{DiGraph, NodeIndex};

pub type Adjacency = Vec<Vec<usize>>;

/// Strongly connected components of an adjacency list, in reverse
/// topological order.
pub fn tarjan_scc(adj: &Adjacency) -> Vec<Vec<usize>> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(adj.len(), 0);
    for _ in 0..adj.len() {
        g.add_node(());
    }
    for (u, outs) in adj.iter().enumerate() {
        for &v in outs {
            g.add_edge(NodeIndex::new(u), NodeIndex::new(v), ());
        }
    }
    petgraph::algo::tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            c.sort_unstable();
            c
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: u64,
    /// Edge-level Büchi flag.
    pub accepting: bool,
}

/// `G = (V, E, W, V_I, V_F)`.
///
/// An edge counts as accepting when its own flag is set or its source is in
/// `V_F`; fixtures given with vertex acceptance use the latter.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    initial: Vec<usize>,
    is_final: Vec<bool>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        WeightedGraph {
            n,
            edges: Vec::new(),
            out: alloc::vec![Vec::new(); n],
            initial: Vec::new(),
            is_final: alloc::vec![false; n],
        }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.out.push(Vec::new());
        self.is_final.push(false);
        self.n - 1
    }

    pub fn add_edge(&mut self, src: usize, dst: usize, weight: u64, accepting: bool) -> usize {
        self.edges.push(Edge { src, dst, weight, accepting });
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

    pub fn set_final(&mut self, v: usize) {
        self.is_final[v] = true;
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_final(&self, v: usize) -> bool {
        self.is_final[v]
    }

    pub fn is_accepting_edge(&self, e: usize) -> bool {
        let ed = &self.edges[e];
        ed.accepting || self.is_final[ed.src]
    }

    pub fn max_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).max().unwrap_or(0)
    }

    /// Vertices reachable from `from` using edges accepted by `keep`.
    pub fn reachable(&self, from: &[usize], keep: impl Fn(usize) -> bool) -> Vec<bool> {
        let mut seen = alloc::vec![false; self.n];
        let mut stack: Vec<usize> = Vec::new();
        for &v in from {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
        while let Some(u) = stack.pop() {
            for &e in &self.out[u] {
                let v = self.edges[e].dst;
                if keep(e) && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Vertices that can reach a vertex of `target` using edges accepted by
    /// `keep`.
    pub fn coreachable(&self, target: &[bool], keep: impl Fn(usize) -> bool) -> Vec<bool> {
        let mut pred: Vec<Vec<usize>> = alloc::vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            if keep(i) {
                pred[e.dst].push(e.src);
            }
        }
        let mut seen = target.to_vec();
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| target[v]).collect();
        while let Some(v) = stack.pop() {
            for &u in &pred[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }

    /// SCC id per vertex over the edges accepted by `keep`.
    pub fn scc_ids(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        let mut adj: Adjacency = alloc::vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            if keep(i) {
                adj[e.src].push(e.dst);
            }
        }
        let mut id = alloc::vec![0; self.n];
        for (c, comp) in tarjan_scc(&adj).into_iter().enumerate() {
            for v in comp {
                id[v] = c;
            }
        }
        id
    }

    /// Accepting edges (among `keep`) whose endpoints share an SCC of the
    /// `keep`-subgraph; each lies on an accepting cycle.
    pub fn accepting_cycle_edges(&self, keep: impl Fn(usize) -> bool + Copy) -> Vec<usize> {
        let scc = self.scc_ids(keep);
        (0..self.edges.len())
            .filter(|&e| keep(e) && self.is_accepting_edge(e) && scc[self.edges[e].src] == scc[self.edges[e].dst])
            .collect()
    }

    /// Vertices from which an accepting lasso exists using `keep` edges.
    pub fn accepting_lasso_region(&self, keep: impl Fn(usize) -> bool + Copy) -> Vec<bool> {
        let mut target = alloc::vec![false; self.n];
        for e in self.accepting_cycle_edges(keep) {
            target[self.edges[e].src] = true;
        }
        self.coreachable(&target, keep)
    }

    /// Shortest path (as edge ids) from any vertex of `from` to a vertex
    /// satisfying `goal`, using `keep` edges. Ties go to lower edge ids.
    pub fn bfs_path(&self, from: &[usize], goal: impl Fn(usize) -> bool, keep: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
        let mut parent: Vec<Option<usize>> = alloc::vec![None; self.n];
        let mut seen = alloc::vec![false; self.n];
        let mut queue = VecDeque::new();
        let mut starts: Vec<usize> = from.to_vec();
        starts.sort_unstable();
        for v in starts {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(u) = queue.pop_front() {
            if goal(u) {
                let mut path = Vec::new();
                let mut cur = u;
                while let Some(e) = parent[cur] {
                    path.push(e);
                    cur = self.edges[e].src;
                }
                path.reverse();
                return Some(path);
            }
            for &e in &self.out[u] {
                let v = self.edges[e].dst;
                if keep(e) && !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(e);
                    queue.push_back(v);
                }
            }
        }
        None
    }

    /// Subgraph induced by `keep`; returns it with the old id of every new
    /// vertex.
    pub fn induced(&self, keep: &[bool]) -> (WeightedGraph, Vec<usize>) {
        let old_of_new: Vec<usize> = (0..self.n).filter(|&v| keep[v]).collect();
        let mut new_of_old = alloc::vec![usize::MAX; self.n];
        for (i, &v) in old_of_new.iter().enumerate() {
            new_of_old[v] = i;
        }
        let mut g = WeightedGraph::new(old_of_new.len());
        for e in &self.edges {
            if keep[e.src] && keep[e.dst] {
                g.add_edge(new_of_old[e.src], new_of_old[e.dst], e.weight, e.accepting);
            }
        }
        for &v in &self.initial {
            if keep[v] {
                g.set_initial(new_of_old[v]);
            }
        }
        for (i, &v) in old_of_new.iter().enumerate() {
            g.is_final[i] = self.is_final[v];
        }
        (g, old_of_new)
    }

    pub fn set_weight(&mut self, e: usize, w: u64) {
        self.edges[e].weight = w;
    }

    /// Same graph with every weight multiplied by `k`.
    pub fn scaled(&self, k: u64) -> WeightedGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight *= k;
        }
        g
    }
}
