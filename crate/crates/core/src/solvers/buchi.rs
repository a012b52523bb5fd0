use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::product::{GameArena, Player};

/// A subgame: the vertices flagged in `vertex`, using the edges flagged in
/// `edge` whose endpoints are both kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgame {
    pub vertex: Vec<bool>,
    pub edge: Vec<bool>,
}

impl Subgame {
    pub fn full(a: &GameArena) -> Self {
        Subgame { vertex: alloc::vec![true; a.len()], edge: alloc::vec![true; a.edges().len()] }
    }

    /// Full arena minus the Min edges heavier than `c`.
    pub fn light_edges(a: &GameArena, c: u64) -> Self {
        let edge = a.edges().iter().map(|e| !a.is_min(e.src) || e.weight <= c).collect();
        Subgame { vertex: alloc::vec![true; a.len()], edge }
    }

    pub fn restrict(&self, keep: &[bool]) -> Self {
        Subgame {
            vertex: self.vertex.iter().zip(keep).map(|(a, b)| *a && *b).collect(),
            edge: self.edge.clone(),
        }
    }

    pub fn usable(&self, a: &GameArena, e: usize) -> bool {
        let ed = a.edge(e);
        self.edge[e] && self.vertex[ed.src] && self.vertex[ed.dst]
    }

    pub fn usable_out<'a>(&'a self, a: &'a GameArena, v: usize) -> impl Iterator<Item = usize> + 'a {
        a.out_edges(v).iter().copied().filter(move |&e| self.usable(a, e))
    }
}

pub(crate) fn predecessors(a: &GameArena) -> Vec<Vec<usize>> {
    let mut pred = alloc::vec![Vec::new(); a.len()];
    for (i, e) in a.edges().iter().enumerate() {
        pred[e.dst].push(i);
    }
    pred
}

/// Attractor of `target` for `player` inside `within` (a subset of the
/// subgame's vertices). Vertices of the other player without usable edges
/// are attracted too: a stuck owner loses. Returns the set and an edge per
/// attracted `player` vertex outside the target.
pub fn attractor(
    a: &GameArena,
    sub: &Subgame,
    within: &[bool],
    target: &[bool],
    player: Player,
) -> (Vec<bool>, Vec<Option<usize>>) {
    let pred = predecessors(a);
    let n = a.len();
    let inside = |v: usize| sub.vertex[v] && within[v];
    let usable = |e: usize| {
        let ed = a.edge(e);
        sub.edge[e] && inside(ed.src) && inside(ed.dst)
    };
    let mut count = alloc::vec![0usize; n];
    for v in 0..n {
        if inside(v) {
            count[v] = a.out_edges(v).iter().filter(|&&e| usable(e)).count();
        }
    }
    let mut attr = alloc::vec![false; n];
    let mut strat = alloc::vec![None; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if inside(v) && (target[v] || (a.owner(v) != player && count[v] == 0)) {
            attr[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &e in &pred[x] {
            if !usable(e) {
                continue;
            }
            let u = a.edge(e).src;
            if attr[u] {
                continue;
            }
            if a.owner(u) == player {
                attr[u] = true;
                strat[u] = Some(e);
                queue.push_back(u);
            } else {
                count[u] -= 1;
                if count[u] == 0 {
                    attr[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    (attr, strat)
}

#[derive(Clone, Debug)]
pub struct BuchiGameResult {
    pub min_winning: Vec<bool>,
    pub max_winning: Vec<bool>,
    /// Chosen edge per owned winning vertex.
    pub min_strategy: Vec<Option<usize>>,
    pub max_strategy: Vec<Option<usize>>,
}

impl BuchiGameResult {
    pub fn winning(&self, p: Player) -> &[bool] {
        match p {
            Player::Min => &self.min_winning,
            Player::Max => &self.max_winning,
        }
    }
}

/// Büchi game on the whole arena; the objective "visit an accepting vertex
/// infinitely often" belongs to `favored`.
pub fn solve_buchi_game(a: &GameArena, favored: Player) -> BuchiGameResult {
    solve_buchi_subgame(a, &Subgame::full(a), favored)
}

pub fn solve_buchi_subgame(a: &GameArena, sub: &Subgame, favored: Player) -> BuchiGameResult {
    let n = a.len();
    let opp = favored.opponent();
    let accepting = a.accepting_set();
    let mut current: Vec<bool> = sub.vertex.clone();
    let mut opp_win = alloc::vec![false; n];
    let mut strat = alloc::vec![None; n];

    loop {
        let target: Vec<bool> = (0..n).map(|v| current[v] && accepting[v]).collect();
        let (reach, _) = attractor(a, sub, &current, &target, favored);
        // Vertices where the favored player cannot reach the target, plus
        // favored vertices that are stuck.
        let mut trap = alloc::vec![false; n];
        let mut any = false;
        for v in 0..n {
            if !current[v] {
                continue;
            }
            let stuck = a.owner(v) == favored && !a.out_edges(v).iter().any(|&e| usable_in(a, sub, &current, e));
            if !reach[v] || stuck {
                trap[v] = true;
                any = true;
            }
        }
        if !any {
            break;
        }
        let (lost, lost_strat) = attractor(a, sub, &current, &trap, opp);
        for v in 0..n {
            if !lost[v] {
                continue;
            }
            opp_win[v] = true;
            if a.owner(v) == opp {
                strat[v] = if trap[v] {
                    lowest_edge_into(a, sub, &current, v, &trap)
                } else {
                    lost_strat[v]
                };
            }
        }
        for v in 0..n {
            if lost[v] {
                current[v] = false;
            }
        }
    }

    // Favored strategy on the final region.
    let target: Vec<bool> = (0..n).map(|v| current[v] && accepting[v]).collect();
    let (_, reach_strat) = attractor(a, sub, &current, &target, favored);
    for v in 0..n {
        if current[v] && a.owner(v) == favored {
            strat[v] = if target[v] { lowest_edge_into(a, sub, &current, v, &current) } else { reach_strat[v] };
        }
    }

    let fav_win = current;
    let (min_winning, max_winning) = match favored {
        Player::Min => (fav_win, opp_win),
        Player::Max => (opp_win, fav_win),
    };
    let mut min_strategy = alloc::vec![None; n];
    let mut max_strategy = alloc::vec![None; n];
    for v in 0..n {
        if !sub.vertex[v] {
            continue;
        }
        match a.owner(v) {
            Player::Min if min_winning[v] => min_strategy[v] = strat[v],
            Player::Max if max_winning[v] => max_strategy[v] = strat[v],
            _ => {}
        }
    }
    BuchiGameResult { min_winning, max_winning, min_strategy, max_strategy }
}

fn usable_in(a: &GameArena, sub: &Subgame, within: &[bool], e: usize) -> bool {
    let ed = a.edge(e);
    sub.usable(a, e) && within[ed.src] && within[ed.dst]
}

fn lowest_edge_into(a: &GameArena, sub: &Subgame, within: &[bool], v: usize, set: &[bool]) -> Option<usize> {
    a.out_edges(v).iter().copied().find(|&e| usable_in(a, sub, within, e) && set[a.edge(e).dst])
}
