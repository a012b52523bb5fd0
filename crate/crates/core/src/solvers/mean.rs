//! Mean-payoff games at round granularity, decided exactly through energy
//! games.
//!
//! For `τ = a/b`, the Min player keeps the mean at or below `τ` iff she can
//! keep `Σ (a − b·w)` bounded below, an energy objective solved with a
//! progress measure.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::product::{GameArena, Player};
use crate::rational::Rational;
use crate::solvers::buchi::{predecessors, Subgame};
use crate::solvers::dsum::ValueMap;

/// Least progress measure of an energy game.
#[derive(Clone, Debug)]
pub struct EnergyResult {
    /// Minimal initial credit, `None` where the energy player loses.
    pub credit: Vec<Option<u64>>,
    /// Credit-preserving edge at every winning vertex of the energy player.
    pub strategy: Vec<Option<usize>>,
}

impl EnergyResult {
    pub fn winning(&self) -> Vec<bool> {
        self.credit.iter().map(Option::is_some).collect()
    }
}

/// Energy game on `sub` where `player` must keep the running sum of
/// `gain(e)` (Min edges only, Max edges gain 0) above `-credit`.
pub fn solve_energy(a: &GameArena, sub: &Subgame, player: Player, gain: &dyn Fn(usize) -> i64) -> EnergyResult {
    let n = a.len();
    let edge_gain = |e: usize| if a.is_min(a.edge(e).src) { gain(e) } else { 0 };
    let min_in_sub = (0..a.n_min()).filter(|&v| sub.vertex[v]).count() as u64;
    let worst = a
        .edges()
        .iter()
        .enumerate()
        .filter(|(e, _)| sub.usable(a, *e))
        .map(|(e, _)| (-edge_gain(e)).max(0) as u64)
        .max()
        .unwrap_or(0);
    let bound = min_in_sub.saturating_mul(worst);
    const TOP: u64 = u64::MAX;

    let lift = |f: &[u64], e: usize| -> u64 {
        let d = f[a.edge(e).dst];
        if d == TOP {
            return TOP;
        }
        let need = d as i128 - edge_gain(e) as i128;
        let need = need.max(0) as u128;
        if need > bound as u128 {
            TOP
        } else {
            need as u64
        }
    };
    let pred = predecessors(a);
    let mut f = alloc::vec![0u64; n];
    let mut queued = alloc::vec![false; n];
    let mut work: BTreeSet<usize> = BTreeSet::new();
    for v in 0..n {
        if sub.vertex[v] {
            work.insert(v);
            queued[v] = true;
        }
    }
    while let Some(v) = work.pop_first() {
        queued[v] = false;
        let opts = sub.usable_out(a, v).map(|e| lift(&f, e));
        let val = if a.owner(v) == player { opts.min() } else { opts.max() };
        let val = val.unwrap_or(if a.owner(v) == player { TOP } else { 0 });
        if val > f[v] {
            f[v] = val;
            for &e in &pred[v] {
                let u = a.edge(e).src;
                if sub.usable(a, e) && !queued[u] && f[u] != TOP {
                    queued[u] = true;
                    work.insert(u);
                }
            }
        }
    }
    let mut strategy = alloc::vec![None; n];
    for v in 0..n {
        if sub.vertex[v] && f[v] != TOP && a.owner(v) == player {
            strategy[v] = sub.usable_out(a, v).find(|&e| lift(&f, e) <= f[v]);
        }
    }
    let credit = f.iter().enumerate().map(|(v, &x)| if sub.vertex[v] && x != TOP { Some(x) } else { None }).collect();
    EnergyResult { credit, strategy }
}

/// Min's energy game deciding `value ≤ num/den` on `sub`.
pub fn min_mean_at_most(a: &GameArena, sub: &Subgame, num: i64, den: i64) -> EnergyResult {
    solve_energy(a, sub, Player::Min, &|e| num - den * a.edge(e).weight as i64)
}

/// Max's energy game deciding `value ≥ num/den` on `sub`.
pub fn max_mean_at_least(a: &GameArena, sub: &Subgame, num: i64, den: i64) -> EnergyResult {
    solve_energy(a, sub, Player::Max, &|e| den * a.edge(e).weight as i64 - num)
}

/// Sorted fractions `d/m` with `1 ≤ m ≤ max_den`, `0 ≤ d ≤ m·w_max`: every
/// possible mean of a simple cycle with at most `max_den` rounds.
pub fn candidate_means(max_den: usize, w_max: u64) -> Vec<Rational> {
    let mut set = BTreeSet::new();
    for m in 1..=max_den.max(1) as i64 {
        for d in 0..=(m * w_max as i64) {
            set.insert(Rational::new(d, m));
        }
    }
    set.into_iter().collect()
}

pub fn solve_mean_game(a: &GameArena) -> ValueMap {
    solve_mean_subgame(a, &Subgame::full(a))
}

/// Exact values on a non-blocking subgame, with optimal positional
/// strategies for both players.
pub fn solve_mean_subgame(a: &GameArena, sub: &Subgame) -> ValueMap {
    let n = a.len();
    let n_min = (0..a.n_min()).filter(|&v| sub.vertex[v]).count();
    let w_max = a.edges().iter().enumerate().filter(|(e, _)| sub.usable(a, *e)).map(|(_, e)| e.weight).max().unwrap_or(0);
    let cands = candidate_means(n_min, w_max);
    let mut values: Vec<Option<Rational>> = alloc::vec![None; n];
    if sub.vertex.iter().any(|&x| x) {
        split(a, sub, &sub.vertex.clone(), &cands, 0, cands.len() - 1, &mut values);
    }

    let mut strategy_min = alloc::vec![None; n];
    let mut strategy_max = alloc::vec![None; n];
    let classes: BTreeSet<Rational> = values.iter().flatten().cloned().collect();
    for tau in classes {
        let (num, den) = tau.parts_i64();
        let low: Vec<bool> = (0..n).map(|v| values[v].as_ref().is_some_and(|x| *x <= tau)).collect();
        let res = min_mean_at_most(a, &sub.restrict(&low), num, den);
        let high: Vec<bool> = (0..n).map(|v| values[v].as_ref().is_some_and(|x| *x >= tau)).collect();
        let resm = max_mean_at_least(a, &sub.restrict(&high), num, den);
        for v in 0..n {
            if values[v].as_ref() == Some(&tau) {
                if a.is_min(v) {
                    strategy_min[v] = res.strategy[v];
                } else {
                    strategy_max[v] = resm.strategy[v];
                }
            }
        }
    }
    ValueMap { values, strategy_min, strategy_max }
}

fn split(
    a: &GameArena,
    sub: &Subgame,
    set: &[bool],
    cands: &[Rational],
    lo: usize,
    hi: usize,
    values: &mut [Option<Rational>],
) {
    if !set.iter().any(|&x| x) {
        return;
    }
    if lo == hi {
        for (v, &inside) in set.iter().enumerate() {
            if inside {
                values[v] = Some(cands[lo].clone());
            }
        }
        return;
    }
    let mid = (lo + hi) / 2;
    let (num, den) = cands[mid].parts_i64();
    let res = min_mean_at_most(a, &sub.restrict(set), num, den);
    let low: Vec<bool> = (0..set.len()).map(|v| set[v] && res.credit[v].is_some()).collect();
    let high: Vec<bool> = (0..set.len()).map(|v| set[v] && res.credit[v].is_none()).collect();
    split(a, sub, &low, cands, lo, mid, values);
    split(a, sub, &high, cands, mid + 1, hi, values);
}

/// Zwick–Paterson value iteration followed by rounding to the closest
/// fraction with denominator at most the number of Min vertices. Exponential
/// in the worst case; kept as an independent check on small arenas.
pub fn mean_values_by_iteration(a: &GameArena) -> Vec<Rational> {
    let n = a.len();
    let n_min = a.n_min().max(1) as u64;
    let w = a.max_weight().max(1) as u64;
    // Rounds needed so the rounding ball is smaller than 1/(2·n²).
    let k = 4 * n_min * n_min * n_min * w + 4;
    let mut v: Vec<i128> = alloc::vec![0; n];
    for _ in 0..2 * k {
        let mut next = v.clone();
        for x in 0..n {
            let vals = a.out_edges(x).iter().map(|&e| {
                let ed = a.edge(e);
                ed.weight as i128 + v[ed.dst]
            });
            next[x] = if a.is_min(x) { vals.min().unwrap_or(0) } else { vals.max().unwrap_or(0) };
        }
        v = next;
    }
    v.iter().map(|&x| Rational::new(x as i64, k as i64).best_approximation(n_min)).collect()
}
