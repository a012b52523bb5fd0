//! Discounted-sum games with one discount step per round.
//!
//! A float value iteration seeds positional strategies, then strategy
//! iteration in exact arithmetic improves them until the Bellman equations
//! hold with zero residual.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::product::{GameArena, Player};
use crate::rational::Rational;
use crate::solvers::buchi::Subgame;

/// Values and positional strategies; strategies name the chosen edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueMap {
    pub values: Vec<Option<Rational>>,
    pub strategy_min: Vec<Option<usize>>,
    pub strategy_max: Vec<Option<usize>>,
}

impl ValueMap {
    pub fn value(&self, v: usize) -> &Rational {
        self.values[v].as_ref().expect("vertex outside the solved subgame")
    }
}

const MAX_IMPROVEMENTS: usize = 100_000;

fn check_lambda(lambda: &Rational) -> Result<()> {
    if !lambda.is_positive() || *lambda >= Rational::one() {
        return Err(Error::BadDiscount);
    }
    Ok(())
}

pub fn solve_dsum_game(a: &GameArena, lambda: &Rational) -> Result<ValueMap> {
    solve_dsum_subgame(a, &Subgame::full(a), lambda)
}

/// Single-player minimum discounted cost from every vertex of `g`.
/// Strategies are graph edge ids.
pub fn min_dsum_single(g: &WeightedGraph, lambda: &Rational) -> Result<ValueMap> {
    for v in 0..g.num_vertices() {
        if g.out_edges(v).is_empty() {
            return Err(Error::NoSuccessor(v));
        }
    }
    let a = GameArena::single_player(g);
    let vm = solve_dsum_game(&a, lambda)?;
    let n = g.num_vertices();
    Ok(ValueMap {
        values: vm.values[..n].to_vec(),
        strategy_min: vm.strategy_min[..n].iter().map(|e| e.map(|e| a.edge(e).origin)).collect(),
        strategy_max: alloc::vec![None; n],
    })
}

pub fn solve_dsum_subgame(a: &GameArena, sub: &Subgame, lambda: &Rational) -> Result<ValueMap> {
    check_lambda(lambda)?;
    let n = a.len();
    for v in 0..n {
        if sub.vertex[v] && sub.usable_out(a, v).next().is_none() {
            return Err(Error::NoSuccessor(v));
        }
    }
    let warm = warm_start(a, sub, lambda);
    let mut choice: Vec<Option<usize>> = (0..n)
        .map(|v| {
            if !sub.vertex[v] {
                return None;
            }
            let score = |e: usize| -> f64 {
                let ed = a.edge(e);
                if a.is_min(v) {
                    ed.weight as f64 + lambda.to_f64() * warm[ed.dst]
                } else {
                    -warm[ed.dst]
                }
            };
            let mut best: Option<(usize, f64)> = None;
            for e in sub.usable_out(a, v) {
                let s = score(e);
                match best {
                    Some((_, b)) if s >= b - 1e-9 * (1.0 + b.abs()) => {}
                    _ => best = Some((e, s)),
                }
            }
            best.map(|(e, _)| e)
        })
        .collect();

    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > MAX_IMPROVEMENTS {
            return Err(Error::NonConvergence("discounted strategy iteration".into()));
        }
        let values = max_best_response(a, sub, lambda, &mut choice)?;
        let mut improved = false;
        for v in 0..a.n_min() {
            if !sub.vertex[v] {
                continue;
            }
            let cur = values[v].clone().unwrap();
            let mut best: Option<(usize, Rational)> = None;
            for e in sub.usable_out(a, v) {
                let s = step_value(a, lambda, e, &values);
                if best.as_ref().map_or(true, |(_, b)| s < *b) {
                    best = Some((e, s));
                }
            }
            let (e, s) = best.unwrap();
            if s < cur {
                choice[v] = Some(e);
                improved = true;
            }
        }
        if !improved {
            let mut strategy_min = alloc::vec![None; n];
            let mut strategy_max = alloc::vec![None; n];
            for v in 0..n {
                if a.is_min(v) {
                    strategy_min[v] = choice[v];
                } else {
                    strategy_max[v] = choice[v];
                }
            }
            return Ok(ValueMap { values, strategy_min, strategy_max });
        }
    }
}

fn step_value(a: &GameArena, lambda: &Rational, e: usize, values: &[Option<Rational>]) -> Rational {
    let ed = a.edge(e);
    let next = values[ed.dst].as_ref().unwrap();
    if a.is_min(ed.src) {
        Rational::from(ed.weight) + lambda * next
    } else {
        next.clone()
    }
}

/// Improves Max's choices against the fixed Min choices until no strict
/// improvement remains; returns the exact values of the final profile.
fn max_best_response(
    a: &GameArena,
    sub: &Subgame,
    lambda: &Rational,
    choice: &mut [Option<usize>],
) -> Result<Vec<Option<Rational>>> {
    for _ in 0..MAX_IMPROVEMENTS {
        let values = evaluate_profile(a, sub, lambda, choice);
        let mut improved = false;
        for v in a.n_min()..a.len() {
            if !sub.vertex[v] {
                continue;
            }
            let cur = values[a.edge(choice[v].unwrap()).dst].clone().unwrap();
            let mut best: Option<(usize, &Rational)> = None;
            for e in sub.usable_out(a, v) {
                let s = values[a.edge(e).dst].as_ref().unwrap();
                if best.map_or(true, |(_, b)| s > b) {
                    best = Some((e, s));
                }
            }
            let (e, s) = best.unwrap();
            if *s > cur {
                choice[v] = Some(e);
                improved = true;
            }
        }
        if !improved {
            return Ok(values);
        }
    }
    Err(Error::NonConvergence("discounted best response".into()))
}

/// Exact values when every vertex follows its chosen edge.
pub fn evaluate_profile(a: &GameArena, sub: &Subgame, lambda: &Rational, choice: &[Option<usize>]) -> Vec<Option<Rational>> {
    let n = a.len();
    let mut values: Vec<Option<Rational>> = alloc::vec![None; n];
    let mut state = alloc::vec![0u8; n];
    let next = |v: usize| a.edge(choice[v].unwrap()).dst;
    let gain = |v: usize| Rational::from(a.edge(choice[v].unwrap()).weight);
    let disc = |v: usize| if a.owner(v) == Player::Min { lambda.clone() } else { Rational::one() };
    for start in 0..n {
        if !sub.vertex[start] || state[start] == 2 {
            continue;
        }
        let mut path = Vec::new();
        let mut v = start;
        while state[v] == 0 {
            state[v] = 1;
            path.push(v);
            v = next(v);
        }
        let mut upto = path.len();
        if state[v] == 1 {
            let idx = path.iter().position(|&x| x == v).unwrap();
            let cycle = &path[idx..];
            let mut num = Rational::zero();
            let mut d = Rational::one();
            for &c in cycle {
                num = num + &d * gain(c);
                d = d * disc(c);
            }
            let head = num / (Rational::one() - d);
            values[cycle[0]] = Some(head);
            for &c in cycle.iter().skip(1).rev() {
                let val = gain(c) + disc(c) * values[next(c)].clone().unwrap();
                values[c] = Some(val);
            }
            for &c in cycle {
                state[c] = 2;
            }
            upto = idx;
        }
        for &c in path[..upto].iter().rev() {
            let val = gain(c) + disc(c) * values[next(c)].clone().unwrap();
            values[c] = Some(val);
            state[c] = 2;
        }
    }
    values
}

fn warm_start(a: &GameArena, sub: &Subgame, lambda: &Rational) -> Vec<f64> {
    let l = lambda.to_f64();
    let w = a.max_weight().max(1) as f64;
    let mut tail = w / (1.0 - l);
    let mut rounds = 1;
    while tail > 1e-9 && rounds < 5000 {
        tail *= l;
        rounds += 1;
    }
    let n = a.len();
    let mut v = alloc::vec![0.0f64; n];
    for _ in 0..2 * rounds {
        let mut next = v.clone();
        for x in 0..n {
            if !sub.vertex[x] {
                continue;
            }
            let vals = sub.usable_out(a, x).map(|e| {
                let ed = a.edge(e);
                if a.is_min(x) {
                    ed.weight as f64 + l * v[ed.dst]
                } else {
                    v[ed.dst]
                }
            });
            next[x] = if a.is_min(x) {
                vals.fold(f64::INFINITY, f64::min)
            } else {
                vals.fold(f64::NEG_INFINITY, f64::max)
            };
        }
        v = next;
    }
    v
}

/// True when `vm` satisfies the min/max Bellman equations exactly.
pub fn dsum_residual_is_zero(a: &GameArena, sub: &Subgame, lambda: &Rational, vm: &ValueMap) -> bool {
    for v in 0..a.len() {
        if !sub.vertex[v] {
            continue;
        }
        let Some(val) = vm.values[v].as_ref() else { return false };
        let opts: Vec<Rational> = sub.usable_out(a, v).map(|e| step_value(a, lambda, e, &vm.values)).collect();
        let best = if a.is_min(v) { opts.iter().min() } else { opts.iter().max() };
        if best != Some(val) {
            return false;
        }
    }
    true
}
