//! Repair synthesis: the optimal threshold a rewriting Min player can
//! guarantee against every trace, and finite-memory strategies within ε of
//! it.
//!
//! Initial vertices are grouped by Kripke state. The trace (chosen by Max)
//! starts in the worst group, the machine and specification pick their
//! initial states after seeing it, so `τ* = max over groups of min over the
//! group`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::aggregator::Aggregator;
use crate::automata::{KripkeStructure, Nba, RepairMachine};
use crate::error::{Error, Result};
use crate::product::{build_arena, build_product, GameArena, Player, ProductGraph, ProductOptions};
use crate::rational::{Rational, Threshold};
use crate::solvers::buchi::{attractor, solve_buchi_subgame, BuchiGameResult, Subgame};
use crate::solvers::dsum::{solve_dsum_subgame, ValueMap};
use crate::solvers::mean::{candidate_means, min_mean_at_most, EnergyResult};
use crate::strategy::{ExitRule, FiniteMemoryStrategy};
use crate::threshold::{Attainment, MemoryClass, Orientation, ThresholdResult};

/// Product, arena and the plain Büchi game for one repair instance.
#[derive(Clone, Debug)]
pub struct RepairInstance {
    pub product: ProductGraph,
    pub arena: GameArena,
    pub aggregator: Aggregator,
}

impl RepairInstance {
    pub fn new(k: &KripkeStructure, t: &RepairMachine, b: &Nba, opts: ProductOptions) -> Result<Self> {
        t.aggregator().check()?;
        let product = build_product(k, t, b, opts)?;
        let arena = build_arena(&product);
        Ok(RepairInstance { product, arena, aggregator: t.aggregator().clone() })
    }
}

pub fn repair_threshold(k: &KripkeStructure, t: &RepairMachine, b: &Nba) -> Result<ThresholdResult> {
    let inst = RepairInstance::new(k, t, b, ProductOptions::default())?;
    arena_repair_threshold(&inst.arena, &inst.aggregator)
}

pub fn repair_strategy(k: &KripkeStructure, t: &RepairMachine, b: &Nba, epsilon: &Rational) -> Result<FiniteMemoryStrategy> {
    let inst = RepairInstance::new(k, t, b, ProductOptions::default())?;
    Ok(arena_repair_strategy(&inst.arena, &inst.aggregator, epsilon)?.1)
}

/// Initial Min vertices grouped by the Kripke state they start from. Arenas
/// without labels put each initial vertex in its own group.
pub fn initial_groups(a: &GameArena) -> Vec<Vec<usize>> {
    if a.min_labels.len() != a.n_min() {
        return a.initial().iter().map(|&v| alloc::vec![v]).collect();
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in a.initial() {
        groups.entry(a.min_labels[v].kripke).or_default().push(v);
    }
    groups.into_values().collect()
}

/// True when every group has a vertex inside `win`.
fn all_groups_hit(groups: &[Vec<usize>], win: &[bool]) -> bool {
    !groups.is_empty() && groups.iter().all(|g| g.iter().any(|&v| win[v]))
}

/// Per group, the first vertex of least value; `None` if the group has no
/// valued vertex.
fn group_choice(groups: &[Vec<usize>], value: impl Fn(usize) -> Option<Rational>) -> Option<Vec<(usize, Rational)>> {
    groups
        .iter()
        .map(|g| {
            g.iter()
                .filter_map(|&v| value(v).map(|x| (v, x)))
                .fold(None, |best: Option<(usize, Rational)>, (v, x)| match best {
                    Some((_, ref b)) if *b <= x => best,
                    _ => Some((v, x)),
                })
        })
        .collect()
}

fn finite(x: Rational, att: Attainment, mem: MemoryClass) -> ThresholdResult {
    ThresholdResult::new(Threshold::Finite(x), att, mem, Orientation::Repair)
}

pub fn arena_repair_threshold(a: &GameArena, agg: &Aggregator) -> Result<ThresholdResult> {
    agg.check()?;
    match agg {
        Aggregator::DSum(l) => Ok(dsum_analysis(a, l)?.map(|d| d.result).unwrap_or_else(|| ThresholdResult::infinite(Orientation::Repair))),
        Aggregator::Mean => Ok(mean_analysis(a)?.map(|m| m.result).unwrap_or_else(|| ThresholdResult::infinite(Orientation::Repair))),
        Aggregator::Sup => Ok(sup_threshold_by_edge_removal(a, Aggregator::Sup)?.result),
        Aggregator::LimSup => Ok(sup_threshold_by_edge_removal(a, Aggregator::LimSup)?.result),
    }
}

/// Threshold together with a strategy guaranteeing at most `τ* + ε`
/// (exactly `τ*` when the threshold is attained positionally).
pub fn arena_repair_strategy(a: &GameArena, agg: &Aggregator, epsilon: &Rational) -> Result<(ThresholdResult, FiniteMemoryStrategy)> {
    agg.check()?;
    if !epsilon.is_positive() {
        return Err(Error::NonPositiveEpsilon);
    }
    match agg {
        Aggregator::DSum(l) => {
            let d = dsum_analysis(a, l)?.ok_or(Error::Infeasible)?;
            let k = discount_steps(l, a.max_weight(), epsilon);
            let mut s = FiniteMemoryStrategy::default();
            s.push_mode(a, &d.values.strategy_min, |v| d.region[v], ExitRule::AfterSteps(k), 1);
            s.push_mode(a, &d.buchi.min_strategy, |v| d.region[v], ExitRule::Forever, 1);
            s.epsilon = Some(epsilon.clone());
            s.step_bound = Some(k);
            let groups = initial_groups(a);
            s.starts = group_choice(&groups, |v| d.values.values[v].clone()).unwrap().into_iter().map(|(v, _)| v).collect();
            Ok((d.result, s))
        }
        Aggregator::Mean => {
            let m = mean_analysis(a)?.ok_or(Error::Infeasible)?;
            let s = mean_strategy(a, &m, epsilon);
            Ok((m.result, s))
        }
        Aggregator::Sup | Aggregator::LimSup => {
            let r = sup_threshold_by_edge_removal(a, agg.clone())?;
            let s = r.strategy.ok_or(Error::Infeasible)?;
            Ok((r.result, s))
        }
    }
}

/// Least `k` with `λᵏ·W/(1−λ) ≤ ε`.
pub fn discount_steps(lambda: &Rational, w_max: u64, epsilon: &Rational) -> u64 {
    let mut tail = Rational::from(w_max) / (Rational::one() - lambda);
    let mut k = 0;
    while tail > *epsilon {
        tail = tail * lambda;
        k += 1;
    }
    k
}

struct DsumAnalysis {
    result: ThresholdResult,
    region: Vec<bool>,
    values: ValueMap,
    buchi: BuchiGameResult,
}

fn dsum_analysis(a: &GameArena, lambda: &Rational) -> Result<Option<DsumAnalysis>> {
    let full = Subgame::full(a);
    let buchi = solve_buchi_subgame(a, &full, Player::Min);
    let groups = initial_groups(a);
    if !all_groups_hit(&groups, &buchi.min_winning) {
        return Ok(None);
    }
    let region = buchi.min_winning.clone();
    let sub = full.restrict(&region);
    let values = solve_dsum_subgame(a, &sub, lambda)?;
    let choice = group_choice(&groups, |v| values.values[v].clone()).expect("every group has a winning vertex");
    let tau = choice.iter().map(|(_, x)| x.clone()).max().unwrap();

    // Attained iff in every group Min can either undercut τ*, or play
    // value-optimally forever and still win the Büchi game.
    let tight: Vec<bool> = a
        .edges()
        .iter()
        .enumerate()
        .map(|(e, ed)| {
            !a.is_min(ed.src)
                || !sub.usable(a, e)
                || values.values[ed.src].as_ref()
                    == Some(&(Rational::from(ed.weight) + lambda * values.values[ed.dst].as_ref().unwrap()))
        })
        .collect();
    let tight_win = solve_buchi_subgame(a, &Subgame { vertex: region.clone(), edge: tight }, Player::Min).min_winning;
    let attained = groups.iter().all(|g| {
        g.iter().any(|&v| match values.values[v].as_ref() {
            Some(x) => *x < tau || (*x == tau && tight_win[v]),
            None => false,
        })
    });
    let positional = groups
        .iter()
        .all(|g| g.iter().any(|&v| tight_win[v] && values.values[v].as_ref().is_some_and(|x| *x <= tau)));
    let result = match (attained, positional) {
        (true, true) => finite(tau, Attainment::Attained, MemoryClass::Positional),
        (true, false) => finite(tau, Attainment::Attained, MemoryClass::Finite),
        _ => finite(tau, Attainment::InfimumOnly, MemoryClass::Finite),
    };
    Ok(Some(DsumAnalysis { result, region, values, buchi }))
}

/// Largest set where Min keeps the mean at most `num/den` while visiting
/// the Büchi target infinitely often.
pub struct MeanRegion {
    pub region: Vec<bool>,
    pub energy: EnergyResult,
    pub buchi: BuchiGameResult,
}

pub fn mean_buchi_region(a: &GameArena, num: i64, den: i64) -> MeanRegion {
    let full = Subgame::full(a);
    let mut x = solve_buchi_subgame(a, &full, Player::Min).min_winning;
    loop {
        let sub = full.restrict(&x);
        let energy = min_mean_at_most(a, &sub, num, den);
        let buchi = solve_buchi_subgame(a, &sub, Player::Min);
        let bad: Vec<bool> = (0..a.len()).map(|v| x[v] && (energy.credit[v].is_none() || !buchi.min_winning[v])).collect();
        if !bad.iter().any(|&b| b) {
            return MeanRegion { region: x, energy, buchi };
        }
        let (lost, _) = attractor(a, &full, &x, &bad, Player::Max);
        for v in 0..a.len() {
            if lost[v] {
                x[v] = false;
            }
        }
    }
}

struct MeanAnalysis {
    result: ThresholdResult,
    tau: Rational,
    at_tau: MeanRegion,
    /// Büchi winning region using only credit-preserving Min edges.
    safe: BuchiGameResult,
    safe_attained: bool,
}

fn credit_preserving(a: &GameArena, r: &MeanRegion, num: i64, den: i64) -> Subgame {
    let sub = Subgame::full(a).restrict(&r.region);
    let edge = a
        .edges()
        .iter()
        .enumerate()
        .map(|(e, ed)| {
            if !a.is_min(ed.src) || !sub.usable(a, e) {
                return true;
            }
            match (r.energy.credit[ed.src], r.energy.credit[ed.dst]) {
                (Some(cs), Some(cd)) => {
                    let need = (cd as i128 - (num as i128 - den as i128 * ed.weight as i128)).max(0);
                    need <= cs as i128
                }
                _ => false,
            }
        })
        .collect();
    Subgame { vertex: r.region.clone(), edge }
}

fn mean_analysis(a: &GameArena) -> Result<Option<MeanAnalysis>> {
    let groups = initial_groups(a);
    let cands = candidate_means(a.n_min(), a.max_weight());
    let feasible = |i: usize| -> MeanRegion {
        let (num, den) = cands[i].parts_i64();
        mean_buchi_region(a, num, den)
    };
    let top = feasible(cands.len() - 1);
    if !all_groups_hit(&groups, &top.region) {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if all_groups_hit(&groups, &feasible(mid).region) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let tau = cands[lo].clone();
    let at_tau = feasible(lo);
    let (num, den) = tau.parts_i64();
    let safe = solve_buchi_subgame(a, &credit_preserving(a, &at_tau, num, den), Player::Min);
    let below: Option<Vec<bool>> = if lo > 0 { Some(feasible(lo - 1).region) } else { None };
    let attained = groups.iter().all(|g| {
        g.iter().any(|&v| safe.min_winning[v] || below.as_ref().is_some_and(|b| b[v]))
    });
    let safe_attained = groups.iter().all(|g| g.iter().any(|&v| safe.min_winning[v]));
    let result = if attained {
        let mem = if safe_attained { MemoryClass::Positional } else { MemoryClass::Finite };
        finite(tau.clone(), Attainment::Attained, mem)
    } else {
        finite(tau.clone(), Attainment::InfimumOnly, MemoryClass::InfiniteForExact)
    };
    Ok(Some(MeanAnalysis { result, tau, at_tau, safe, safe_attained }))
}

/// Alternates an energy-preserving phase of `N` rounds with a dash to the
/// Büchi target. Over one period the cost exceeds `N·τ*` by at most
/// `F/b + B·W` (max credit `F`, dash length `B`), so `N ≥ (F/b + B·W)/ε`
/// rounds keep the mean within `ε`.
fn mean_strategy(a: &GameArena, m: &MeanAnalysis, epsilon: &Rational) -> FiniteMemoryStrategy {
    let groups = initial_groups(a);
    if m.safe_attained {
        let mut s = FiniteMemoryStrategy::positional(a, &m.safe.min_strategy, |v| m.safe.min_winning[v]);
        s.epsilon = Some(epsilon.clone());
        s.starts = first_in(&groups, &m.safe.min_winning);
        return s;
    }
    let r = &m.at_tau;
    let (_, den) = m.tau.parts_i64();
    let f = (0..a.len()).filter(|&v| r.region[v]).filter_map(|v| r.energy.credit[v]).max().unwrap_or(0);
    let dash = (0..a.n_min()).filter(|&v| r.region[v]).count() as u64 + 1;
    let slack = Rational::new(f as i64, den) + Rational::from(dash * a.max_weight());
    let n = u64::try_from((slack / epsilon).ceil()).unwrap_or(u64::MAX).max(1);
    let mut s = FiniteMemoryStrategy::default();
    s.push_mode(a, &r.energy.strategy, |v| r.region[v], ExitRule::AfterSteps(n), 1);
    s.push_mode(a, &r.buchi.min_strategy, |v| r.region[v], ExitRule::AfterAcceptingVisit, 0);
    s.epsilon = Some(epsilon.clone());
    s.step_bound = Some(n);
    s.starts = first_in(&groups, &r.region);
    s
}

fn first_in(groups: &[Vec<usize>], set: &[bool]) -> Vec<usize> {
    groups.iter().filter_map(|g| g.iter().copied().find(|&v| set[v])).collect()
}

/// Threshold plus an optimal positional strategy for Sup and LimSup.
#[derive(Clone, Debug)]
pub struct BottleneckRepair {
    pub result: ThresholdResult,
    pub strategy: Option<FiniteMemoryStrategy>,
}

/// Scans weight classes from light to heavy. Sup: Min must win the Büchi
/// game using only edges up to the class. LimSup: heavier edges remain
/// usable finitely often, which is a three-colour parity condition solved
/// by peeling off light Büchi regions and their attractors.
pub fn sup_threshold_by_edge_removal(a: &GameArena, mode: Aggregator) -> Result<BottleneckRepair> {
    let groups = initial_groups(a);
    let mut weights: Vec<u64> = a.edges().iter().filter(|e| a.is_min(e.src)).map(|e| e.weight).collect();
    weights.sort_unstable();
    weights.dedup();
    for c in weights {
        let (win, strat) = match mode {
            Aggregator::Sup => {
                let b = solve_buchi_subgame(a, &Subgame::light_edges(a, c), Player::Min);
                (b.min_winning, b.min_strategy)
            }
            Aggregator::LimSup => limsup_region(a, c),
            _ => return Err(Error::WrongAggregator("SUP or LIMSUP")),
        };
        if all_groups_hit(&groups, &win) {
            let mut strategy = FiniteMemoryStrategy::positional(a, &strat, |v| win[v]);
            strategy.starts = first_in(&groups, &win);
            return Ok(BottleneckRepair {
                result: finite(Rational::from(c), Attainment::Attained, MemoryClass::Positional),
                strategy: Some(strategy),
            });
        }
    }
    Ok(BottleneckRepair { result: ThresholdResult::infinite(Orientation::Repair), strategy: None })
}

/// Min's winning region for "accepting infinitely often and eventually only
/// edges of weight ≤ c", with a positional strategy.
pub fn limsup_region(a: &GameArena, c: u64) -> (Vec<bool>, Vec<Option<usize>>) {
    let n = a.len();
    let full = Subgame::full(a);
    let light = Subgame::light_edges(a, c);
    let everything = alloc::vec![true; n];
    let mut won = alloc::vec![false; n];
    let mut strat: Vec<Option<usize>> = alloc::vec![None; n];
    loop {
        let rest: Vec<bool> = won.iter().map(|w| !w).collect();
        let layer = solve_buchi_subgame(a, &light.restrict(&rest), Player::Min);
        if !(0..n).any(|v| rest[v] && layer.min_winning[v]) {
            return (won, strat);
        }
        let target: Vec<bool> = (0..n).map(|v| won[v] || layer.min_winning[v]).collect();
        let (attr, attr_strat) = attractor(a, &full, &everything, &target, Player::Min);
        for v in 0..n {
            if won[v] {
                continue;
            }
            if layer.min_winning[v] {
                strat[v] = layer.min_strategy[v];
            } else if attr[v] {
                strat[v] = attr_strat[v];
            }
            won[v] = attr[v];
        }
    }
}
