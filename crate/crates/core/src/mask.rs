//! Masks: the input words every cheap rewriting keeps out of a bad
//! language.
//!
//! For DSum the bad words are approximated by the chain `A_0 ⊆ A_1 ⊆ …`
//! which is exact from depth `n*` on when the threshold is isolated. Sup and
//! LimSup bad sets are plain NBAs; the mask is their complement within the
//! machine domain.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::aggregator::Aggregator;
use crate::automata::{Nba, RepairMachine, Symbol};
use crate::complement::{complement_nba_with_limit, intersect_nba, trim_nba};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::impair::graph_impair_threshold;
use crate::lasso::Lasso;
use crate::membership::lasso_membership;
use crate::product::{output_product, trim};
use crate::rational::{Rational, Threshold};

/// A partial run of the output product, merged by depth, end state and
/// exact discounted prefix cost.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DangerState {
    pub depth: usize,
    pub rm_state: usize,
    pub prefix_cost: Rational,
}

/// `B_m = λ^m · W / (1 − λ)`.
pub fn tail_bound(lambda: &Rational, w_max: u64, m: usize) -> Rational {
    lambda.pow(m as u32) * Rational::from(w_max) / (Rational::one() - lambda)
}

/// `n* = min{m : B_m ≤ ε/2}`.
pub fn isolation_depth(lambda: &Rational, w_max: u64, epsilon: &Rational) -> usize {
    let half = epsilon / &Rational::from(2u64);
    (0..).find(|&m| tail_bound(lambda, w_max, m) <= half).unwrap()
}

fn dsum_lambda(t: &RepairMachine) -> Result<Rational> {
    match t.aggregator() {
        Aggregator::DSum(l) => {
            t.aggregator().check()?;
            Ok(l.clone())
        }
        _ => Err(Error::WrongAggregator("DSUM")),
    }
}

/// The trimmed output product `T″`: runs of `tq` whose output lies in `L(a)`.
pub fn bad_runs_machine(tq: &RepairMachine, a: &Nba) -> Result<RepairMachine> {
    Ok(trim(&output_product(tq, a)?))
}

#[derive(Clone, Debug)]
pub struct DsumMask {
    /// `A_depth` over the input alphabet.
    pub nba: Nba,
    pub depth: usize,
    pub n_star: usize,
    pub w_max: u64,
    /// Danger states below `depth`, in construction order.
    pub danger: Vec<DangerState>,
}

/// `A_n`: input words with a depth-`n` partial run of discounted cost at most
/// `τ − B_n` that continues into an accepting run of `T″`. With `depth =
/// None` the depth is `n*`.
pub fn dsum_mask_bad_nba(tq: &RepairMachine, a: &Nba, tau: &Rational, epsilon: &Rational, depth: Option<usize>) -> Result<DsumMask> {
    let lambda = dsum_lambda(tq)?;
    if !epsilon.is_positive() {
        return Err(Error::NonPositiveEpsilon);
    }
    let t2 = bad_runs_machine(tq, a)?;
    let w_max = t2.max_cost();
    let n_star = isolation_depth(&lambda, w_max, epsilon);
    let n = depth.unwrap_or(n_star);
    let budget = tau - &tail_bound(&lambda, w_max, n);

    let mut out = Nba::new(t2.input_alphabet().clone());
    // Copy of T″ first: state q of the copy is state q of `out`.
    for q in 0..t2.num_states() {
        out.add_state(alloc::format!("c{q}"), false, t2.is_accepting(q));
    }
    for tr in t2.transitions() {
        out.add_transition(tr.from, tr.input, tr.to);
    }
    let mut danger: Vec<DangerState> = Vec::new();
    let mut index: BTreeMap<DangerState, usize> = BTreeMap::new();
    let mut layer: Vec<DangerState> = Vec::new();
    if !budget.is_negative() {
        for &q in t2.initial() {
            let d = DangerState { depth: 0, rm_state: q, prefix_cost: Rational::zero() };
            if n == 0 {
                out.set_initial(q);
            } else {
                let i = out.add_state(alloc::format!("d0_{q}"), true, false);
                index.insert(d.clone(), i);
                danger.push(d.clone());
                layer.push(d);
            }
        }
    }
    for k in 0..n {
        let weight = lambda.pow(k as u32);
        let mut next = Vec::new();
        for d in &layer {
            let src = index[d];
            for tr in t2.transitions().iter().filter(|tr| tr.from == d.rm_state) {
                let cost = &d.prefix_cost + &(&weight * &Rational::from(tr.cost.max(0) as u64));
                // Costs only grow, so an over-budget prefix never becomes dangerous.
                if cost > budget {
                    continue;
                }
                let dst = if k + 1 == n {
                    tr.to
                } else {
                    let d2 = DangerState { depth: k + 1, rm_state: tr.to, prefix_cost: cost };
                    match index.get(&d2) {
                        Some(&i) => i,
                        None => {
                            let i = out.add_state(alloc::format!("d{}_{}_{}", k + 1, tr.to, index.len()), false, false);
                            index.insert(d2.clone(), i);
                            danger.push(d2.clone());
                            next.push(d2);
                            i
                        }
                    }
                };
                out.add_transition(src, tr.input, dst);
            }
        }
        layer = next;
    }
    Ok(DsumMask { nba: trim_nba(&out), depth: n, n_star, w_max, danger })
}

/// Graph of the runs of `t` on `input`: vertices `(state, position)`.
pub fn run_graph(t: &RepairMachine, input: &Lasso<Symbol>) -> WeightedGraph {
    let span = input.span();
    let id = |q: usize, pos: usize| q * span + pos;
    let mut g = WeightedGraph::new(t.num_states() * span);
    for q in 0..t.num_states() {
        for pos in 0..span {
            for tr in t.moves(q, *input.at(pos)) {
                g.add_edge(id(q, pos), id(tr.to, input.next_position(pos)), tr.cost.max(0) as u64, false);
            }
            if t.is_accepting(q) {
                g.set_final(id(q, pos));
            }
        }
    }
    for &q in t.initial() {
        g.set_initial(id(q, 0));
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    pub n_star: usize,
    /// `members[n][i]`: sample `i` lies in `L(A_n)`.
    pub members: Vec<Vec<bool>>,
    /// `(n, i)` with sample `i` in `A_n` but not in `A_{n+1}`.
    pub violations: Vec<(usize, usize)>,
    /// Least `n` from which membership no longer changes up to `upto`.
    pub stable_from: usize,
    pub warnings: Vec<String>,
}

impl ChainReport {
    pub fn chain_holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Builds `A_0 … A_upto` and checks `L(A_n) ⊆ L(A_{n+1})` on `sample`.
/// Samples whose cheapest bad run lands strictly between `τ − ε` and `τ + ε`
/// raise a `NOT_ISOLATED` warning.
pub fn dsum_mask_chain_check(
    tq: &RepairMachine,
    a: &Nba,
    tau: &Rational,
    epsilon: &Rational,
    upto: usize,
    sample: &[Lasso<Symbol>],
) -> Result<ChainReport> {
    let lambda = dsum_lambda(tq)?;
    let mut members = Vec::new();
    let mut n_star = 0;
    for n in 0..=upto {
        let m = dsum_mask_bad_nba(tq, a, tau, epsilon, Some(n))?;
        n_star = m.n_star;
        members.push(sample.iter().map(|w| lasso_membership(&m.nba, w)).collect::<Result<Vec<bool>>>()?);
    }
    let mut violations = Vec::new();
    for n in 0..upto {
        for i in 0..sample.len() {
            if members[n][i] && !members[n + 1][i] {
                violations.push((n, i));
            }
        }
    }
    let stable_from = (0..=upto).find(|&n| members[n..].iter().all(|m| *m == members[upto])).unwrap_or(upto);
    let t2 = bad_runs_machine(tq, a)?;
    let agg = Aggregator::DSum(lambda);
    let mut warnings = Vec::new();
    for (i, w) in sample.iter().enumerate() {
        if let Threshold::Finite(v) = graph_impair_threshold(&run_graph(&t2, w), &agg)?.value {
            if v > tau - epsilon && v < tau + epsilon {
                warnings.push(alloc::format!("NOT_ISOLATED sample {i} cost {v}"));
            }
        }
    }
    Ok(ChainReport { n_star, members, violations, stable_from, warnings })
}

/// NBA plus a weight per transition; a word's value is the least sup of
/// weights over its accepting runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupAutomaton {
    pub nba: Nba,
    pub weight: BTreeMap<(usize, Symbol, usize), u64>,
}

impl SupAutomaton {
    /// Input projection of a machine, keeping the cheapest parallel
    /// transition.
    pub fn from_machine(t: &RepairMachine) -> Self {
        let nba = t.domain_nba();
        let mut weight: BTreeMap<(usize, Symbol, usize), u64> = BTreeMap::new();
        for tr in t.transitions() {
            let w = tr.cost.max(0) as u64;
            weight.entry((tr.from, tr.input, tr.to)).and_modify(|x| *x = (*x).min(w)).or_insert(w);
        }
        SupAutomaton { nba, weight }
    }

    pub fn is_deterministic(&self) -> bool {
        self.nba.is_deterministic()
    }

    /// Transitions of weight at most `tau`.
    pub fn cheap(&self, tau: &Rational) -> Nba {
        let mut out = Nba::new(self.nba.alphabet().clone());
        for q in 0..self.nba.num_states() {
            out.add_state(self.nba.name(q), self.nba.initial().contains(&q), self.nba.is_accepting(q));
        }
        for (&(q, s, t), &w) in &self.weight {
            if Rational::from(w) <= *tau {
                out.add_transition(q, s, t);
            }
        }
        out
    }
}

/// Words whose run traverses a weight above `τ`: states `Q × {0, 1}`,
/// copy 1 accepting. Deterministic automata only.
pub fn sup_gt_threshold_nba(u: &SupAutomaton, tau: &Rational) -> Result<Nba> {
    if !u.is_deterministic() {
        return Err(Error::NondeterministicInput);
    }
    let n = u.nba.num_states();
    let mut out = Nba::new(u.nba.alphabet().clone());
    for copy in 0..2 {
        for q in 0..n {
            out.add_state(alloc::format!("{}|{copy}", u.nba.name(q)), copy == 0 && u.nba.initial().contains(&q), copy == 1);
        }
    }
    for (&(q, s, t), &w) in &u.weight {
        if Rational::from(w) <= *tau {
            out.add_transition(q, s, t);
        } else {
            out.add_transition(q, s, n + t);
        }
        out.add_transition(n + q, s, n + t);
    }
    Ok(out)
}

/// Input words with an accepting `T″` run whose every weight is at most `τ`.
pub fn sup_bad_nba(tq: &RepairMachine, a: &Nba, tau: &Rational) -> Result<Nba> {
    let u = SupAutomaton::from_machine(&bad_runs_machine(tq, a)?);
    Ok(trim_nba(&u.cheap(tau)))
}

/// Input words with an accepting `T″` run whose weights are eventually at
/// most `τ`: phase 1 reads anything, phase 2 only cheap transitions and
/// carries the acceptance.
pub fn limsup_bad_nba(tq: &RepairMachine, a: &Nba, tau: &Rational) -> Result<Nba> {
    let u = SupAutomaton::from_machine(&bad_runs_machine(tq, a)?);
    let n = u.nba.num_states();
    let mut out = Nba::new(u.nba.alphabet().clone());
    for phase in 1..=2 {
        for q in 0..n {
            out.add_state(alloc::format!("{}|{phase}", u.nba.name(q)), phase == 1 && u.nba.initial().contains(&q), phase == 2 && u.nba.is_accepting(q));
        }
    }
    for (&(q, s, t), &w) in &u.weight {
        out.add_transition(q, s, t);
        if Rational::from(w) <= *tau {
            out.add_transition(q, s, n + t);
            out.add_transition(n + q, s, n + t);
        }
    }
    Ok(trim_nba(&out))
}

/// `dom(tq) \ L(bad)`.
pub fn mask_from_bad(tq: &RepairMachine, bad: &Nba, complement_limit: usize) -> Result<Nba> {
    let good = complement_nba_with_limit(bad, complement_limit)?;
    Ok(trim_nba(&intersect_nba(&tq.domain_nba(), &good)?))
}

pub fn sup_mask(tq: &RepairMachine, a: &Nba, tau: &Rational, complement_limit: usize) -> Result<Nba> {
    mask_from_bad(tq, &sup_bad_nba(tq, a, tau)?, complement_limit)
}

pub fn limsup_mask(tq: &RepairMachine, a: &Nba, tau: &Rational, complement_limit: usize) -> Result<Nba> {
    mask_from_bad(tq, &limsup_bad_nba(tq, a, tau)?, complement_limit)
}

#[derive(Clone, Debug)]
pub struct MaskOptions {
    /// Isolation margin; required for DSum.
    pub epsilon: Option<Rational>,
    /// DSum chain depth; `None` means `n*`.
    pub depth: Option<usize>,
    pub complement_limit: usize,
}

impl Default for MaskOptions {
    fn default() -> Self {
        MaskOptions { epsilon: None, depth: None, complement_limit: crate::complement::DEFAULT_COMPLEMENT_LIMIT }
    }
}

#[derive(Clone, Debug)]
pub struct MaskResult {
    /// Bad words within the domain.
    pub bad: Nba,
    /// The mask `N′`.
    pub mask: Nba,
}

/// Bad set and mask for the machine's aggregator. Mean is refused.
pub fn synthesize_mask(tq: &RepairMachine, a: &Nba, tau: &Rational, opts: &MaskOptions) -> Result<MaskResult> {
    let bad = match tq.aggregator() {
        Aggregator::Mean => return Err(Error::UndecidableMeanMask),
        Aggregator::DSum(_) => {
            let eps = opts.epsilon.as_ref().ok_or(Error::NonPositiveEpsilon)?;
            dsum_mask_bad_nba(tq, a, tau, eps, opts.depth)?.nba
        }
        Aggregator::Sup => sup_bad_nba(tq, a, tau)?,
        Aggregator::LimSup => limsup_bad_nba(tq, a, tau)?,
    };
    let mask = mask_from_bad(tq, &bad, opts.complement_limit)?;
    Ok(MaskResult { bad, mask })
}
