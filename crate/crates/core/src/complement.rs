//! Büchi complementation by tight rankings, intersection and trimming of NBAs.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use crate::automata::{Nba, Symbol};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Default gate on the number of (trimmed) input states.
pub const DEFAULT_COMPLEMENT_LIMIT: usize = 24;

/// Gate on the number of macro-states built.
const MAX_MACRO_STATES: usize = 1 << 16;

const NONE: u8 = u8::MAX;

/// Removes states that are unreachable or start no accepting lasso.
pub fn trim_nba(a: &Nba) -> Nba {
    let n = a.num_states();
    let mut g = WeightedGraph::new(n);
    for &(q, _, t) in a.transitions() {
        g.add_edge(q, t, 0, false);
    }
    for &q in a.accepting() {
        g.set_final(q);
    }
    let init: Vec<usize> = a.initial().iter().copied().collect();
    let reach = g.reachable(&init, |_| true);
    let live = g.accepting_lasso_region(|_| true);
    let keep: Vec<bool> = (0..n).map(|q| reach[q] && live[q]).collect();
    let mut map = alloc::vec![usize::MAX; n];
    let mut out = Nba::new(a.alphabet().clone());
    for q in (0..n).filter(|&q| keep[q]) {
        map[q] = out.add_state(a.name(q), a.initial().contains(&q), a.is_accepting(q));
    }
    for &(q, s, t) in a.transitions() {
        if keep[q] && keep[t] {
            out.add_transition(map[q], s, map[t]);
        }
    }
    out
}

/// `L(a) ∩ L(b)`; `b` is read over `a`'s alphabet by letter name.
pub fn intersect_nba(a: &Nba, b: &Nba) -> Result<Nba> {
    let to_b = a.alphabet().translation(b.alphabet());
    let mut out = Nba::new(a.alphabet().clone());
    let mut index: BTreeMap<(usize, usize, bool), usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut get = |key: (usize, usize, bool), out: &mut Nba, queue: &mut VecDeque<((usize, usize, bool), usize)>| -> usize {
        *index.entry(key).or_insert_with(|| {
            let name = alloc::format!("{}|{}|{}", a.name(key.0), b.name(key.1), u8::from(key.2) + 1);
            let i = out.add_state(name, false, key.2 && b.is_accepting(key.1));
            queue.push_back((key, i));
            i
        })
    };
    for &p in a.initial() {
        for &q in b.initial() {
            let i = get((p, q, false), &mut out, &mut queue);
            out.set_initial(i);
        }
    }
    while let Some(((p, q, second), src)) = queue.pop_front() {
        let next = if second { !b.is_accepting(q) } else { a.is_accepting(p) };
        for (s, p2) in a.out_transitions(p) {
            let Some(sb) = to_b[s.index()] else { continue };
            let q2s: Vec<usize> = b.successors(q, sb).collect();
            for q2 in q2s {
                let dst = get((p2, q2, next), &mut out, &mut queue);
                out.add_transition(src, s, dst);
            }
        }
    }
    Ok(out)
}

/// Phase flag (`false` while only the reachable subset is tracked), a level
/// ranking (`NONE` off the current level) and the obligation set. In the
/// subset phase the ranking holds 0 on the level.
type Macro = (bool, Vec<u8>, Vec<bool>);

pub fn complement_nba(a: &Nba) -> Result<Nba> {
    complement_nba_with_limit(a, DEFAULT_COMPLEMENT_LIMIT)
}

/// Calls `emit` with every tight level ranking on `level` below `bound`:
/// accepting states get even ranks, the largest rank is odd and every
/// smaller odd rank is used.
fn tight_rankings(level: &[usize], bound: &[u8], accepting: &[bool], n: usize, emit: &mut dyn FnMut(&[u8])) {
    fn go(
        i: usize,
        top: u8,
        used: u64,
        level: &[usize],
        bound: &[u8],
        accepting: &[bool],
        g: &mut Vec<u8>,
        emit: &mut dyn FnMut(&[u8]),
    ) {
        let need = (0..=top).filter(|r| r % 2 == 1 && used & (1 << r) == 0).count();
        if need > level.len() - i {
            return;
        }
        let Some(&q) = level.get(i) else {
            emit(g);
            return;
        };
        for r in 0..=bound[q].min(top) {
            if accepting[q] && r % 2 == 1 {
                continue;
            }
            g[q] = r;
            go(i + 1, top, used | (1 << r), level, bound, accepting, g, emit);
        }
        g[q] = NONE;
    }
    let mut g = alloc::vec![NONE; n];
    if level.is_empty() {
        emit(&g);
        return;
    }
    let hi = level.iter().map(|&q| bound[q]).max().unwrap_or(0);
    for top in (1..=hi).step_by(2) {
        go(0, top, 0, level, bound, accepting, &mut g, emit);
    }
}

/// Complement by tight level rankings with maximal rank `2(n − |F|)`: a
/// subset phase, then a guessed switch to rankings. Built on the fly from
/// the reachable macro-states.
pub fn complement_nba_with_limit(a: &Nba, limit: usize) -> Result<Nba> {
    let t = trim_nba(a);
    let n = t.num_states();
    if n > limit {
        return Err(Error::SizeLimit { states: n, limit });
    }
    if n == 0 || t.initial().is_empty() {
        return Ok(Nba::universal(a.alphabet().clone()));
    }
    let max_rank = u8::try_from(2 * (n - t.accepting().len())).map_err(|_| Error::SizeLimit { states: n, limit })?;
    // Used ranks are tracked in a `u64`.
    if max_rank > 62 {
        return Err(Error::SizeLimit { states: n, limit: 31 + t.accepting().len() });
    }
    let accepting: Vec<bool> = (0..n).map(|q| t.is_accepting(q)).collect();
    let letters: Vec<Symbol> = t.alphabet().symbols().collect();
    let mut out = Nba::new(t.alphabet().clone());
    let mut index: BTreeMap<Macro, usize> = BTreeMap::new();
    let mut queue: VecDeque<(Macro, usize)> = VecDeque::new();
    let mut get = |m: Macro, out: &mut Nba, queue: &mut VecDeque<(Macro, usize)>| -> Result<usize> {
        if let Some(&i) = index.get(&m) {
            return Ok(i);
        }
        if index.len() >= MAX_MACRO_STATES {
            return Err(Error::SizeLimit { states: n, limit });
        }
        let accepting = m.0 && !m.2.iter().any(|&o| o);
        let i = out.add_state(alloc::format!("m{}", index.len()), false, accepting);
        index.insert(m.clone(), i);
        queue.push_back((m, i));
        Ok(i)
    };
    let mut f0 = alloc::vec![NONE; n];
    for &q in t.initial() {
        f0[q] = 0;
    }
    let i0 = get((false, f0, alloc::vec![false; n]), &mut out, &mut queue)?;
    out.set_initial(i0);
    while let Some(((ranked, f, o), src)) = queue.pop_front() {
        for &s in &letters {
            // Highest rank each successor may take.
            let mut bound = alloc::vec![NONE; n];
            let mut from_o = alloc::vec![false; n];
            for q in (0..n).filter(|&q| f[q] != NONE) {
                let r = if ranked { f[q] } else { max_rank };
                for q2 in t.successors(q, s) {
                    bound[q2] = if bound[q2] == NONE { r } else { bound[q2].min(r) };
                    from_o[q2] |= o[q];
                }
            }
            let level: Vec<usize> = (0..n).filter(|&q| bound[q] != NONE).collect();
            if !ranked {
                let subset: Vec<u8> = (0..n).map(|q| if bound[q] == NONE { NONE } else { 0 }).collect();
                let dst = get((false, subset, alloc::vec![false; n]), &mut out, &mut queue)?;
                out.add_transition(src, s, dst);
            }
            let o_empty = !o.iter().any(|&x| x);
            let mut found = Vec::new();
            tight_rankings(&level, &bound, &accepting, n, &mut |g| {
                let o2: Vec<bool> = (0..n).map(|q| g[q] != NONE && g[q] % 2 == 0 && (o_empty || from_o[q])).collect();
                found.push((true, g.to_vec(), o2));
            });
            for m in found {
                let dst = get(m, &mut out, &mut queue)?;
                out.add_transition(src, s, dst);
            }
        }
    }
    Ok(out)
}
