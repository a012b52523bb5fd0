//! Ultimately periodic membership for Büchi automata.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::automata::{Nba, Symbol};
use crate::error::{Error, Result};
use crate::graph::{tarjan_scc, Adjacency};
use crate::lasso::Lasso;

/// Decides `prefix · cycle^ω ∈ L(a)`.
///
/// Explores the product of `a` with the positions of the lasso and looks
/// for a reachable non-trivial SCC holding an accepting state.
pub fn lasso_membership(a: &Nba, w: &Lasso<Symbol>) -> Result<bool> {
    for s in w.prefix().iter().chain(w.cycle()) {
        if !a.alphabet().contains(*s) {
            return Err(Error::AlphabetMismatch(alloc::format!(
                "letter #{} is not in the automaton alphabet",
                s.0
            )));
        }
    }
    let span = w.span();
    let id = |q: usize, pos: usize| q * span + pos;
    let n = a.num_states() * span;
    let mut seen = alloc::vec![false; n];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for &q in a.initial() {
        if q < a.num_states() && !seen[id(q, 0)] {
            seen[id(q, 0)] = true;
            stack.push((q, 0));
        }
    }
    let mut adj: Adjacency = alloc::vec![Vec::new(); n];
    while let Some((q, pos)) = stack.pop() {
        let next = w.next_position(pos);
        for t in a.successors(q, *w.at(pos)) {
            adj[id(q, pos)].push(id(t, next));
            if !seen[id(t, next)] {
                seen[id(t, next)] = true;
                stack.push((t, next));
            }
        }
    }
    let accepting: BTreeSet<usize> = a.accepting().iter().copied().collect();
    for comp in tarjan_scc(&adj) {
        let nontrivial = comp.len() > 1 || adj[comp[0]].contains(&comp[0]);
        if nontrivial && seen[comp[0]] && comp.iter().any(|v| accepting.contains(&(v / span))) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Translates a lasso over named letters into symbols of `a`'s alphabet.
pub fn lasso_from_names(a: &crate::automata::Alphabet, prefix: &[&str], cycle: &[&str]) -> Result<Lasso<Symbol>> {
    let conv = |names: &[&str]| -> Result<Vec<Symbol>> {
        names
            .iter()
            .map(|n| {
                a.lookup(n)
                    .ok_or_else(|| Error::AlphabetMismatch(alloc::format!("unknown letter `{n}`")))
            })
            .collect()
    };
    Lasso::new(conv(prefix)?, conv(cycle)?)
}
