//! Small reference instances used by tests, examples and the CLI fixtures.
//!
//! Letter names: `bot`, `sq`, `tr` stand for the printer's idle, square and
//! triangle jobs.

use crate::aggregator::Aggregator;
use crate::automata::{Alphabet, KripkeStructure, Nba, RepairMachine};
use crate::graph::WeightedGraph;
use crate::rational::Rational;

/// Four-state machine over inputs `a,b` and outputs `c,d`. The input
/// `ba(ab)^ω` has the cost sequence `2,0,(1,4)^ω`.
pub fn appendix_machine(agg: Aggregator) -> RepairMachine {
    let mut t = RepairMachine::new(Alphabet::from_names(["a", "b"]), Alphabet::from_names(["c", "d"]), agg);
    let l0 = t.add_state("l0", true, true);
    let l1 = t.add_state("l1", false, false);
    let l2 = t.add_state("l2", false, true);
    let l3 = t.add_state("l3", false, false);
    t.add_named(l0, "a", l0, &["d"], 1);
    t.add_named(l0, "b", l1, &["c"], 2);
    t.add_named(l1, "a", l2, &["c"], 0);
    t.add_named(l2, "a", l3, &["c"], 1);
    t.add_named(l2, "b", l3, &["c"], 1);
    t.add_named(l3, "b", l2, &["c", "d"], 4);
    t.add_named(l3, "a", l1, &[], 1);
    t
}

/// Printer: from idle it may start either job; each job may repeat, switch
/// or go idle.
pub fn printer_kripke() -> KripkeStructure {
    let mut k = KripkeStructure::new();
    let bot = k.add_state("s_bot", "bot", true);
    let sq = k.add_state("s_sq", "sq", false);
    let tr = k.add_state("s_tr", "tr", false);
    for (s, t) in [(bot, sq), (bot, tr), (sq, sq), (sq, tr), (sq, bot), (tr, tr), (tr, sq), (tr, bot)] {
        k.add_edge(s, t);
    }
    k
}

/// Both shapes are printed infinitely often.
pub fn printer_spec() -> Nba {
    let mut b = Nba::new(Alphabet::from_names(["bot", "sq", "tr"]));
    let p: [usize; 5] = core::array::from_fn(|i| b.add_state(alloc::format!("p{i}"), i == 0, i == 4));
    b.add_named(p[0], "bot", p[1]);
    b.add_named(p[1], "bot", p[1]);
    b.add_named(p[1], "tr", p[2]);
    b.add_named(p[1], "sq", p[3]);
    b.add_named(p[2], "tr", p[2]);
    b.add_named(p[2], "bot", p[2]);
    b.add_named(p[2], "sq", p[4]);
    b.add_named(p[3], "sq", p[3]);
    b.add_named(p[3], "bot", p[3]);
    b.add_named(p[3], "tr", p[4]);
    for a in ["bot", "sq", "tr"] {
        b.add_named(p[4], a, p[1]);
    }
    b
}

/// Identity at cost 0, or append the other shape at cost 3.
pub fn printer_machine(agg: Aggregator) -> RepairMachine {
    let names = ["bot", "sq", "tr"];
    let mut t = RepairMachine::new(Alphabet::from_names(names), Alphabet::from_names(names), agg);
    let q = t.add_state("q0", true, true);
    for a in names {
        t.add_named(q, a, q, &[a], 0);
    }
    t.add_named(q, "sq", q, &["sq", "tr"], 3);
    t.add_named(q, "tr", q, &["tr", "sq"], 3);
    t
}

/// `p0 -1-> p1`, `p1` loops at 0, `p1 -1-> p2`, `p2` accepting with a
/// weight-1 loop. No path reaches the infimum 1 of its discounted costs.
pub fn dsum_inf_graph() -> WeightedGraph {
    let mut g = WeightedGraph::new(3);
    g.add_edge(0, 1, 1, false);
    g.add_edge(1, 1, 0, false);
    g.add_edge(1, 2, 1, false);
    g.add_edge(2, 2, 1, false);
    g.set_initial(0);
    g.set_final(2);
    g
}

/// `v0` loops at 0, `v0 ↔ v1` at 1 each way, `v1` accepting with a weight-1
/// loop. The mean infimum 0 needs ever longer stays at `v0`.
pub fn mean_inset_graph() -> WeightedGraph {
    let mut g = WeightedGraph::new(2);
    g.add_edge(0, 0, 0, false);
    g.add_edge(0, 1, 1, false);
    g.add_edge(1, 0, 1, false);
    g.add_edge(1, 1, 1, false);
    g.set_initial(0);
    g.set_final(1);
    g
}

/// One-state structure looping on `a`.
pub fn single_loop_kripke() -> KripkeStructure {
    let mut k = KripkeStructure::new();
    let s = k.add_state("s", "a", true);
    k.add_edge(s, s);
    k
}

/// Machine version of [`dsum_inf_graph`]: writing `x` costs 1 on entry
/// then 0, switching to `y` costs 1 and `y` costs 1 forever.
pub fn dsum_inf_machine(lambda: Rational) -> RepairMachine {
    let mut t = RepairMachine::new(Alphabet::from_names(["a"]), Alphabet::from_names(["x", "y"]), Aggregator::DSum(lambda));
    let p0 = t.add_state("p0", true, true);
    let p1 = t.add_state("p1", false, true);
    let p2 = t.add_state("p2", false, true);
    t.add_named(p0, "a", p1, &["x"], 1);
    t.add_named(p1, "a", p1, &["x"], 0);
    t.add_named(p1, "a", p2, &["y"], 1);
    t.add_named(p2, "a", p2, &["y"], 1);
    t
}

/// Words over `x,y` with infinitely many `y`.
pub fn infinitely_many_y() -> Nba {
    let mut b = Nba::new(Alphabet::from_names(["x", "y"]));
    let n0 = b.add_state("n0", true, false);
    let n1 = b.add_state("n1", false, true);
    b.add_named(n0, "x", n0);
    b.add_named(n0, "y", n1);
    b.add_named(n1, "x", n0);
    b.add_named(n1, "y", n1);
    b
}

/// Machine version of [`mean_inset_graph`]: `x` keeps the cheap state,
/// every `y` is paid for.
pub fn mean_inset_machine() -> RepairMachine {
    let mut t = RepairMachine::new(Alphabet::from_names(["a"]), Alphabet::from_names(["x", "y"]), Aggregator::Mean);
    let v0 = t.add_state("v0", true, true);
    let v1 = t.add_state("v1", false, true);
    t.add_named(v0, "a", v0, &["x"], 0);
    t.add_named(v0, "a", v1, &["y"], 1);
    t.add_named(v1, "a", v0, &["x"], 1);
    t.add_named(v1, "a", v1, &["y"], 1);
    t
}
