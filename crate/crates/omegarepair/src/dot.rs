//! Graphviz export. Accepting states and final product vertices are drawn
//! double-circled; accepting product edges are bold.

use std::fmt::Write as _;

use omegarepair_core::product::GameArena;
use omegarepair_core::{KripkeStructure, Nba, ProductGraph, RepairMachine};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n"))
}

fn start_marks(out: &mut String, initial: impl IntoIterator<Item = usize>) {
    for v in initial {
        writeln!(out, "  init{v} [shape=point];\n  init{v} -> {v};").unwrap();
    }
}

pub fn kripke_dot(k: &KripkeStructure) -> String {
    let mut s = String::from("digraph kripke {\n  rankdir=LR;\n");
    for q in 0..k.num_states() {
        writeln!(s, "  {q} [shape=circle, label={}];", quote(&format!("{}\n{}", k.name(q), k.label_name(q)))).unwrap();
    }
    start_marks(&mut s, k.initial().iter().copied());
    for &(a, b) in k.edges() {
        writeln!(s, "  {a} -> {b};").unwrap();
    }
    s.push_str("}\n");
    s
}

pub fn nba_dot(n: &Nba) -> String {
    let mut s = String::from("digraph nba {\n  rankdir=LR;\n");
    for q in 0..n.num_states() {
        let shape = if n.is_accepting(q) { "doublecircle" } else { "circle" };
        writeln!(s, "  {q} [shape={shape}, label={}];", quote(n.name(q))).unwrap();
    }
    start_marks(&mut s, n.initial().iter().copied());
    for &(p, a, q) in n.transitions() {
        writeln!(s, "  {p} -> {q} [label={}];", quote(n.alphabet().name(a))).unwrap();
    }
    s.push_str("}\n");
    s
}

/// Vertices are labelled `(kripke, rm, nba, counter)` by state name.
pub fn product_dot(k: &KripkeStructure, t: &RepairMachine, b: &Nba, p: &ProductGraph) -> String {
    let fin = p.final_vertices(b);
    let mut s = String::from("digraph product {\n  rankdir=LR;\n");
    for (i, v) in p.vertices.iter().enumerate() {
        let label = format!("({}, {}, {}, {})", k.name(v.kripke), t.name(v.rm), b.name(v.nba), v.counter);
        let shape = if fin[i] { "doublecircle" } else { "circle" };
        writeln!(s, "  {i} [shape={shape}, label={}];", quote(&label)).unwrap();
    }
    start_marks(&mut s, p.graph.initial().iter().copied());
    for (e, ed) in p.graph.edges().iter().enumerate() {
        let style = if p.graph.is_accepting_edge(e) { ", style=bold" } else { "" };
        writeln!(s, "  {} -> {} [label=\"{}\"{style}];", ed.src, ed.dst, ed.weight).unwrap();
    }
    s.push_str("}\n");
    s
}

/// Min vertices are circles, Max vertices boxes. `highlight` marks edges
/// chosen by a strategy.
pub fn arena_dot(k: &KripkeStructure, t: &RepairMachine, b: &Nba, a: &GameArena, highlight: &[bool]) -> String {
    let mut s = String::from("digraph arena {\n  rankdir=LR;\n");
    for v in 0..a.len() {
        let (label, shape) = if a.is_min(v) {
            let l = a.min_labels[v];
            (format!("({}, {}, {}, {})", k.name(l.kripke), t.name(l.rm), b.name(l.nba), l.counter), "circle")
        } else {
            let l = a.max_labels[v - a.n_min()];
            (format!("({}, {}, {}, {})", k.name(l.kripke), t.name(l.rm), b.name(l.nba), l.counter), "box")
        };
        let peripheries = if a.is_accepting(v) { ", peripheries=2" } else { "" };
        writeln!(s, "  {v} [shape={shape}{peripheries}, label={}];", quote(&label)).unwrap();
    }
    start_marks(&mut s, a.initial().iter().copied());
    for (e, ed) in a.edges().iter().enumerate() {
        let style = if highlight.get(e).copied().unwrap_or(false) { ", color=red, penwidth=2" } else { "" };
        writeln!(s, "  {} -> {} [label=\"{}\"{style}];", ed.src, ed.dst, ed.weight).unwrap();
    }
    s.push_str("}\n");
    s
}

/// The witness run as a lasso: one node per position, the last cycle node
/// pointing back to the first.
pub fn witness_dot(k: &KripkeStructure, t: &RepairMachine, a: &Nba, w: &omegarepair_core::ImpairWitness) -> String {
    let run: Vec<_> = w.run.prefix().iter().chain(w.run.cycle()).collect();
    let mut s = String::from("digraph witness {\n  rankdir=LR;\n");
    for (i, v) in run.iter().enumerate() {
        let label = format!("{}\n({}, {}, {}, {})", k.label_name(v.kripke), k.name(v.kripke), t.name(v.rm), a.name(v.nba), v.counter);
        writeln!(s, "  {i} [shape=box, label={}];", quote(&label)).unwrap();
    }
    for i in 1..run.len() {
        writeln!(s, "  {} -> {i};", i - 1).unwrap();
    }
    writeln!(s, "  {} -> {} [style=dashed];", run.len() - 1, w.run.prefix().len()).unwrap();
    s.push_str("}\n");
    s
}
