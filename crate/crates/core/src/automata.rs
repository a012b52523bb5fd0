//! Kripke structures, Büchi automata and repair machines.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::aggregator::Aggregator;
use crate::error::{Error, Result};

/// Index of a letter inside an [`Alphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Ordered set of named letters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new() -> Self {
        Alphabet::default()
    }

    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut a = Alphabet::new();
        for n in names {
            a.intern(n);
        }
        a
    }

    /// Returns the symbol for `name`, adding it if absent.
    pub fn intern(&mut self, name: impl Into<String>) -> Symbol {
        let name = name.into();
        if let Some(s) = self.lookup(&name) {
            return s;
        }
        self.names.push(name);
        Symbol((self.names.len() - 1) as u32)
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.names.iter().position(|n| n == name).map(|i| Symbol(i as u32))
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s.index()]
    }

    pub fn contains(&self, s: Symbol) -> bool {
        s.index() < self.names.len()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.names.len()).map(|i| Symbol(i as u32))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Maps every symbol of `self` to the symbol with the same name in
    /// `target`, or `None` where the name is missing.
    pub fn translation(&self, target: &Alphabet) -> Vec<Option<Symbol>> {
        self.names.iter().map(|n| target.lookup(n)).collect()
    }

    /// Renders a word as dot-separated names (`-` for the empty word).
    pub fn render_word(&self, word: &[Symbol]) -> String {
        if word.is_empty() {
            return "-".to_string();
        }
        let parts: Vec<&str> = word.iter().map(|&s| self.name(s)).collect();
        parts.join(".")
    }
}

fn position_of(names: &[String], name: &str) -> Option<usize> {
    names.iter().position(|n| n == name)
}

/// `K = (S, ↪, S₀, AP, ℒ)` with one letter per state.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KripkeStructure {
    names: Vec<String>,
    alphabet: Alphabet,
    labels: Vec<Symbol>,
    initial: BTreeSet<usize>,
    edges: BTreeSet<(usize, usize)>,
}

impl KripkeStructure {
    pub fn new() -> Self {
        KripkeStructure::default()
    }

    pub fn add_state(&mut self, name: impl Into<String>, label: &str, initial: bool) -> usize {
        let sym = self.alphabet.intern(label);
        self.names.push(name.into());
        self.labels.push(sym);
        let id = self.names.len() - 1;
        if initial {
            self.initial.insert(id);
        }
        id
    }

    /// Marks a (possibly out of range) id as initial; `validate` reports
    /// dangling ids.
    pub fn set_initial(&mut self, s: usize) {
        self.initial.insert(s);
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        self.edges.insert((from, to));
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        position_of(&self.names, name)
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn label(&self, s: usize) -> Symbol {
        self.labels[s]
    }

    pub fn label_name(&self, s: usize) -> &str {
        self.alphabet.name(self.labels[s])
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn successors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((s, 0)..=(s, usize::MAX)).map(|&(_, t)| t)
    }
}

/// `A = (Q, Σ, Q₀, Q_f, δ)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Nba {
    names: Vec<String>,
    alphabet: Alphabet,
    initial: BTreeSet<usize>,
    accepting: BTreeSet<usize>,
    delta: BTreeSet<(usize, Symbol, usize)>,
}

impl Nba {
    pub fn new(alphabet: Alphabet) -> Self {
        Nba { alphabet, ..Nba::default() }
    }

    pub fn add_state(&mut self, name: impl Into<String>, initial: bool, accepting: bool) -> usize {
        self.names.push(name.into());
        let id = self.names.len() - 1;
        if initial {
            self.initial.insert(id);
        }
        if accepting {
            self.accepting.insert(id);
        }
        id
    }

    pub fn set_initial(&mut self, q: usize) {
        self.initial.insert(q);
    }

    pub fn set_accepting(&mut self, q: usize) {
        self.accepting.insert(q);
    }

    pub fn add_transition(&mut self, from: usize, sym: Symbol, to: usize) {
        self.delta.insert((from, sym, to));
    }

    /// Adds a transition by letter name. Panics on an unknown letter.
    pub fn add_named(&mut self, from: usize, letter: &str, to: usize) {
        let sym = self.alphabet.lookup(letter).expect("unknown letter");
        self.add_transition(from, sym, to);
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        position_of(&self.names, name)
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting.contains(&q)
    }

    pub fn transitions(&self) -> &BTreeSet<(usize, Symbol, usize)> {
        &self.delta
    }

    pub fn successors(&self, q: usize, sym: Symbol) -> impl Iterator<Item = usize> + '_ {
        self.delta.range((q, sym, 0)..=(q, sym, usize::MAX)).map(|&(_, _, t)| t)
    }

    pub fn out_transitions(&self, q: usize) -> impl Iterator<Item = (Symbol, usize)> + '_ {
        self.delta
            .range((q, Symbol(0), 0)..=(q, Symbol(u32::MAX), usize::MAX))
            .map(|&(_, a, t)| (a, t))
    }

    /// True when every state has at most one successor per letter and there
    /// is at most one initial state.
    pub fn is_deterministic(&self) -> bool {
        if self.initial.len() > 1 {
            return false;
        }
        let mut seen = BTreeSet::new();
        self.delta.iter().all(|&(q, a, _)| seen.insert((q, a)))
    }

    /// Universal automaton over `alphabet`: one accepting state looping on
    /// every letter.
    pub fn universal(alphabet: Alphabet) -> Self {
        let mut n = Nba::new(alphabet);
        let q = n.add_state("all", true, true);
        let letters: Vec<Symbol> = n.alphabet.symbols().collect();
        for a in letters {
            n.add_transition(q, a, q);
        }
        n
    }

    /// Automaton with one non-accepting initial state and no transitions.
    pub fn empty(alphabet: Alphabet) -> Self {
        let mut n = Nba::new(alphabet);
        n.add_state("none", true, false);
        n
    }

    /// Copy restricted to the states reachable from the initial set.
    pub fn reachable_part(&self) -> Nba {
        let mut seen: BTreeSet<usize> = self.initial.clone();
        let mut stack: Vec<usize> = seen.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for (_, t) in self.out_transitions(q) {
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        let map: BTreeMap<usize, usize> = seen.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let mut out = Nba::new(self.alphabet.clone());
        for &q in &seen {
            out.add_state(self.names[q].clone(), self.initial.contains(&q), self.is_accepting(q));
        }
        for &(q, a, t) in &self.delta {
            if let (Some(&nq), Some(&nt)) = (map.get(&q), map.get(&t)) {
                out.add_transition(nq, a, nt);
            }
        }
        out
    }
}

/// One element of `δ_T`: `(q, σ, q′, w, c)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RmTransition {
    pub from: usize,
    pub input: Symbol,
    pub to: usize,
    pub output: Vec<Symbol>,
    /// Signed so that malformed inputs can be represented and reported.
    pub cost: i64,
}

/// Weighted Büchi transducer with a cost aggregator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairMachine {
    names: Vec<String>,
    input: Alphabet,
    output: Alphabet,
    initial: BTreeSet<usize>,
    accepting: BTreeSet<usize>,
    delta: BTreeSet<RmTransition>,
    aggregator: Aggregator,
}

impl RepairMachine {
    pub fn new(input: Alphabet, output: Alphabet, aggregator: Aggregator) -> Self {
        RepairMachine {
            names: Vec::new(),
            input,
            output,
            initial: BTreeSet::new(),
            accepting: BTreeSet::new(),
            delta: BTreeSet::new(),
            aggregator,
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>, initial: bool, accepting: bool) -> usize {
        self.names.push(name.into());
        let id = self.names.len() - 1;
        if initial {
            self.initial.insert(id);
        }
        if accepting {
            self.accepting.insert(id);
        }
        id
    }

    pub fn set_initial(&mut self, q: usize) {
        self.initial.insert(q);
    }

    pub fn set_accepting(&mut self, q: usize) {
        self.accepting.insert(q);
    }

    pub fn add_transition(&mut self, t: RmTransition) {
        self.delta.insert(t);
    }

    /// Adds `from --input|output,cost--> to` by letter names; `output` is a
    /// slice of output letter names. Panics on unknown letters.
    pub fn add_named(&mut self, from: usize, input: &str, to: usize, output: &[&str], cost: i64) {
        let input = self.input.lookup(input).expect("unknown input letter");
        let output = output
            .iter()
            .map(|o| self.output.lookup(o).expect("unknown output letter"))
            .collect();
        self.add_transition(RmTransition { from, input, to, output, cost });
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        position_of(&self.names, name)
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting.contains(&q)
    }

    pub fn transitions(&self) -> &BTreeSet<RmTransition> {
        &self.delta
    }

    pub fn aggregator(&self) -> &Aggregator {
        &self.aggregator
    }

    pub fn with_aggregator(mut self, aggregator: Aggregator) -> Self {
        self.aggregator = aggregator;
        self
    }

    /// Transitions leaving `q` on input letter `sym`, in canonical order.
    pub fn moves(&self, q: usize, sym: Symbol) -> impl Iterator<Item = &RmTransition> + '_ {
        self.delta.iter().filter(move |t| t.from == q && t.input == sym)
    }

    pub fn max_cost(&self) -> u64 {
        self.delta.iter().map(|t| t.cost.max(0) as u64).max().unwrap_or(0)
    }

    /// The input projection: an NBA over the input alphabet with the same
    /// states and acceptance.
    pub fn domain_nba(&self) -> Nba {
        let mut n = Nba::new(self.input.clone());
        for q in 0..self.names.len() {
            n.add_state(self.names[q].clone(), self.initial.contains(&q), self.is_accepting(q));
        }
        for t in &self.delta {
            n.add_transition(t.from, t.input, t.to);
        }
        n
    }
}

/// NBA accepting exactly the traces of `k`: a fresh initial state followed by
/// a copy of `k` where every state is accepting and edges read the label of
/// their target.
pub fn kripke_to_nba(k: &KripkeStructure) -> Result<Nba> {
    let diag = validate_kripke(k);
    if !diag.is_ok() {
        return Err(Error::Malformed(diag.errors[0].to_string()));
    }
    let mut n = Nba::new(k.alphabet.clone());
    for s in 0..k.num_states() {
        n.add_state(k.names[s].clone(), false, true);
    }
    let init = n.add_state(fresh_name(&k.names, "init"), true, true);
    for &s0 in &k.initial {
        n.add_transition(init, k.labels[s0], s0);
    }
    for &(s, t) in &k.edges {
        n.add_transition(s, k.labels[t], t);
    }
    Ok(n)
}

pub(crate) fn fresh_name(taken: &[String], base: &str) -> String {
    let mut name = base.to_string();
    let mut i = 0;
    while taken.iter().any(|n| *n == name) {
        i += 1;
        name = alloc::format!("{base}{i}");
    }
    name
}

/// One validation finding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub code: &'static str,
    pub location: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.code, self.location, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub errors: Vec<Finding>,
    pub warnings: Vec<Finding>,
}

impl Diagnostics {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn has(&self, code: &str) -> bool {
        self.errors.iter().any(|f| f.code == code)
    }

    fn error(&mut self, code: &'static str, location: String, message: String) {
        self.errors.push(Finding { code, location, message });
    }

    fn warn(&mut self, code: &'static str, location: String, message: String) {
        self.warnings.push(Finding { code, location, message });
    }
}

/// Anything [`validate`] can check.
pub enum Model<'a> {
    Kripke(&'a KripkeStructure),
    Nba(&'a Nba),
    Rm(&'a RepairMachine),
}

pub fn validate(x: Model<'_>) -> Diagnostics {
    match x {
        Model::Kripke(k) => validate_kripke(k),
        Model::Nba(n) => validate_nba(n),
        Model::Rm(t) => validate_rm(t),
    }
}

fn check_ids(d: &mut Diagnostics, what: &str, ids: &BTreeSet<usize>, n: usize, code: &'static str) {
    for &s in ids {
        if s >= n {
            d.error(code, alloc::format!("{what} {s}"), "refers to a missing state".to_string());
        }
    }
}

fn check_duplicates(d: &mut Diagnostics, names: &[String]) {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            d.error("DUPLICATE_STATE", n.clone(), "state declared twice".to_string());
        }
    }
}

pub fn validate_kripke(k: &KripkeStructure) -> Diagnostics {
    let mut d = Diagnostics::default();
    let n = k.num_states();
    check_duplicates(&mut d, &k.names);
    check_ids(&mut d, "initial", &k.initial, n, "BAD_INITIAL");
    if k.initial.is_empty() {
        d.error("NO_INITIAL", "kripke".to_string(), "no initial state".to_string());
    }
    for &(s, t) in &k.edges {
        if s >= n || t >= n {
            d.error("BAD_EDGE", alloc::format!("edge {s}->{t}"), "endpoint is not a state".to_string());
        }
    }
    for s in 0..n {
        if !k.alphabet.contains(k.labels[s]) {
            d.error("BAD_LABEL", k.names[s].clone(), "label outside the alphabet".to_string());
        }
        if k.successors(s).next().is_none() {
            d.error("DEAD_END", k.names[s].clone(), "state has no successor".to_string());
        }
    }
    d
}

pub fn validate_nba(a: &Nba) -> Diagnostics {
    let mut d = Diagnostics::default();
    let n = a.num_states();
    check_duplicates(&mut d, &a.names);
    check_ids(&mut d, "initial", &a.initial, n, "BAD_INITIAL");
    check_ids(&mut d, "accepting", &a.accepting, n, "BAD_ACCEPTING");
    for &(q, s, t) in &a.delta {
        let loc = alloc::format!("transition {q}->{t}");
        if q >= n || t >= n {
            d.error("BAD_EDGE", loc.clone(), "endpoint is not a state".to_string());
        }
        if !a.alphabet.contains(s) {
            d.error("UNKNOWN_SYMBOL", loc, "letter outside the alphabet".to_string());
        }
    }
    if a.initial.is_empty() {
        d.warn("NO_INITIAL", "nba".to_string(), "language is empty".to_string());
    }
    d
}

pub fn validate_rm(t: &RepairMachine) -> Diagnostics {
    let mut d = Diagnostics::default();
    let n = t.num_states();
    check_duplicates(&mut d, &t.names);
    check_ids(&mut d, "initial", &t.initial, n, "BAD_INITIAL");
    check_ids(&mut d, "accepting", &t.accepting, n, "BAD_ACCEPTING");
    if let Err(e) = t.aggregator.check() {
        d.error("BAD_AGGREGATOR", "aggregator".to_string(), e.to_string());
    }
    for tr in &t.delta {
        let loc = alloc::format!("transition {}->{}", tr.from, tr.to);
        if tr.from >= n || tr.to >= n {
            d.error("BAD_EDGE", loc.clone(), "endpoint is not a state".to_string());
        }
        if !t.input.contains(tr.input) {
            d.error("UNKNOWN_SYMBOL", loc.clone(), "input letter outside the alphabet".to_string());
        }
        if tr.output.iter().any(|&o| !t.output.contains(o)) {
            d.error("UNKNOWN_SYMBOL", loc.clone(), "output letter outside the alphabet".to_string());
        }
        if tr.cost < 0 {
            d.error("NEGATIVE_COST", loc, alloc::format!("cost {} is negative", tr.cost));
        }
    }
    if t.accepting.is_empty() {
        d.warn("NO_ACCEPTING", "rm".to_string(), "domain is empty".to_string());
    }
    d
}
