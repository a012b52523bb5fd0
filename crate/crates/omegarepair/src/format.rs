//! Line-oriented text formats for Kripke structures, NBAs and repair
//! machines.
//!
//! ```text
//! KRIPKE                          NBA                       RM DSUM 1/2
//! STATE s0 LABEL a INIT           ALPHABET x y              IN a b
//! EDGE s0 s0                      STATE p INIT ACC          OUT x y
//!                                 EDGE p x p                STATE q INIT ACC
//!                                                           EDGE q a q x.y 3
//! ```
//!
//! `#` starts a comment. States may be used before they are declared.
//! Serialization lists states in declaration order and edges sorted, so
//! equal models print to equal bytes.

use std::collections::HashMap;
use std::fmt::Write as _;

use omegarepair_core::{Aggregator, Alphabet, KripkeStructure, Nba, Rational, RepairMachine, RmTransition, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelFile {
    Kripke(KripkeStructure),
    Nba(Nba),
    Rm(RepairMachine),
}

impl ModelFile {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelFile::Kripke(_) => "KRIPKE",
            ModelFile::Nba(_) => "NBA",
            ModelFile::Rm(_) => "RM",
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column, message: message.into() }
    }
}

/// Non-empty lines, comments stripped, split into tokens with 1-based
/// positions.
fn tokenize(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut toks = Vec::new();
        let mut start = None;
        for (j, c) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(j),
                (true, Some(s)) => {
                    toks.push(Token { text: &body[s..j], line: i + 1, column: body[..s].chars().count() + 1 });
                    start = None;
                }
                _ => {}
            }
        }
        if !toks.is_empty() {
            out.push(toks);
        }
    }
    out
}

/// Position right after the last token of a line.
fn end_of(line: &[Token<'_>]) -> Token<'static> {
    let last = line.last().expect("lines are non-empty");
    Token { text: "", line: last.line, column: last.column + last.text.chars().count() }
}

fn arg<'a>(line: &[Token<'a>], i: usize, what: &str) -> Result<Token<'a>, ParseError> {
    line.get(i).copied().ok_or_else(|| end_of(line).error(format!("expected {what}")))
}

fn no_more(line: &[Token<'_>], from: usize) -> Result<(), ParseError> {
    match line.get(from) {
        Some(t) => Err(t.error(format!("unexpected `{}`", t.text))),
        None => Ok(()),
    }
}

/// `INIT` / `ACC` flags after position `from`.
fn flags(line: &[Token<'_>], from: usize, allowed: &[&str]) -> Result<Vec<&'static str>, ParseError> {
    let mut seen: Vec<&'static str> = Vec::new();
    for t in &line[from.min(line.len())..] {
        let Some(&f) = allowed.iter().find(|&&f| f == t.text) else {
            return Err(t.error(format!("unknown flag `{}`", t.text)));
        };
        let f: &'static str = if f == "INIT" { "INIT" } else { "ACC" };
        if seen.contains(&f) {
            return Err(t.error(format!("repeated flag `{f}`")));
        }
        seen.push(f);
    }
    Ok(seen)
}

struct States {
    index: HashMap<String, usize>,
}

impl States {
    /// Collects `STATE` declarations in order, rejecting duplicates.
    fn collect(lines: &[Vec<Token<'_>>]) -> Result<Self, ParseError> {
        let mut index = HashMap::new();
        for line in lines.iter().filter(|l| l[0].text == "STATE") {
            let id = arg(line, 1, "state id")?;
            if index.insert(id.text.to_string(), index.len()).is_some() {
                return Err(id.error(format!("duplicate state `{}`", id.text)));
            }
        }
        Ok(States { index })
    }

    fn get(&self, t: Token<'_>) -> Result<usize, ParseError> {
        self.index.get(t.text).copied().ok_or_else(|| t.error(format!("unknown state `{}`", t.text)))
    }
}

fn symbol(al: &Alphabet, t: Token<'_>, what: &str) -> Result<Symbol, ParseError> {
    al.lookup(t.text).ok_or_else(|| t.error(format!("unknown {what} symbol `{}`", t.text)))
}

fn symbols_line(line: &[Token<'_>], what: &str) -> Result<Alphabet, ParseError> {
    let mut al = Alphabet::new();
    for t in &line[1..] {
        if al.lookup(t.text).is_some() {
            return Err(t.error(format!("duplicate {what} symbol `{}`", t.text)));
        }
        if t.text == "-" || t.text.contains('.') {
            return Err(t.error(format!("symbol `{}` may not be `-` or contain `.`", t.text)));
        }
        al.intern(t.text);
    }
    Ok(al)
}

fn unknown_directive(t: Token<'_>) -> ParseError {
    t.error(format!("unknown directive `{}`", t.text))
}

pub fn parse_model(text: &str) -> Result<ModelFile, ParseError> {
    let lines = tokenize(text);
    let Some(first) = lines.first() else {
        return Err(ParseError { line: 1, column: 1, message: "empty file: expected KRIPKE, NBA or RM header".into() });
    };
    match first[0].text {
        "KRIPKE" => {
            no_more(first, 1)?;
            parse_kripke_body(&lines[1..]).map(ModelFile::Kripke)
        }
        "NBA" => {
            no_more(first, 1)?;
            parse_nba_body(&lines[1..]).map(ModelFile::Nba)
        }
        "RM" => parse_rm_body(first, &lines[1..]).map(ModelFile::Rm),
        _ => Err(first[0].error(format!("expected KRIPKE, NBA or RM header, found `{}`", first[0].text))),
    }
}

fn expect_kind(text: &str, kind: &str) -> Result<ModelFile, ParseError> {
    let m = parse_model(text)?;
    if m.kind() != kind {
        return Err(ParseError { line: 1, column: 1, message: format!("expected a {kind} file, found {}", m.kind()) });
    }
    Ok(m)
}

pub fn parse_kripke(text: &str) -> Result<KripkeStructure, ParseError> {
    match expect_kind(text, "KRIPKE")? {
        ModelFile::Kripke(k) => Ok(k),
        _ => unreachable!(),
    }
}

pub fn parse_nba(text: &str) -> Result<Nba, ParseError> {
    match expect_kind(text, "NBA")? {
        ModelFile::Nba(n) => Ok(n),
        _ => unreachable!(),
    }
}

pub fn parse_rm(text: &str) -> Result<RepairMachine, ParseError> {
    match expect_kind(text, "RM")? {
        ModelFile::Rm(t) => Ok(t),
        _ => unreachable!(),
    }
}

fn parse_kripke_body(lines: &[Vec<Token<'_>>]) -> Result<KripkeStructure, ParseError> {
    let states = States::collect(lines)?;
    let mut k = KripkeStructure::new();
    for line in lines {
        match line[0].text {
            "STATE" => {
                let id = arg(line, 1, "state id")?;
                let kw = arg(line, 2, "LABEL")?;
                if kw.text != "LABEL" {
                    return Err(kw.error(format!("expected LABEL, found `{}`", kw.text)));
                }
                let label = arg(line, 3, "label symbol")?;
                let init = flags(line, 4, &["INIT"])?.contains(&"INIT");
                k.add_state(id.text, label.text, init);
            }
            "EDGE" => {}
            _ => return Err(unknown_directive(line[0])),
        }
    }
    for line in lines.iter().filter(|l| l[0].text == "EDGE") {
        let from = states.get(arg(line, 1, "source state")?)?;
        let to = states.get(arg(line, 2, "target state")?)?;
        no_more(line, 3)?;
        k.add_edge(from, to);
    }
    Ok(k)
}

fn parse_nba_body(lines: &[Vec<Token<'_>>]) -> Result<Nba, ParseError> {
    let states = States::collect(lines)?;
    let mut alpha: Option<Alphabet> = None;
    for line in lines.iter().filter(|l| l[0].text == "ALPHABET") {
        if alpha.is_some() {
            return Err(line[0].error("second ALPHABET line"));
        }
        alpha = Some(symbols_line(line, "alphabet")?);
    }
    let Some(alpha) = alpha else {
        return Err(ParseError { line: 1, column: 1, message: "missing ALPHABET line".into() });
    };
    let mut n = Nba::new(alpha);
    for line in lines {
        match line[0].text {
            "STATE" => {
                let id = arg(line, 1, "state id")?;
                let f = flags(line, 2, &["INIT", "ACC"])?;
                n.add_state(id.text, f.contains(&"INIT"), f.contains(&"ACC"));
            }
            "ALPHABET" | "EDGE" => {}
            _ => return Err(unknown_directive(line[0])),
        }
    }
    for line in lines.iter().filter(|l| l[0].text == "EDGE") {
        let from = states.get(arg(line, 1, "source state")?)?;
        let sym = symbol(n.alphabet(), arg(line, 2, "symbol")?, "alphabet")?;
        let to = states.get(arg(line, 3, "target state")?)?;
        no_more(line, 4)?;
        n.add_transition(from, sym, to);
    }
    Ok(n)
}

fn parse_aggregator(header: &[Token<'_>]) -> Result<Aggregator, ParseError> {
    let kw = arg(header, 1, "aggregator (DSUM p/q, MEAN, SUP or LIMSUP)")?;
    let agg = match kw.text {
        "DSUM" => {
            let t = arg(header, 2, "discount factor p/q")?;
            let l: Rational = t.text.parse().map_err(|_| t.error(format!("bad rational `{}`", t.text)))?;
            let agg = Aggregator::DSum(l);
            agg.check().map_err(|_| t.error("discount factor must lie strictly between 0 and 1"))?;
            no_more(header, 3)?;
            return Ok(agg);
        }
        "MEAN" => Aggregator::Mean,
        "SUP" => Aggregator::Sup,
        "LIMSUP" => Aggregator::LimSup,
        other => return Err(kw.error(format!("unknown aggregator `{other}`"))),
    };
    no_more(header, 2)?;
    Ok(agg)
}

fn parse_rm_body(header: &[Token<'_>], lines: &[Vec<Token<'_>>]) -> Result<RepairMachine, ParseError> {
    let agg = parse_aggregator(header)?;
    let states = States::collect(lines)?;
    let one = |kw: &str| -> Result<Alphabet, ParseError> {
        let mut found = None;
        for line in lines.iter().filter(|l| l[0].text == kw) {
            if found.is_some() {
                return Err(line[0].error(format!("second {kw} line")));
            }
            found = Some(symbols_line(line, if kw == "IN" { "input" } else { "output" })?);
        }
        found.ok_or_else(|| ParseError { line: header[0].line, column: 1, message: format!("missing {kw} line") })
    };
    let (input, output) = (one("IN")?, one("OUT")?);
    let mut t = RepairMachine::new(input, output, agg);
    for line in lines {
        match line[0].text {
            "STATE" => {
                let id = arg(line, 1, "state id")?;
                let f = flags(line, 2, &["INIT", "ACC"])?;
                t.add_state(id.text, f.contains(&"INIT"), f.contains(&"ACC"));
            }
            "IN" | "OUT" | "EDGE" => {}
            _ => return Err(unknown_directive(line[0])),
        }
    }
    for line in lines.iter().filter(|l| l[0].text == "EDGE") {
        let from = states.get(arg(line, 1, "source state")?)?;
        let input = symbol(t.input_alphabet(), arg(line, 2, "input symbol")?, "input")?;
        let to = states.get(arg(line, 3, "target state")?)?;
        let word_tok = arg(line, 4, "output word or `-`")?;
        let output = if word_tok.text == "-" {
            Vec::new()
        } else {
            let mut col = word_tok.column;
            let mut w = Vec::new();
            for part in word_tok.text.split('.') {
                let t_part = Token { text: part, line: word_tok.line, column: col };
                w.push(symbol(t.output_alphabet(), t_part, "output")?);
                col += part.chars().count() + 1;
            }
            w
        };
        let cost_tok = arg(line, 5, "cost")?;
        let cost: i64 = cost_tok.text.parse().map_err(|_| cost_tok.error(format!("bad cost `{}`", cost_tok.text)))?;
        if cost < 0 {
            return Err(cost_tok.error("cost must be non-negative"));
        }
        no_more(line, 6)?;
        t.add_transition(RmTransition { from, input, to, output, cost });
    }
    Ok(t)
}

fn flag_suffix(init: bool, acc: bool) -> &'static str {
    match (init, acc) {
        (true, true) => " INIT ACC",
        (true, false) => " INIT",
        (false, true) => " ACC",
        (false, false) => "",
    }
}

pub fn serialize_model(m: &ModelFile) -> String {
    match m {
        ModelFile::Kripke(k) => serialize_kripke(k),
        ModelFile::Nba(n) => serialize_nba(n),
        ModelFile::Rm(t) => serialize_rm(t),
    }
}

pub fn serialize_kripke(k: &KripkeStructure) -> String {
    let mut s = String::from("KRIPKE\n");
    for q in 0..k.num_states() {
        let init = if k.initial().contains(&q) { " INIT" } else { "" };
        writeln!(s, "STATE {} LABEL {}{init}", k.name(q), k.label_name(q)).unwrap();
    }
    for &(a, b) in k.edges() {
        writeln!(s, "EDGE {} {}", k.name(a), k.name(b)).unwrap();
    }
    s
}

pub fn serialize_nba(n: &Nba) -> String {
    let mut s = String::from("NBA\n");
    writeln!(s, "ALPHABET {}", n.alphabet().names().join(" ")).unwrap();
    for q in 0..n.num_states() {
        writeln!(s, "STATE {}{}", n.name(q), flag_suffix(n.initial().contains(&q), n.is_accepting(q))).unwrap();
    }
    for &(p, a, q) in n.transitions() {
        writeln!(s, "EDGE {} {} {}", n.name(p), n.alphabet().name(a), n.name(q)).unwrap();
    }
    s
}

pub fn serialize_rm(t: &RepairMachine) -> String {
    let mut s = format!("RM {}\n", t.aggregator());
    writeln!(s, "IN {}", t.input_alphabet().names().join(" ")).unwrap();
    writeln!(s, "OUT {}", t.output_alphabet().names().join(" ")).unwrap();
    for q in 0..t.num_states() {
        writeln!(s, "STATE {}{}", t.name(q), flag_suffix(t.initial().contains(&q), t.is_accepting(q))).unwrap();
    }
    for tr in t.transitions() {
        writeln!(
            s,
            "EDGE {} {} {} {} {}",
            t.name(tr.from),
            t.input_alphabet().name(tr.input),
            t.name(tr.to),
            t.output_alphabet().render_word(&tr.output),
            tr.cost
        )
        .unwrap();
    }
    s
}
