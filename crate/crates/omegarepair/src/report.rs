//! Text blocks for strategies and impairment witnesses.
//!
//! ```text
//! STRATEGY                 TRACE bot|tr
//! EPSILON 1/10             REWRITE bot|tr.sq
//! STEP_BOUND 4             COST 3/1
//! START 0                  RUN s_bot:q0:p0:1|s_tr:q0:p2:1
//! MODE 0
//! MAP 0 -> 5
//! EXIT AFTER_STEPS 4
//! NEXT 1
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use omegarepair_core::{
    Alphabet, ExitRule, FiniteMemoryStrategy, ImpairWitness, KripkeStructure, Lasso, Mode, Nba, ProductVertex,
    Rational, RepairMachine, Symbol,
};

use crate::format::ParseError;

pub fn strategy_text(s: &FiniteMemoryStrategy) -> String {
    let mut out = String::from("STRATEGY\n");
    if let Some(e) = &s.epsilon {
        writeln!(out, "EPSILON {e}").unwrap();
    }
    if let Some(k) = s.step_bound {
        writeln!(out, "STEP_BOUND {k}").unwrap();
    }
    for v in &s.starts {
        writeln!(out, "START {v}").unwrap();
    }
    for (i, m) in s.modes.iter().enumerate() {
        writeln!(out, "MODE {i}").unwrap();
        for (v, w) in &m.map {
            writeln!(out, "MAP {v} -> {w}").unwrap();
        }
        writeln!(out, "EXIT {}", m.exit).unwrap();
        writeln!(out, "NEXT {}", m.next).unwrap();
    }
    out
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, ParseError> {
    let err = |m: String| ParseError { line, column: 1, message: m };
    let t = tok.ok_or_else(|| err(format!("expected {what}")))?;
    t.parse().map_err(|_| err(format!("bad {what} `{t}`")))
}

/// Inverse of [`strategy_text`].
pub fn parse_strategy(text: &str) -> Result<FiniteMemoryStrategy, ParseError> {
    let mut s = FiniteMemoryStrategy::default();
    let mut header = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |m: String| ParseError { line, column: 1, message: m };
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut it = body.split_whitespace();
        let kw = it.next().unwrap();
        if !header {
            if kw != "STRATEGY" {
                return Err(err(format!("expected STRATEGY header, found `{kw}`")));
            }
            header = true;
            continue;
        }
        let mode = |s: &mut FiniteMemoryStrategy| -> Result<usize, ParseError> {
            s.modes.len().checked_sub(1).ok_or_else(|| err(format!("{kw} before any MODE")))
        };
        match kw {
            "EPSILON" => {
                let e: Rational = it.next().unwrap_or("").parse().map_err(|_| err("bad epsilon".into()))?;
                s.epsilon = Some(e);
            }
            "STEP_BOUND" => s.step_bound = Some(num(it.next(), line, "step bound")?),
            "START" => s.starts.push(num(it.next(), line, "start vertex")?),
            "MODE" => {
                let i: usize = num(it.next(), line, "mode index")?;
                if i != s.modes.len() {
                    return Err(err(format!("modes must be numbered in order, expected {}", s.modes.len())));
                }
                s.modes.push(Mode { map: BTreeMap::new(), exit: ExitRule::Forever, next: i });
            }
            "MAP" => {
                let m = mode(&mut s)?;
                let v = num(it.next(), line, "vertex")?;
                if it.next() != Some("->") {
                    return Err(err("expected `->`".into()));
                }
                let w = num(it.next(), line, "vertex")?;
                s.modes[m].map.insert(v, w);
            }
            "EXIT" => {
                let m = mode(&mut s)?;
                s.modes[m].exit = match it.next() {
                    Some("AFTER_STEPS") => ExitRule::AfterSteps(num(it.next(), line, "step count")?),
                    Some("AFTER_ANCHOR_HITS") => ExitRule::AfterAnchorHits {
                        vertex: num(it.next(), line, "anchor vertex")?,
                        hits: num(it.next(), line, "hit count")?,
                    },
                    Some("AFTER_ACCEPTING_VISIT") => ExitRule::AfterAcceptingVisit,
                    Some("FOREVER") => ExitRule::Forever,
                    other => return Err(err(format!("unknown exit rule `{}`", other.unwrap_or("")))),
                };
            }
            "NEXT" => {
                let m = mode(&mut s)?;
                s.modes[m].next = num(it.next(), line, "mode index")?;
            }
            _ => return Err(err(format!("unknown directive `{kw}`"))),
        }
        if let Some(extra) = it.next() {
            return Err(err(format!("unexpected `{extra}`")));
        }
    }
    if !header {
        return Err(ParseError { line: 1, column: 1, message: "empty strategy file".into() });
    }
    Ok(s)
}

/// `prefix|cycle`, each part rendered by `f`.
pub fn lasso_text<T>(l: &Lasso<T>, f: impl Fn(&[T]) -> String) -> String {
    format!("{}|{}", f(l.prefix()), f(l.cycle()))
}

pub fn word_lasso_text(al: &Alphabet, l: &Lasso<Symbol>) -> String {
    lasso_text(l, |w| al.render_word(w))
}

pub fn run_text(k: &KripkeStructure, t: &RepairMachine, a: &Nba, run: &Lasso<ProductVertex>) -> String {
    lasso_text(run, |vs| {
        if vs.is_empty() {
            return "-".into();
        }
        let parts: Vec<String> = vs
            .iter()
            .map(|v| format!("{}:{}:{}:{}", k.name(v.kripke), t.name(v.rm), a.name(v.nba), v.counter))
            .collect();
        parts.join(" ")
    })
}

pub fn witness_text(k: &KripkeStructure, t: &RepairMachine, a: &Nba, w: &ImpairWitness) -> String {
    format!(
        "TRACE {}\nREWRITE {}\nCOST {}\nRUN {}\n",
        word_lasso_text(k.alphabet(), &w.trace),
        word_lasso_text(t.output_alphabet(), &w.rewrite),
        w.cost,
        run_text(k, t, a, &w.run)
    )
}

/// Costs `p1,p2|c1,c2` as a lasso. The prefix may be empty, the cycle not.
pub fn parse_costs(text: &str) -> Result<Lasso<u64>, String> {
    let (p, c) = text.split_once('|').ok_or_else(|| format!("costs `{text}` need a `|` between prefix and cycle"))?;
    let list = |s: &str| -> Result<Vec<u64>, String> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Vec::new());
        }
        s.split(',').map(|x| x.trim().parse::<u64>().map_err(|_| format!("bad cost `{}`", x.trim()))).collect()
    };
    Lasso::new(list(p)?, list(c)?).map_err(|e| e.to_string())
}
