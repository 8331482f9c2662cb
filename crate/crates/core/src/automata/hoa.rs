//! Reading and writing the Hanoi Omega-Automata format (version 1) with
//! explicit transition labels and transition-based acceptance.
//!
//! LDBAs are written with `acc-name: Buchi` plus two custom headers:
//! `ldba-qd:` lists the states of `Q_d`, and one `ldba-label:` line per
//! labeled state records its formula. DPAs are written with
//! `acc-name: parity min even n`, where color `c` is acceptance set `c`.
//! Alphabets of abstract symbols are written with one proposition per
//! symbol and the custom header `alphabet: one-hot`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::alphabet::Alphabet;
use super::dpa::{Color, Dpa};
use super::ldba::Ldba;
use crate::ltl::parse_ltl;
use crate::word::Letter;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HoaError {
    #[error("malformed HOA at line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("unsupported acceptance condition `{0}`")]
    UnsupportedAcceptance(String),
    #[error("the automaton still has jumps; eliminate them before writing")]
    HasJumps,
    #[error("parity automaton is not deterministic and complete: {0}")]
    NotDeterministic(String),
}

/// An automaton read from HOA.
#[derive(Clone, Debug)]
pub enum Automaton {
    Ldba(Ldba),
    Dpa(Dpa),
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn write_prelude(out: &mut String, name: Option<&str>, states: usize, start: usize, alphabet: &Alphabet) {
    out.push_str("HOA: v1\n");
    if let Some(name) = name {
        let _ = writeln!(out, "name: {}", quote(name));
    }
    let _ = writeln!(out, "States: {states}");
    let _ = writeln!(out, "Start: {start}");
    let aps = alphabet.names();
    let _ = write!(out, "AP: {}", aps.len());
    for ap in aps {
        let _ = write!(out, " {}", quote(ap));
    }
    out.push('\n');
    if matches!(alphabet, Alphabet::Symbols(_)) {
        out.push_str("alphabet: one-hot\n");
    }
}

fn minterm(alphabet: &Alphabet, l: Letter) -> String {
    let n = alphabet.names().len();
    if n == 0 {
        return "t".to_string();
    }
    let v = alphabet.valuation(l);
    (0..n)
        .map(|i| {
            if v >> i & 1 == 1 {
                i.to_string()
            } else {
                format!("!{i}")
            }
        })
        .collect::<Vec<_>>()
        .join("&")
}

fn label_of(alphabet: &Alphabet, letters: &[Letter]) -> String {
    if letters.len() == alphabet.size() && matches!(alphabet, Alphabet::Propositional(_)) {
        return "t".to_string();
    }
    let terms: Vec<String> = letters.iter().map(|&l| minterm(alphabet, l)).collect();
    if terms.len() == 1 {
        terms[0].clone()
    } else {
        terms.iter().map(|t| format!("({t})")).collect::<Vec<_>>().join(" | ")
    }
}

/// Writes a jump-free LDBA.
pub fn emit_ldba(a: &Ldba, name: Option<&str>) -> Result<String, HoaError> {
    if a.has_jumps() {
        return Err(HoaError::HasJumps);
    }
    let mut out = String::new();
    write_prelude(&mut out, name, a.num_states(), a.initial(), a.alphabet());
    out.push_str("acc-name: Buchi\nAcceptance: 1 Inf(0)\n");
    out.push_str("properties: trans-labels explicit-labels trans-acc\n");
    let qd: Vec<String> = a.qd_states().map(|q| q.to_string()).collect();
    let _ = writeln!(out, "ldba-qd: {}", qd.join(" "));
    for q in a.states() {
        if let Some(label) = a.label(q) {
            let _ = writeln!(out, "ldba-label: {q} {}", quote(&label.to_string()));
        }
    }
    out.push_str("--BODY--\n");
    for q in a.states() {
        let _ = writeln!(out, "State: {q} {}", quote(a.name(q)));
        let mut groups: BTreeMap<(usize, bool), Vec<Letter>> = BTreeMap::new();
        for l in a.alphabet().letters() {
            for e in a.edges(q, l) {
                groups.entry((e.target, e.accepting)).or_default().push(l);
            }
        }
        for ((target, acc), letters) in groups {
            let mark = if acc { " {0}" } else { "" };
            let _ = writeln!(out, "[{}] {target}{mark}", label_of(a.alphabet(), &letters));
        }
    }
    out.push_str("--END--\n");
    Ok(out)
}

/// `Inf(0) | (Fin(1) & (Inf(2) | ...))` over `n` sets.
fn parity_min_even(n: u32) -> String {
    fn term(i: u32, n: u32) -> String {
        let atom = if i.is_multiple_of(2) {
            format!("Inf({i})")
        } else {
            format!("Fin({i})")
        };
        if i + 1 == n {
            atom
        } else if i.is_multiple_of(2) {
            format!("{atom} | ({})", term(i + 1, n))
        } else {
            format!("{atom} & ({})", term(i + 1, n))
        }
    }
    term(0, n)
}

pub fn emit_dpa(d: &Dpa, name: Option<&str>) -> String {
    let mut out = String::new();
    write_prelude(&mut out, name, d.num_states(), d.initial(), d.alphabet());
    let sets = d.max_color() + 1;
    let _ = writeln!(out, "acc-name: parity min even {sets}");
    let _ = writeln!(out, "Acceptance: {sets} {}", parity_min_even(sets));
    out.push_str("properties: trans-labels explicit-labels trans-acc colored deterministic complete\n");
    out.push_str("--BODY--\n");
    for q in 0..d.num_states() {
        let _ = writeln!(out, "State: {q} {}", quote(d.name(q)));
        let mut groups: BTreeMap<(usize, Color), Vec<Letter>> = BTreeMap::new();
        for l in d.alphabet().letters() {
            let (t, c) = d.step(q, l);
            groups.entry((t, c)).or_default().push(l);
        }
        for ((target, color), letters) in groups {
            let _ = writeln!(out, "[{}] {target} {{{color}}}", label_of(d.alphabet(), &letters));
        }
    }
    out.push_str("--END--\n");
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Header(String),
    Ident(String),
    Int(u64),
    Str(String),
    Punct(char),
    Body,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, HoaError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let err = |line, message: String| HoaError::Malformed { line, message };
    while i < bytes.len() {
        let c = bytes[i];
        let rest = &bytes[i..];
        if c == b'\n' {
            line += 1;
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if rest.starts_with(b"/*") {
            i += 2;
            while i < bytes.len() && !bytes[i..].starts_with(b"*/") {
                line += usize::from(bytes[i] == b'\n');
                i += 1;
            }
            i += 2;
        } else if c == b'"' {
            let mut s = Vec::new();
            i += 1;
            while i < bytes.len() && bytes[i] != b'"' {
                if bytes[i] == b'\\' && i + 1 < bytes.len() {
                    i += 1;
                }
                line += usize::from(bytes[i] == b'\n');
                s.push(bytes[i]);
                i += 1;
            }
            if i >= bytes.len() {
                return Err(err(line, "unterminated string".into()));
            }
            i += 1;
            let s = String::from_utf8(s).map_err(|_| err(line, "invalid UTF-8".into()))?;
            toks.push((line, Tok::Str(s)));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i]
                .parse()
                .map_err(|_| err(line, "integer too large".into()))?;
            toks.push((line, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() || c == b'_' || c == b'@' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || b"_-@".contains(&bytes[i])) {
                i += 1;
            }
            let s = text[start..i].to_string();
            if bytes.get(i) == Some(&b':') {
                i += 1;
                toks.push((line, Tok::Header(s)));
            } else {
                toks.push((line, Tok::Ident(s)));
            }
        } else if rest.starts_with(b"--BODY--") {
            i += 8;
            toks.push((line, Tok::Body));
        } else if rest.starts_with(b"--END--") {
            i += 7;
            toks.push((line, Tok::End));
        } else if b"[]{}()!&|".contains(&c) {
            i += 1;
            toks.push((line, Tok::Punct(c as char)));
        } else {
            let ch = text[i..].chars().next().unwrap_or('?');
            return Err(err(line, format!("unexpected character `{ch}`")));
        }
    }
    Ok(toks)
}

struct Cursor {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn line(&self) -> usize {
        self.toks.get(self.pos).or(self.toks.last()).map_or(1, |(l, _)| *l)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn err(&self, message: impl Into<String>) -> HoaError {
        HoaError::Malformed {
            line: self.line(),
            message: message.into(),
        }
    }

    fn int(&mut self) -> Result<u64, HoaError> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(n),
            _ => {
                self.pos -= 1;
                Err(self.err("expected an integer"))
            }
        }
    }

    fn expect(&mut self, c: char) -> Result<(), HoaError> {
        if self.next() == Some(Tok::Punct(c)) {
            Ok(())
        } else {
            self.pos -= 1;
            Err(self.err(format!("expected `{c}`")))
        }
    }

    /// Values of a header item: everything up to the next header or body
    /// marker.
    fn values(&mut self) -> Vec<Tok> {
        let mut out = Vec::new();
        while let Some(t) = self.peek() {
            if matches!(t, Tok::Header(_) | Tok::Body) {
                break;
            }
            out.push(self.next().unwrap());
        }
        out
    }
}

#[derive(Clone, Debug)]
enum LabelExpr {
    Const(bool),
    Ap(u32),
    Not(Box<LabelExpr>),
    And(Box<LabelExpr>, Box<LabelExpr>),
    Or(Box<LabelExpr>, Box<LabelExpr>),
}

impl LabelExpr {
    fn eval(&self, v: u32) -> bool {
        match self {
            LabelExpr::Const(b) => *b,
            LabelExpr::Ap(i) => v >> i & 1 == 1,
            LabelExpr::Not(e) => !e.eval(v),
            LabelExpr::And(a, b) => a.eval(v) && b.eval(v),
            LabelExpr::Or(a, b) => a.eval(v) || b.eval(v),
        }
    }
}

fn label_or(c: &mut Cursor, aps: usize) -> Result<LabelExpr, HoaError> {
    let mut e = label_and(c, aps)?;
    while c.peek() == Some(&Tok::Punct('|')) {
        c.next();
        e = LabelExpr::Or(Box::new(e), Box::new(label_and(c, aps)?));
    }
    Ok(e)
}

fn label_and(c: &mut Cursor, aps: usize) -> Result<LabelExpr, HoaError> {
    let mut e = label_atom(c, aps)?;
    while c.peek() == Some(&Tok::Punct('&')) {
        c.next();
        e = LabelExpr::And(Box::new(e), Box::new(label_atom(c, aps)?));
    }
    Ok(e)
}

fn label_atom(c: &mut Cursor, aps: usize) -> Result<LabelExpr, HoaError> {
    match c.next() {
        Some(Tok::Punct('!')) => Ok(LabelExpr::Not(Box::new(label_atom(c, aps)?))),
        Some(Tok::Punct('(')) => {
            let e = label_or(c, aps)?;
            c.expect(')')?;
            Ok(e)
        }
        Some(Tok::Ident(s)) if s == "t" => Ok(LabelExpr::Const(true)),
        Some(Tok::Ident(s)) if s == "f" => Ok(LabelExpr::Const(false)),
        Some(Tok::Int(n)) if (n as usize) < aps => Ok(LabelExpr::Ap(n as u32)),
        Some(Tok::Int(n)) => Err(c.err(format!("proposition {n} is not declared"))),
        _ => {
            c.pos -= 1;
            Err(c.err("bad label expression"))
        }
    }
}

enum Acceptance {
    Buchi,
    Parity(u32),
}

struct RawEdge {
    from: usize,
    letters: Vec<Letter>,
    to: usize,
    sets: Vec<u32>,
}

/// Reads a Büchi automaton (as an LDBA) or a "parity min even" automaton.
pub fn parse_hoa(text: &str) -> Result<Automaton, HoaError> {
    let mut c = Cursor {
        toks: tokenize(text)?,
        pos: 0,
    };
    if c.next() != Some(Tok::Header("HOA".into())) {
        c.pos = 0;
        return Err(c.err("missing `HOA: v1`"));
    }
    match c.next() {
        Some(Tok::Ident(v)) if v == "v1" => {}
        _ => return Err(c.err("only HOA v1 is supported")),
    }
    let mut states: Option<usize> = None;
    let mut start: Option<usize> = None;
    let mut aps: Vec<String> = Vec::new();
    let mut one_hot = false;
    let mut acceptance: Option<Acceptance> = None;
    let mut qd: Vec<usize> = Vec::new();
    let mut labels: Vec<(usize, String)> = Vec::new();
    let mut saw_acc_count = false;
    loop {
        let line = c.line();
        match c.next() {
            Some(Tok::Body) => break,
            Some(Tok::Header(h)) => {
                let vals = c.values();
                let bad = |m: &str| HoaError::Malformed {
                    line,
                    message: format!("{h}: {m}"),
                };
                match h.as_str() {
                    "States" => match vals.as_slice() {
                        [Tok::Int(n)] => states = Some(*n as usize),
                        _ => return Err(bad("expected a count")),
                    },
                    "Start" => match vals.as_slice() {
                        [Tok::Int(n)] => start = Some(*n as usize),
                        _ => return Err(bad("exactly one initial state is supported")),
                    },
                    "AP" => {
                        let Some((Tok::Int(n), names)) = vals.split_first() else {
                            return Err(bad("expected a count"));
                        };
                        aps = names
                            .iter()
                            .map(|t| match t {
                                Tok::Str(s) => Ok(s.clone()),
                                _ => Err(bad("expected quoted names")),
                            })
                            .collect::<Result<_, _>>()?;
                        if aps.len() != *n as usize {
                            return Err(bad("count does not match the names"));
                        }
                    }
                    "alphabet" => one_hot = vals == [Tok::Ident("one-hot".into())],
                    "acc-name" => {
                        let words: Vec<String> = vals
                            .iter()
                            .map(|t| match t {
                                Tok::Ident(s) => s.clone(),
                                Tok::Int(n) => n.to_string(),
                                _ => String::new(),
                            })
                            .collect();
                        acceptance = Some(match words.iter().map(String::as_str).collect::<Vec<_>>()[..] {
                            ["Buchi"] => Acceptance::Buchi,
                            ["parity", "min", "even", n] => {
                                Acceptance::Parity(n.parse().map_err(|_| bad("bad set count"))?)
                            }
                            _ => return Err(HoaError::UnsupportedAcceptance(words.join(" "))),
                        });
                    }
                    "Acceptance" => saw_acc_count = matches!(vals.first(), Some(Tok::Int(_))),
                    "ldba-qd" => {
                        for v in vals {
                            match v {
                                Tok::Int(n) => qd.push(n as usize),
                                _ => return Err(bad("expected state numbers")),
                            }
                        }
                    }
                    "ldba-label" => match vals.as_slice() {
                        [Tok::Int(q), Tok::Str(s)] => labels.push((*q as usize, s.clone())),
                        _ => return Err(bad("expected a state and a quoted formula")),
                    },
                    _ => {}
                }
            }
            _ => {
                c.pos -= 1;
                return Err(c.err("expected a header item or --BODY--"));
            }
        }
    }
    let Some(acceptance) = acceptance else {
        return Err(HoaError::UnsupportedAcceptance(
            "missing acc-name (Buchi or parity min even expected)".into(),
        ));
    };
    if !saw_acc_count {
        return Err(c.err("missing Acceptance header"));
    }
    let alphabet = if one_hot {
        Alphabet::Symbols(aps.clone())
    } else {
        Alphabet::propositional(aps.clone(), 31).map_err(|e| c.err(e.to_string()))?
    };
    let mut names: Vec<Option<String>> = Vec::new();
    let mut edges: Vec<RawEdge> = Vec::new();
    let mut current: Option<usize> = None;
    loop {
        match c.next() {
            Some(Tok::End) => break,
            Some(Tok::Header(h)) if h == "State" => {
                let q = c.int()? as usize;
                if names.len() <= q {
                    names.resize(q + 1, None);
                }
                names[q] = Some(match c.peek() {
                    Some(Tok::Str(_)) => match c.next() {
                        Some(Tok::Str(s)) => s,
                        _ => unreachable!(),
                    },
                    _ => q.to_string(),
                });
                if c.peek() == Some(&Tok::Punct('{')) {
                    return Err(c.err("state-based acceptance is not supported"));
                }
                current = Some(q);
            }
            Some(Tok::Punct('[')) => {
                let Some(from) = current else {
                    return Err(c.err("edge before any State"));
                };
                let expr = label_or(&mut c, aps.len())?;
                c.expect(']')?;
                let to = c.int()? as usize;
                let mut sets = Vec::new();
                if c.peek() == Some(&Tok::Punct('{')) {
                    c.next();
                    while c.peek() != Some(&Tok::Punct('}')) {
                        sets.push(c.int()? as u32);
                    }
                    c.next();
                }
                let letters = alphabet
                    .letters()
                    .filter(|&l| expr.eval(alphabet.valuation(l)))
                    .collect();
                edges.push(RawEdge {
                    from,
                    letters,
                    to,
                    sets,
                });
            }
            _ => {
                c.pos -= 1;
                return Err(c.err("expected State:, an edge or --END--"));
            }
        }
    }
    let n = states.unwrap_or(names.len()).max(names.len());
    if edges.iter().any(|e| e.to >= n) || qd.iter().any(|&q| q >= n) {
        return Err(c.err("state number out of range"));
    }
    let start = start.unwrap_or(0);
    if start >= n.max(1) {
        return Err(c.err("initial state out of range"));
    }
    let names: Vec<String> = (0..n)
        .map(|q| names.get(q).cloned().flatten().unwrap_or_else(|| q.to_string()))
        .collect();
    match acceptance {
        Acceptance::Buchi => {
            let mut a = Ldba::new(alphabet);
            for (q, name) in names.into_iter().enumerate() {
                a.add_state(name, qd.contains(&q));
            }
            for e in &edges {
                for &l in &e.letters {
                    a.add_edge(e.from, l, e.to, e.sets.contains(&0))
                        .map_err(|err| c.err(err.to_string()))?;
                }
            }
            a.set_initial(start).map_err(|err| c.err(err.to_string()))?;
            for (q, text) in labels {
                if q >= n {
                    return Err(c.err("label for a missing state"));
                }
                let mut props = aps.clone();
                let f = parse_ltl(&text, &mut props).map_err(|err| c.err(format!("label of state {q}: {err}")))?;
                a.set_label(q, f);
            }
            Ok(Automaton::Ldba(a))
        }
        Acceptance::Parity(count) => {
            let shift = if edges.iter().any(|e| e.sets.contains(&0)) {
                2
            } else {
                0
            };
            let mut table: Vec<Vec<Option<(usize, Color)>>> = vec![vec![None; alphabet.size()]; n];
            for e in &edges {
                let color = e.sets.iter().copied().min().unwrap_or(count) + shift;
                for &l in &e.letters {
                    let slot = &mut table[e.from][l as usize];
                    if slot.is_some() {
                        return Err(HoaError::NotDeterministic(format!(
                            "state {} has two transitions on {}",
                            e.from,
                            alphabet.letter_name(l)
                        )));
                    }
                    *slot = Some((e.to, color));
                }
            }
            let mut rows = Vec::with_capacity(n);
            for (q, row) in table.into_iter().enumerate() {
                let row: Option<Vec<_>> = row.into_iter().collect();
                rows.push(
                    row.ok_or_else(|| HoaError::NotDeterministic(format!("state {q} has a missing transition")))?,
                );
            }
            let max = count.saturating_sub(1) + shift;
            Ok(Automaton::Dpa(Dpa::new(alphabet, start, rows, names, max)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn symbols() -> Ldba {
        let mut a = Ldba::new(Alphabet::symbols(["a", "b"]));
        let p = a.add_state("p", false);
        let q = a.add_state("q", true);
        a.add_edge(p, 0, p, false).unwrap();
        a.add_edge(p, 1, p, false).unwrap();
        a.add_edge(p, 0, q, false).unwrap();
        a.add_edge(q, 0, q, true).unwrap();
        a.add_edge(q, 1, q, false).unwrap();
        a
    }

    #[test]
    fn ldba_round_trip() {
        let a = symbols();
        let text = emit_ldba(&a, Some("x")).unwrap();
        assert!(text.contains("ldba-qd: 1\n"));
        assert!(text.contains("alphabet: one-hot"));
        let Automaton::Ldba(b) = parse_hoa(&text).unwrap() else {
            panic!("expected an LDBA")
        };
        assert_eq!(emit_ldba(&b, Some("x")).unwrap(), text);
        assert_eq!(b.qd_count(), 1);
        assert!(b.edges(1, 0)[0].accepting);
    }

    #[test]
    fn dpa_round_trip() {
        let d = Dpa::new(
            Alphabet::Propositional(vec!["a".into()]),
            0,
            vec![vec![(0, 3), (1, 2)], vec![(0, 1), (1, 2)]],
            vec!["s".into(), "t".into()],
            3,
        );
        let text = emit_dpa(&d, None);
        assert!(text.contains("acc-name: parity min even 4"));
        assert!(text.contains("Acceptance: 4 Inf(0) | (Fin(1) & (Inf(2) | (Fin(3))))"));
        let Automaton::Dpa(e) = parse_hoa(&text).unwrap() else {
            panic!("expected a DPA")
        };
        assert_eq!(e, d);
    }

    #[test]
    fn other_acceptance_is_rejected() {
        let text = "HOA: v1\nStates: 1\nStart: 0\nAP: 0\nacc-name: parity max odd 3\n\
                    Acceptance: 3 Fin(2) & (Inf(1) | Fin(0))\n--BODY--\nState: 0\n[t] 0 {0}\n--END--\n";
        assert!(matches!(parse_hoa(text), Err(HoaError::UnsupportedAcceptance(s)) if s == "parity max odd 3"));
    }

    #[test]
    fn label_expressions() {
        let text = "HOA: v1\nStates: 1\nStart: 0\nAP: 2 \"a\" \"b\"\nacc-name: parity min even 2\n\
                    Acceptance: 2 Inf(0) | Fin(1)\n--BODY--\nState: 0\n[!0 | 1] 0 {0}\n[0 & !1] 0 {1}\n--END--\n";
        let Automaton::Dpa(d) = parse_hoa(text).unwrap() else {
            panic!()
        };
        // set 0 is in use, so colors shift by two
        assert_eq!(d.step(0, 0), (0, 2));
        assert_eq!(d.step(0, 1), (0, 3));
        assert_eq!(d.step(0, 2), (0, 2));
        assert_eq!(d.step(0, 3), (0, 2));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_hoa("nothing"), Err(HoaError::Malformed { .. })));
        let missing = "HOA: v1\nStates: 1\nStart: 0\nAP: 0\nacc-name: parity min even 1\n\
                       Acceptance: 1 Inf(0)\n--BODY--\nState: 0\n--END--\n";
        assert!(matches!(parse_hoa(missing), Err(HoaError::NotDeterministic(_))));
    }
}
