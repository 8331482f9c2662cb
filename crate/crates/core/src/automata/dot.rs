//! Graphviz output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::dpa::{Color, Dpa};
use super::ldba::Ldba;
use crate::word::Letter;

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn letters_text(names: Vec<String>) -> String {
    names.join(", ")
}

/// States of `Q_d` are boxed, accepting transitions bold, jumps dashed.
pub fn ldba_to_dot(a: &Ldba) -> String {
    let mut out = String::from("digraph ldba {\n  rankdir=LR;\n  init [shape=point];\n");
    for q in a.states() {
        let shape = if a.in_qd(q) { "box" } else { "ellipse" };
        let _ = writeln!(out, "  s{q} [shape={shape}, label=\"{}\"];", escape(a.name(q)));
    }
    let _ = writeln!(out, "  init -> s{};", a.initial());
    for q in a.states() {
        let mut groups: BTreeMap<(usize, bool), Vec<Letter>> = BTreeMap::new();
        for l in a.alphabet().letters() {
            for e in a.edges(q, l) {
                groups.entry((e.target, e.accepting)).or_default().push(l);
            }
        }
        for ((t, acc), ls) in groups {
            let label = letters_text(ls.iter().map(|&l| a.alphabet().letter_name(l)).collect());
            let style = if acc { ", style=bold" } else { "" };
            let _ = writeln!(out, "  s{q} -> s{t} [label=\"{}\"{style}];", escape(&label));
        }
        for &p in a.jumps(q) {
            let _ = writeln!(out, "  s{q} -> s{p} [label=\"eps\", style=dashed];");
        }
    }
    out.push_str("}\n");
    out
}

/// Edges are labeled `letters / color`.
pub fn dpa_to_dot(d: &Dpa) -> String {
    let mut out = String::from("digraph dpa {\n  rankdir=LR;\n  init [shape=point];\n");
    for q in 0..d.num_states() {
        let _ = writeln!(out, "  s{q} [shape=box, label=\"{}\"];", escape(d.name(q)));
    }
    let _ = writeln!(out, "  init -> s{};", d.initial());
    for q in 0..d.num_states() {
        let mut groups: BTreeMap<(usize, Color), Vec<Letter>> = BTreeMap::new();
        for l in d.alphabet().letters() {
            let (t, c) = d.step(q, l);
            groups.entry((t, c)).or_default().push(l);
        }
        for ((t, c), ls) in groups {
            let label = letters_text(ls.iter().map(|&l| d.alphabet().letter_name(l)).collect());
            let _ = writeln!(out, "  s{q} -> s{t} [label=\"{} / {c}\"];", escape(&label));
        }
    }
    out.push_str("}\n");
    out
}
