//! Run DAGs of an LDBA on a lasso word, level by level.
//!
//! Level `i` holds the states reachable after `i` letters. The states of
//! `Q_d` at a level are ranked: vertices with a ranked parent come first,
//! ordered by their least ranked parent, and the remaining ones follow in
//! the order given by [`StateOrder`]. Each pair of consecutive levels
//! emits one color.
//!
//! This module is written against levels, not ranking states, and serves as
//! the reference the determinization is tested against.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use crate::automata::{Color, Ldba, StateId, StateOrder};
use crate::oracle::{RedirectPolicy, ReduceOptions, RedundancyOracle};
use crate::word::{LassoWord, Letter};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Level {
    /// `V_i^d` by increasing index; the vertex at position `k` has index
    /// `k + 1`.
    pub ranked: Vec<StateId>,
    /// `V_i` outside `Q_d`, sorted by id.
    pub others: Vec<StateId>,
    /// Vertices of `Q_d` dropped as redundant, in their original order.
    /// Always empty in the plain DAG.
    pub removed: Vec<StateId>,
}

impl Level {
    pub fn initial(a: &Ldba) -> Self {
        Level {
            ranked: Vec::new(),
            others: vec![a.initial()],
            removed: Vec::new(),
        }
    }

    /// 1-based index of `q` among the ranked vertices.
    pub fn index(&self, q: StateId) -> Option<usize> {
        self.ranked.iter().position(|&p| p == q).map(|k| k + 1)
    }
}

/// The oracle and options of a reduced DAG; `None` for the plain DAG.
pub type Reduction<'a> = Option<(&'a dyn RedundancyOracle, ReduceOptions)>;

/// The level after `level` on `letter`.
pub fn advance(a: &Ldba, ord: &StateOrder, level: &Level, letter: Letter, reduction: Reduction<'_>) -> Level {
    // parents come by increasing index, so the first one seen is least
    let mut min_parent = vec![usize::MAX; a.num_states()];
    let mut ranked = Vec::new();
    let mut others = BTreeSet::new();
    let parents = level
        .ranked
        .iter()
        .enumerate()
        .map(|(k, &q)| (q, k + 1))
        .chain(level.others.iter().map(|&q| (q, usize::MAX)));
    for (q, k) in parents {
        for e in a.edges(q, letter) {
            if !a.in_qd(e.target) {
                others.insert(e.target);
            } else if !ranked.contains(&e.target) {
                min_parent[e.target] = k;
                ranked.push(e.target);
            }
        }
    }
    ranked.sort_by_key(|&q| (min_parent[q], ord.rank(q)));
    let mut removed = Vec::new();
    if let Some((oracle, options)) = reduction {
        let keep = oracle.reduce(&ranked, options);
        let (kept, dropped): (Vec<_>, Vec<_>) = ranked.iter().zip(keep).partition(|(_, k)| *k);
        removed = dropped.into_iter().map(|(&q, _)| q).collect();
        ranked = kept.into_iter().map(|(&q, _)| q).collect();
    }
    Level {
        ranked,
        others: others.into_iter().collect(),
        removed,
    }
}

/// The color emitted between `from` and `to` on `letter`.
pub fn step_color(a: &Ldba, from: &Level, to: &Level, letter: Letter, redirect: RedirectPolicy) -> Color {
    let mut color = 2 * a.qd_count() as Color + 1;
    for (k, &q) in from.ranked.iter().enumerate() {
        let k = k + 1;
        let e = a.det_edge(q, letter).expect("Q_d is deterministic and total");
        let (dec, acc) = match to.index(e.target) {
            Some(j) => (j < k, e.accepting),
            None => match redirect {
                RedirectPolicy::Merge => (true, false),
                RedirectPolicy::Literal => (!to.ranked.is_empty() && k > 1, false),
            },
        };
        if acc {
            color = color.min(2 * k as Color);
        }
        if dec {
            color = color.min(2 * k as Color - 1);
        }
    }
    color
}

/// Levels `0..=horizon` of the run DAG of `a` on `w`.
pub fn build_run_dag(a: &Ldba, ord: &StateOrder, w: &LassoWord, horizon: usize) -> Vec<Level> {
    build(a, ord, w, horizon, None)
}

/// Levels `0..=horizon` of the reduced run DAG: after each level is ranked,
/// vertices the oracle reports as redundant behind the vertices before them
/// are removed, and edges into them count as redirected to the first
/// remaining vertex.
pub fn build_reduced_dag(
    a: &Ldba,
    ord: &StateOrder,
    oracle: &dyn RedundancyOracle,
    options: ReduceOptions,
    w: &LassoWord,
    horizon: usize,
) -> Vec<Level> {
    build(a, ord, w, horizon, Some((oracle, options)))
}

fn build(a: &Ldba, ord: &StateOrder, w: &LassoWord, horizon: usize, reduction: Reduction<'_>) -> Vec<Level> {
    let mut levels = vec![Level::initial(a)];
    for i in 0..horizon {
        let next = advance(a, ord, &levels[i], w.letter(i), reduction);
        levels.push(next);
    }
    levels
}

/// One color per pair of consecutive levels.
pub fn color_trace(a: &Ldba, levels: &[Level], w: &LassoWord, redirect: RedirectPolicy) -> Vec<Color> {
    levels
        .windows(2)
        .enumerate()
        .map(|(i, pair)| step_color(a, &pair[0], &pair[1], w.letter(i), redirect))
        .collect()
}

/// Least color emitted infinitely often by the run DAG on `w`.
pub fn color_summary(a: &Ldba, ord: &StateOrder, w: &LassoWord) -> Color {
    summary(a, ord, w, None)
}

pub fn reduced_color_summary(
    a: &Ldba,
    ord: &StateOrder,
    oracle: &dyn RedundancyOracle,
    options: ReduceOptions,
    w: &LassoWord,
) -> Color {
    summary(a, ord, w, Some((oracle, options)))
}

fn summary(a: &Ldba, ord: &StateOrder, w: &LassoWord, reduction: Reduction<'_>) -> Color {
    let mut level = Level::initial(a);
    for &l in w.prefix() {
        level = advance(a, ord, &level, l, reduction);
    }
    period_summary_from(a, ord, &level, w.period(), reduction)
}

/// Least color emitted infinitely often on `period^ω` from `level`: reads
/// whole periods until the level at the start of a period repeats and takes
/// the least color on that cycle.
pub fn period_summary_from(
    a: &Ldba,
    ord: &StateOrder,
    level: &Level,
    period: &[Letter],
    reduction: Reduction<'_>,
) -> Color {
    let redirect = reduction.map(|(_, o)| o.redirect).unwrap_or_default();
    let mut level = level.clone();
    let mut seen: HashMap<(Vec<StateId>, Vec<StateId>), usize> = HashMap::new();
    let mut mins = Vec::new();
    loop {
        let key = (level.ranked.clone(), level.others.clone());
        if let Some(&start) = seen.get(&key) {
            return mins[start..].iter().copied().min().expect("nonempty cycle");
        }
        seen.insert(key, mins.len());
        let mut m = Color::MAX;
        for &l in period {
            let next = advance(a, ord, &level, l, reduction);
            m = m.min(step_color(a, &level, &next, l, redirect));
            level = next;
        }
        mins.push(m);
    }
}

/// Graphviz rendering of a run DAG, one column per level. Ranked vertices
/// show their index; removed vertices are drawn dashed.
pub fn dag_to_dot(a: &Ldba, levels: &[Level], w: &LassoWord, colors: &[Color]) -> String {
    let mut out = String::from("digraph rundag {\n  rankdir=LR;\n  node [shape=box];\n");
    let id = |i: usize, q: StateId| format!("v{i}_{q}");
    for (i, level) in levels.iter().enumerate() {
        let _ = writeln!(out, "  subgraph level{i} {{\n    rank=same;");
        let caption = match colors.get(i) {
            Some(c) => format!("{i}: color {c}"),
            None => format!("{i}"),
        };
        let _ = writeln!(out, "    l{i} [shape=plaintext, label=\"{caption}\"];");
        for &q in &level.others {
            let _ = writeln!(out, "    {} [label=\"{}\"];", id(i, q), escape(a.name(q)));
        }
        for (k, &q) in level.ranked.iter().enumerate() {
            let _ = writeln!(out, "    {} [label=\"{} : {}\"];", id(i, q), escape(a.name(q)), k + 1);
        }
        for &q in &level.removed {
            let _ = writeln!(out, "    {} [label=\"{}\", style=dashed];", id(i, q), escape(a.name(q)));
        }
        out.push_str("  }\n");
    }
    for (i, pair) in levels.windows(2).enumerate() {
        let letter = w.letter(i);
        let next: BTreeSet<StateId> = pair[1]
            .ranked
            .iter()
            .chain(&pair[1].others)
            .chain(&pair[1].removed)
            .copied()
            .collect();
        for &q in pair[0].ranked.iter().chain(&pair[0].others) {
            for e in a.edges(q, letter) {
                if next.contains(&e.target) {
                    let style = if e.accepting { " [style=bold]" } else { "" };
                    let _ = writeln!(out, "  {} -> {}{style};", id(i, q), id(i + 1, e.target));
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
