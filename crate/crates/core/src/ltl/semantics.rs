use std::collections::HashMap;

use super::formula::{Formula, Node};
use crate::word::{LassoWord, Letter};

/// Truth value of `f` on `w`, by dynamic programming over the positions of
/// the lasso graph.
///
/// Least fixpoints (U, F) start from all-false and greatest fixpoints (G)
/// from all-true; both are iterated to stability, which takes at most
/// `positions()` rounds. General negation is supported so formulas can be
/// checked before normalization.
pub fn eval_lasso(f: &Formula, w: &LassoWord) -> bool {
    let mut memo = HashMap::new();
    values(f, w, &mut memo)[0]
}

fn values(f: &Formula, w: &LassoWord, memo: &mut HashMap<Formula, Vec<bool>>) -> Vec<bool> {
    if let Some(v) = memo.get(f) {
        return v.clone();
    }
    let n = w.positions();
    let out: Vec<bool> = match f.node() {
        Node::True => vec![true; n],
        Node::False => vec![false; n],
        Node::Atom(p) => (0..n).map(|i| p.holds(w.letter_at(i))).collect(),
        Node::NegAtom(p) => (0..n).map(|i| !p.holds(w.letter_at(i))).collect(),
        Node::Not(g) => values(g, w, memo).into_iter().map(|b| !b).collect(),
        Node::And(cs) => {
            let mut acc = vec![true; n];
            for c in cs {
                for (a, b) in acc.iter_mut().zip(values(c, w, memo)) {
                    *a &= b;
                }
            }
            acc
        }
        Node::Or(cs) => {
            let mut acc = vec![false; n];
            for c in cs {
                for (a, b) in acc.iter_mut().zip(values(c, w, memo)) {
                    *a |= b;
                }
            }
            acc
        }
        Node::Next(g) => {
            let inner = values(g, w, memo);
            (0..n).map(|i| inner[w.succ(i)]).collect()
        }
        Node::Finally(g) => {
            let inner = values(g, w, memo);
            fixpoint(w, false, |i, next| inner[i] || next)
        }
        Node::Globally(g) => {
            let inner = values(g, w, memo);
            fixpoint(w, true, |i, next| inner[i] && next)
        }
        Node::Until(l, r) => {
            let (lv, rv) = (values(l, w, memo), values(r, w, memo));
            fixpoint(w, false, |i, next| rv[i] || (lv[i] && next))
        }
    };
    memo.insert(f.clone(), out.clone());
    out
}

fn fixpoint(w: &LassoWord, init: bool, step: impl Fn(usize, bool) -> bool) -> Vec<bool> {
    let n = w.positions();
    let mut val = vec![init; n];
    loop {
        let mut changed = false;
        for i in (0..n).rev() {
            let v = step(i, val[w.succ(i)]);
            if v != val[i] {
                val[i] = v;
                changed = true;
            }
        }
        if !changed {
            return val;
        }
    }
}

enum Op {
    Const(bool),
    Atom(u32, bool),
    Not(usize),
    And(Vec<usize>),
    Or(Vec<usize>),
    Next(usize),
    Finally(usize),
    Globally(usize),
    Until(usize, usize),
}

/// [`eval_lasso`] compiled for repeated use on short lassos.
///
/// The formula is flattened once into a post-order program whose values are
/// bit sets over lasso positions, so each word costs a handful of word-sized
/// operations per node. Lassos with more than 64 positions fall back to
/// [`eval_lasso`].
pub struct LassoEvaluator {
    formula: Formula,
    ops: Vec<Op>,
}

impl LassoEvaluator {
    pub fn new(f: &Formula) -> Self {
        let mut ops = Vec::new();
        let mut index = HashMap::new();
        compile(f, &mut ops, &mut index);
        LassoEvaluator {
            formula: f.clone(),
            ops,
        }
    }

    pub fn eval(&self, w: &LassoWord) -> bool {
        if w.positions() > 64 {
            return eval_lasso(&self.formula, w);
        }
        self.values(w).last().is_some_and(|v| v & 1 == 1)
    }

    /// Truth of every node at every position, as bit sets; at most 64
    /// positions.
    fn values(&self, w: &LassoWord) -> Vec<u64> {
        let n = w.positions();
        assert!(n <= 64, "lasso too long for bit sets");
        let loop_start = w.prefix().len();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        // bit i of next(v) is bit succ(i) of v
        let next = |v: u64| (v >> 1) | (((v >> loop_start) & 1) << (n - 1));
        let mut vals: Vec<u64> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let v = match op {
                Op::Const(b) => {
                    if *b {
                        all
                    } else {
                        0
                    }
                }
                Op::Atom(bit, positive) => {
                    let mut v = 0;
                    for i in 0..n {
                        if (w.letter_at(i) >> bit & 1 == 1) == *positive {
                            v |= 1 << i;
                        }
                    }
                    v
                }
                Op::Not(a) => !vals[*a] & all,
                Op::And(cs) => cs.iter().fold(all, |acc, c| acc & vals[*c]),
                Op::Or(cs) => cs.iter().fold(0, |acc, c| acc | vals[*c]),
                Op::Next(a) => next(vals[*a]),
                Op::Finally(a) => iterate(0, |v| vals[*a] | next(v)),
                Op::Globally(a) => iterate(all, |v| vals[*a] & next(v)),
                Op::Until(l, r) => iterate(0, |v| vals[*r] | (vals[*l] & next(v))),
            };
            vals.push(v);
        }
        vals
    }

    /// Truth of every node on `period^ω`, at its first position.
    pub fn on_period(&self, period: &[Letter]) -> Vec<bool> {
        let w = LassoWord::new(Vec::new(), period.to_vec()).expect("nonempty period");
        self.values(&w).iter().map(|v| v & 1 == 1).collect()
    }

    /// Truth of every node on `letter · w`, given its truth on `w`.
    pub fn prepend(&self, letter: Letter, next: &[bool]) -> Vec<bool> {
        let mut vals: Vec<bool> = Vec::with_capacity(self.ops.len());
        for (i, op) in self.ops.iter().enumerate() {
            let v = match op {
                Op::Const(b) => *b,
                Op::Atom(bit, positive) => (letter >> bit & 1 == 1) == *positive,
                Op::Not(a) => !vals[*a],
                Op::And(cs) => cs.iter().all(|c| vals[*c]),
                Op::Or(cs) => cs.iter().any(|c| vals[*c]),
                Op::Next(a) => next[*a],
                Op::Finally(a) => vals[*a] || next[i],
                Op::Globally(a) => vals[*a] && next[i],
                Op::Until(l, r) => vals[*r] || (vals[*l] && next[i]),
            };
            vals.push(v);
        }
        vals
    }

    /// The truth of the whole formula in a vector from
    /// [`LassoEvaluator::on_period`] or [`LassoEvaluator::prepend`].
    pub fn root(&self, vals: &[bool]) -> bool {
        vals.last().copied().unwrap_or(false)
    }
}

fn iterate(init: u64, step: impl Fn(u64) -> u64) -> u64 {
    let mut v = init;
    loop {
        let w = step(v);
        if w == v {
            return v;
        }
        v = w;
    }
}

fn compile(f: &Formula, ops: &mut Vec<Op>, index: &mut HashMap<Formula, usize>) -> usize {
    if let Some(&i) = index.get(f) {
        return i;
    }
    let mut rec = |g: &Formula| compile(g, ops, index);
    let op = match f.node() {
        Node::True => Op::Const(true),
        Node::False => Op::Const(false),
        Node::Atom(p) => Op::Atom(p.index(), true),
        Node::NegAtom(p) => Op::Atom(p.index(), false),
        Node::Not(g) => Op::Not(rec(g)),
        Node::And(cs) => Op::And(cs.iter().map(rec).collect()),
        Node::Or(cs) => Op::Or(cs.iter().map(rec).collect()),
        Node::Next(g) => Op::Next(rec(g)),
        Node::Finally(g) => Op::Finally(rec(g)),
        Node::Globally(g) => Op::Globally(rec(g)),
        Node::Until(l, r) => {
            let l = rec(l);
            Op::Until(l, rec(r))
        }
    };
    ops.push(op);
    index.insert(f.clone(), ops.len() - 1);
    ops.len() - 1
}
