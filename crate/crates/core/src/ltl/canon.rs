//! Propositional equivalence classes and the "after" function.
//!
//! A [`Class`] stores a formula as a Boolean function over its maximal
//! proper subformulas. In negation normal form every such variable occurs
//! only positively (`!a` is a variable of its own), so the function is
//! monotone and its subsumption-free disjunctive normal form is unique. Two
//! formulas are propositionally equivalent iff their classes are equal.
//!
//! Proper subformulas are themselves stored canonically: the operand of every
//! temporal operator is the representative formula of its class, which makes
//! structural equality of proper formulas coincide with equality up to
//! propositional rewriting below the operator.

use std::collections::HashMap;
use std::fmt;

use super::formula::{Formula, Node};

/// A conjunction of proper formulas, sorted and duplicate free.
pub type Clause = Vec<Formula>;

/// Canonical disjunctive normal form of a formula.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Class {
    clauses: Vec<Clause>,
}

fn is_subset(small: &[Formula], big: &[Formula]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut it = big.iter();
    'outer: for x in small {
        for y in it.by_ref() {
            match y.cmp(x) {
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => continue 'outer,
                std::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

fn merge(a: &[Formula], b: &[Formula]) -> Clause {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl Class {
    pub fn tt() -> Self {
        Class {
            clauses: vec![Vec::new()],
        }
    }

    pub fn ff() -> Self {
        Class { clauses: Vec::new() }
    }

    /// The class of a single proper formula.
    pub fn literal(f: Formula) -> Self {
        debug_assert!(f.is_proper(), "{f} is not proper");
        Class { clauses: vec![vec![f]] }
    }

    fn from_clauses(mut clauses: Vec<Clause>) -> Self {
        clauses.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        clauses.dedup();
        let mut kept: Vec<Clause> = Vec::with_capacity(clauses.len());
        for c in clauses {
            if !kept.iter().any(|k| is_subset(k, &c)) {
                kept.push(c);
            }
        }
        kept.sort();
        Class { clauses: kept }
    }

    pub fn is_tt(&self) -> bool {
        self.clauses.len() == 1 && self.clauses[0].is_empty()
    }

    pub fn is_ff(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Every proper formula occurring in some clause.
    pub fn literals(&self) -> Vec<Formula> {
        let mut lits: Vec<Formula> = self.clauses.iter().flatten().cloned().collect();
        lits.sort();
        lits.dedup();
        lits
    }

    pub fn or(&self, other: &Class) -> Class {
        if self.is_tt() || other.is_ff() {
            return self.clone();
        }
        if other.is_tt() || self.is_ff() {
            return other.clone();
        }
        Class::from_clauses(self.clauses.iter().chain(&other.clauses).cloned().collect())
    }

    pub fn and(&self, other: &Class) -> Class {
        if self.is_ff() || other.is_tt() {
            return self.clone();
        }
        if other.is_ff() || self.is_tt() {
            return other.clone();
        }
        let mut out = Vec::with_capacity(self.clauses.len() * other.clauses.len());
        for a in &self.clauses {
            for b in &other.clauses {
                out.push(merge(a, b));
            }
        }
        Class::from_clauses(out)
    }

    pub fn and_all<'a>(classes: impl IntoIterator<Item = &'a Class>) -> Class {
        classes.into_iter().fold(Class::tt(), |acc, c| acc.and(c))
    }

    /// The representative formula: a disjunction of conjunctions, with
    /// singleton connectives collapsed.
    pub fn to_formula(&self) -> Formula {
        let conj = |c: &Clause| match c.len() {
            0 => Formula::tt(),
            1 => c[0].clone(),
            _ => Formula::and(c.clone()),
        };
        match self.clauses.len() {
            0 => Formula::ff(),
            1 => conj(&self.clauses[0]),
            _ => Formula::or(self.clauses.iter().map(conj).collect()),
        }
    }

    /// Reads back a formula produced by [`Class::to_formula`] without
    /// re-canonicalizing the proper formulas it mentions.
    pub(crate) fn of_representative(f: &Formula) -> Class {
        let clause = |g: &Formula| -> Clause {
            match g.node() {
                Node::And(cs) => cs.clone(),
                Node::True => Vec::new(),
                _ => vec![g.clone()],
            }
        };
        match f.node() {
            Node::False => Class::ff(),
            Node::Or(cs) => Class {
                clauses: cs.iter().map(clause).collect(),
            },
            _ => Class {
                clauses: vec![clause(f)],
            },
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_formula(), f)
    }
}

impl fmt::Debug for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Canonicalizes a formula in negation normal form.
///
/// Temporal operators applied to a Boolean constant are folded
/// (`X tt = tt`, `F ff = ff`, `a U tt = tt`, `ff U b = b`, ...); otherwise
/// only propositional reasoning is applied.
pub fn canonicalize(f: &Formula) -> Class {
    match f.node() {
        Node::True => Class::tt(),
        Node::False => Class::ff(),
        Node::Atom(_) | Node::NegAtom(_) => Class::literal(f.clone()),
        Node::Not(g) => match g.node() {
            Node::Atom(p) => Class::literal(Formula::neg_atom(p.clone())),
            _ => panic!("canonicalize requires negation normal form, got {f}"),
        },
        Node::And(cs) => Class::and_all(&cs.iter().map(canonicalize).collect::<Vec<_>>()),
        Node::Or(cs) => cs.iter().map(canonicalize).fold(Class::ff(), |acc, c| acc.or(&c)),
        Node::Next(g) => unary(g, Formula::next),
        Node::Finally(g) => unary(g, Formula::finally),
        Node::Globally(g) => unary(g, Formula::globally),
        Node::Until(l, r) => {
            let r = canonicalize(r);
            if r.is_tt() || r.is_ff() {
                return r;
            }
            let l = canonicalize(l);
            if l.is_ff() {
                return r;
            }
            Class::literal(Formula::until(l.to_formula(), r.to_formula()))
        }
    }
}

fn unary(g: &Formula, op: fn(Formula) -> Formula) -> Class {
    let inner = canonicalize(g);
    if inner.is_tt() || inner.is_ff() {
        inner
    } else {
        Class::literal(op(inner.to_formula()))
    }
}

/// Canonical representative formula of `f`.
pub fn normalize(f: &Formula) -> Formula {
    canonicalize(f).to_formula()
}

/// Memoizing evaluator of the "after" function on canonical classes.
///
/// Each proper formula is unfolded at most once per letter; a cache belongs
/// to a single translation and is not shared between threads.
#[derive(Default)]
pub struct After {
    cache: HashMap<(Formula, u32), Class>,
}

impl After {
    pub fn new() -> Self {
        After::default()
    }

    /// The class of `af(c, letter)`.
    pub fn step(&mut self, c: &Class, letter: u32) -> Class {
        if c.is_tt() || c.is_ff() {
            return c.clone();
        }
        let mut acc = Class::ff();
        for clause in c.clauses() {
            let mut conj = Class::tt();
            for lit in clause {
                let l = self.literal(lit, letter);
                conj = conj.and(&l);
                if conj.is_ff() {
                    break;
                }
            }
            acc = acc.or(&conj);
            if acc.is_tt() {
                break;
            }
        }
        acc
    }

    /// Left fold of [`After::step`] over a finite word.
    pub fn word(&mut self, c: &Class, word: &[u32]) -> Class {
        word.iter().fold(c.clone(), |acc, &l| self.step(&acc, l))
    }

    fn literal(&mut self, lit: &Formula, letter: u32) -> Class {
        let key = (lit.clone(), letter);
        if let Some(c) = self.cache.get(&key) {
            return c.clone();
        }
        let result = match lit.node() {
            Node::Atom(p) => bool_class(p.holds(letter)),
            Node::NegAtom(p) => bool_class(!p.holds(letter)),
            Node::Next(g) => Class::of_representative(g),
            Node::Finally(g) => {
                let inner = Class::of_representative(g);
                self.step(&inner, letter).or(&Class::literal(lit.clone()))
            }
            Node::Globally(g) => {
                let inner = Class::of_representative(g);
                self.step(&inner, letter).and(&Class::literal(lit.clone()))
            }
            Node::Until(l, r) => {
                let (l, r) = (Class::of_representative(l), Class::of_representative(r));
                let hold = self.step(&l, letter).and(&Class::literal(lit.clone()));
                self.step(&r, letter).or(&hold)
            }
            _ => panic!("not a canonical proper formula: {lit}"),
        };
        self.cache.insert(key, result.clone());
        result
    }
}

fn bool_class(b: bool) -> Class {
    if b {
        Class::tt()
    } else {
        Class::ff()
    }
}

/// `af(f, letter)` for a formula in negation normal form.
pub fn af_step(f: &Formula, letter: u32) -> Class {
    After::new().step(&canonicalize(f), letter)
}

/// `af(f, word)`; the empty word leaves the class of `f` unchanged.
pub fn af_word(f: &Formula, word: &[u32]) -> Class {
    After::new().word(&canonicalize(f), word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{parse_ltl, to_nnf};

    fn class(text: &str, props: &mut Vec<String>) -> Class {
        canonicalize(&to_nnf(&parse_ltl(text, props).unwrap()).unwrap())
    }

    fn letter(props: &[String], names: &[&str]) -> u32 {
        names
            .iter()
            .map(|n| 1 << props.iter().position(|p| p == n).unwrap())
            .sum()
    }

    #[test]
    fn absorption_example() {
        let mut props = Vec::new();
        let lhs = class("X b | (G (a | X b) & X b)", &mut props);
        let rhs = class("X b", &mut props);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn semantic_but_not_propositional_equivalence() {
        let mut props = Vec::new();
        assert_ne!(class("F a & G a", &mut props), class("G a", &mut props));
    }

    #[test]
    fn units() {
        let mut props = Vec::new();
        assert_eq!(class("tt & F a", &mut props), class("F a", &mut props));
        assert!(class("tt", &mut props).is_tt());
        assert!(class("ff", &mut props).is_ff());
        assert_eq!(Class::tt().clauses(), &[Vec::<Formula>::new()]);
        assert!(Class::ff().clauses().is_empty());
        assert!(class("a | tt", &mut props).is_tt());
        assert!(class("X ff | ff", &mut props).is_ff());
    }

    #[test]
    fn operands_are_canonical() {
        let mut props = Vec::new();
        assert_eq!(class("G (a | F b)", &mut props), class("G (F b | a | a)", &mut props));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let mut props = Vec::new();
        let c = class("(a | X b) & (G c | a) & F (b & a)", &mut props);
        assert_eq!(canonicalize(&c.to_formula()), c);
        assert_eq!(Class::of_representative(&c.to_formula()), c);
    }

    #[test]
    fn af_table_examples() {
        let mut props = Vec::new();
        let phi = to_nnf(&parse_ltl("c | X G (a | F b)", &mut props).unwrap()).unwrap();
        let c = letter(&props, &["c"]);
        assert!(af_step(&phi, c).is_tt());
        let after_empty = af_step(&phi, 0);
        assert_eq!(after_empty, class("G (a | F b)", &mut props));

        let a = parse_ltl("a", &mut props).unwrap();
        assert!(af_step(&a, letter(&props, &["a"])).is_tt());
        assert!(af_step(&a, 0).is_ff());
    }

    #[test]
    fn af_fixes_recurrence() {
        let mut props = Vec::new();
        let gfa = to_nnf(&parse_ltl("G F a", &mut props).unwrap()).unwrap();
        let a = letter(&props, &["a"]);
        assert_eq!(af_step(&gfa, a), canonicalize(&gfa));
    }

    #[test]
    fn af_word_unfolds() {
        let mut props = Vec::new();
        let fb = parse_ltl("F b", &mut props).unwrap();
        let b = letter(&props, &["b"]);
        assert_eq!(af_word(&fb, &[]), canonicalize(&fb));
        assert!(af_word(&fb, &[0, b]).is_tt());
    }
}
