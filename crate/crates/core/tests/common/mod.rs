#![allow(dead_code)]

use ltl2dpa::automata::{Alphabet, Ldba};
use ltl2dpa::oracle::BaseOracle;
use ltl2dpa::LassoWord;

pub const A: u32 = 0;
pub const B: u32 = 1;

/// The persistence automaton for `F G a | F G b` over the symbols `a`, `b`.
/// States `1..4` have ids `0..3`; `Q_d = {2, 3, 4}` and 4 is a sink.
pub fn persistence() -> Ldba {
    let mut a = Ldba::new(Alphabet::symbols(["a", "b"]));
    for i in 1..=4 {
        a.add_state(i.to_string(), i > 1);
    }
    for l in [A, B] {
        a.add_edge(0, l, 0, false).unwrap();
        a.add_edge(3, l, 3, false).unwrap();
    }
    a.add_edge(0, A, 1, false).unwrap();
    a.add_edge(0, B, 2, false).unwrap();
    a.add_edge(1, A, 1, true).unwrap();
    a.add_edge(1, B, 3, false).unwrap();
    a.add_edge(2, B, 2, true).unwrap();
    a.add_edge(2, A, 3, false).unwrap();
    a
}

/// Knows only that state 4 has the empty language.
pub fn dead_four_oracle(a: &Ldba) -> BaseOracle {
    BaseOracle::new(a, vec![vec![], vec![0], vec![1], vec![]])
}

pub fn lasso(u: &[u32], v: &[u32]) -> LassoWord {
    LassoWord::new(u.to_vec(), v.to_vec()).unwrap()
}

/// Formulas with at most three propositions and at most 12 nodes.
pub const CORPUS: &[&str] = &[
    "F G a | F G b",
    "G F a",
    "F G a",
    "G a",
    "F a",
    "a U b",
    "X a",
    "G (a -> F b)",
    "G F a & G F b",
    "G F a | F G b",
    "c | X G (a | F b)",
    "a U (b & X a)",
    "F (a & X b)",
    "X X a | G b",
    "G (a | X b)",
    "F G (a | b)",
    "G F a -> G F b",
    "(a U b) & F G a",
    "G (a -> X !a)",
    "F a & G !b",
    "a & X (b U a)",
    "G (a U b)",
    "F (a U G b)",
    "G F (a & X b)",
    "!(G F a)",
    "!(F G a | F G b)",
    "G F p1 | F G p2",
    "G F p1 -> G F q1",
    "!(G F p1 -> G (q -> F r))",
    "X (a & F !b)",
    "F G a & G F b",
    "G (a -> F (b & c))",
    "(X a U b) | G F !a",
];

/// Number of propositions of a corpus formula.
pub fn props(text: &str) -> usize {
    let mut aps = Vec::new();
    ltl2dpa::ltl::parse_ltl(text, &mut aps).unwrap();
    aps.len()
}
