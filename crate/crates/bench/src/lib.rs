//! Inputs shared by the construction benchmarks.

use ltl2dpa::automata::{Alphabet, Ldba};
use ltl2dpa::pipeline::{rand_ldba, Family, RandomLdba};

/// The persistence automaton for `F G a | F G b`: states `1..4` with ids
/// `0..3`, where 2, 3 and 4 form the deterministic part and 4 is a sink.
pub fn persistence() -> Ldba {
    let mut a = Ldba::new(Alphabet::symbols(["a", "b"]));
    for i in 1..=4 {
        a.add_state(i.to_string(), i > 1);
    }
    let edges = [
        (0, 0, 0, false),
        (0, 1, 0, false),
        (0, 0, 1, false),
        (0, 1, 2, false),
        (1, 0, 1, true),
        (1, 1, 3, false),
        (2, 1, 2, true),
        (2, 0, 3, false),
        (3, 0, 3, false),
        (3, 1, 3, false),
    ];
    for (q, l, t, acc) in edges {
        a.add_edge(q, l, t, acc).expect("valid edge");
    }
    a
}

/// Benchmark formulas: every family member up to `max_n`.
pub fn family_formulas(max_n: usize) -> Vec<(String, String)> {
    Family::ALL
        .iter()
        .flat_map(|&f| (1..=max_n).map(move |n| (format!("{f}({n})"), f.formula(n))))
        .collect()
}

/// Random automata with `states` states over two letters.
pub fn random_ldbas(states: usize, count: u64) -> Vec<Ldba> {
    let p = RandomLdba {
        states,
        ..Default::default()
    };
    (0..count).map(|seed| rand_ldba(seed, &p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ltl2dpa::automata::validate_ldba;

    #[test]
    fn inputs_are_valid() {
        assert!(validate_ldba(&persistence()).is_empty());
        assert_eq!(family_formulas(2).len(), 8);
        assert!(random_ldbas(6, 10).iter().all(|a| validate_ldba(a).is_empty()));
    }
}
