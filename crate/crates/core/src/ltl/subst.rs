use std::collections::BTreeSet;

use super::canon::{canonicalize, Class};
use super::formula::{Formula, Node};

/// All subformulas of `f` of the shape `G psi`, in formula order.
pub fn g_subformulas(f: &Formula) -> BTreeSet<Formula> {
    f.subformulas()
        .into_iter()
        .filter(|g| matches!(g.node(), Node::Globally(_)))
        .collect()
}

/// `f[G]`: every maximal occurrence of a formula of `gset` is replaced by
/// `tt`, every maximal occurrence of a formula of `all \ gset` by `ff`.
///
/// Occurrences are matched structurally, so `f` and the sets should come from
/// the same (canonical) source.
pub fn substitute_gset(f: &Formula, gset: &BTreeSet<Formula>, all: &BTreeSet<Formula>) -> Class {
    canonicalize(&replace(f, gset, all))
}

fn replace(f: &Formula, gset: &BTreeSet<Formula>, all: &BTreeSet<Formula>) -> Formula {
    if matches!(f.node(), Node::Globally(_)) && all.contains(f) {
        return if gset.contains(f) { Formula::tt() } else { Formula::ff() };
    }
    let rec = |g: &Formula| replace(g, gset, all);
    match f.node() {
        Node::True | Node::False | Node::Atom(_) | Node::NegAtom(_) => f.clone(),
        Node::Not(g) => Formula::not(rec(g)),
        Node::And(cs) => Formula::and(cs.iter().map(rec).collect()),
        Node::Or(cs) => Formula::or(cs.iter().map(rec).collect()),
        Node::Next(g) => Formula::next(rec(g)),
        Node::Finally(g) => Formula::finally(rec(g)),
        Node::Globally(g) => Formula::globally(rec(g)),
        Node::Until(l, r) => Formula::until(rec(l), rec(r)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{normalize, parse_ltl};

    fn parse(text: &str, props: &mut Vec<String>) -> Formula {
        normalize(&parse_ltl(text, props).unwrap())
    }

    #[test]
    fn substitution_example() {
        let mut props = Vec::new();
        let f = parse("G b | X (a & G (a | G b))", &mut props);
        let all = g_subformulas(&f);
        assert_eq!(all.len(), 2);
        let g = parse("G (a | G b)", &mut props);
        let result = substitute_gset(&f, &BTreeSet::from([g]), &all);
        assert_eq!(result, canonicalize(&parse("X a", &mut props)));
    }

    #[test]
    fn nothing_to_substitute() {
        let mut props = Vec::new();
        let f = parse("a | F b", &mut props);
        let all = g_subformulas(&f);
        assert!(all.is_empty());
        assert_eq!(substitute_gset(&f, &all, &all), canonicalize(&f));
    }

    #[test]
    fn maximal_occurrence_replaced() {
        let mut props = Vec::new();
        let f = parse("G (a | F b)", &mut props);
        let all = g_subformulas(&f);
        assert!(substitute_gset(&f, &all, &all).is_tt());
        assert!(substitute_gset(&f, &BTreeSet::new(), &all).is_ff());
    }

    #[test]
    fn g_subformula_scan() {
        let mut props = Vec::new();
        let f = parse("c | X G (a | F b)", &mut props);
        let expected = parse("G (a | F b)", &mut props);
        assert_eq!(g_subformulas(&f), BTreeSet::from([expected]));

        let f = parse("F G a | F G b", &mut props);
        let ga = parse("G a", &mut props);
        let gb = parse("G b", &mut props);
        assert_eq!(g_subformulas(&f), BTreeSet::from([ga, gb]));

        assert!(g_subformulas(&parse("a U b", &mut props)).is_empty());
    }
}
