use super::formula::{Formula, Node};

/// Syntactic fragments used to order accepting components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fragment {
    /// `F g`, or a conjunction/disjunction of such formulas.
    PureEventual,
    /// Built from literals, `&`, `|` and `X` only.
    XSafety,
    Other,
}

pub fn classify_fragment(f: &Formula) -> Fragment {
    if is_pure_eventual(f) {
        Fragment::PureEventual
    } else if is_x_safety(f) {
        Fragment::XSafety
    } else {
        Fragment::Other
    }
}

fn is_pure_eventual(f: &Formula) -> bool {
    match f.node() {
        Node::Finally(_) => true,
        Node::And(cs) | Node::Or(cs) => !cs.is_empty() && cs.iter().all(is_pure_eventual),
        _ => false,
    }
}

fn is_x_safety(f: &Formula) -> bool {
    match f.node() {
        Node::True | Node::False | Node::Atom(_) | Node::NegAtom(_) => true,
        Node::And(cs) | Node::Or(cs) => cs.iter().all(is_x_safety),
        Node::Next(g) => is_x_safety(g),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{parse_ltl, to_nnf};

    fn classify(text: &str) -> Fragment {
        classify_fragment(&to_nnf(&parse_ltl(text, &mut Vec::new()).unwrap()).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(classify("F (a & X b)"), Fragment::PureEventual);
        assert_eq!(classify("F a | F G b"), Fragment::PureEventual);
        assert_eq!(classify("X X a"), Fragment::XSafety);
        assert_eq!(classify("a & X !b"), Fragment::XSafety);
        assert_eq!(classify("G F a"), Fragment::Other);
        assert_eq!(classify("a U b"), Fragment::Other);
    }
}
