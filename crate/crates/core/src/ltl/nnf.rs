use thiserror::Error;

use super::formula::{Formula, Node};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NnfError {
    /// The negation-normal-form grammar has no release operator, so a
    /// negated until cannot be expressed.
    #[error("negated Until not in NNF fragment: !({0})")]
    NegatedUntil(Formula),
}

/// Pushes negations down to the atoms using the dualities of X, F and G and
/// De Morgan's laws.
pub fn to_nnf(f: &Formula) -> Result<Formula, NnfError> {
    push(f, false)
}

fn push(f: &Formula, negate: bool) -> Result<Formula, NnfError> {
    let all = |cs: &[Formula], negate: bool| -> Result<Vec<Formula>, NnfError> {
        cs.iter().map(|c| push(c, negate)).collect()
    };
    Ok(match (f.node(), negate) {
        (Node::True, false) | (Node::False, true) => Formula::tt(),
        (Node::False, false) | (Node::True, true) => Formula::ff(),
        (Node::Atom(p), false) | (Node::NegAtom(p), true) => Formula::atom(p.clone()),
        (Node::Atom(p), true) | (Node::NegAtom(p), false) => Formula::neg_atom(p.clone()),
        (Node::Not(g), _) => push(g, !negate)?,
        (Node::And(cs), false) | (Node::Or(cs), true) => Formula::and(all(cs, negate)?),
        (Node::Or(cs), false) | (Node::And(cs), true) => Formula::or(all(cs, negate)?),
        (Node::Next(g), _) => Formula::next(push(g, negate)?),
        (Node::Finally(g), false) | (Node::Globally(g), true) => Formula::finally(push(g, negate)?),
        (Node::Globally(g), false) | (Node::Finally(g), true) => Formula::globally(push(g, negate)?),
        (Node::Until(l, r), false) => Formula::until(push(l, false)?, push(r, false)?),
        (Node::Until(_, _), true) => return Err(NnfError::NegatedUntil(f.clone())),
    })
}
