//! LTL syntax trees.
//!
//! Formulas are immutable and reference counted. Every node caches its hash,
//! so formulas can be used as keys of hash maps and members of sets without
//! re-walking the tree. Equality and ordering are structural.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::sync::Arc;

/// An atomic proposition. Identity is the index into the proposition table
/// the formula was parsed against; the name is carried along for printing.
#[derive(Clone, Debug)]
pub struct Prop {
    index: u32,
    name: Arc<str>,
}

impl Prop {
    pub fn new(index: u32, name: impl Into<Arc<str>>) -> Self {
        Prop {
            index,
            name: name.into(),
        }
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Whether the proposition holds in the letter `letter` (a bit set over
    /// the proposition table).
    pub fn holds(&self, letter: u32) -> bool {
        letter & (1 << self.index) != 0
    }
}

impl PartialEq for Prop {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index
    }
}

impl Eq for Prop {}

impl Hash for Prop {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.index.hash(state);
    }
}

impl PartialOrd for Prop {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Prop {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index.cmp(&other.index)
    }
}

/// The shape of a formula node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    True,
    False,
    Atom(Prop),
    NegAtom(Prop),
    /// General negation; only present before normalization.
    Not(Formula),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Next(Formula),
    Finally(Formula),
    Globally(Formula),
    Until(Formula, Formula),
}

impl Node {
    fn rank(&self) -> u8 {
        match self {
            Node::True => 0,
            Node::False => 1,
            Node::Atom(_) => 2,
            Node::NegAtom(_) => 3,
            Node::Not(_) => 4,
            Node::And(_) => 5,
            Node::Or(_) => 6,
            Node::Next(_) => 7,
            Node::Finally(_) => 8,
            Node::Globally(_) => 9,
            Node::Until(_, _) => 10,
        }
    }
}

#[derive(Debug)]
struct Inner {
    node: Node,
    hash: u64,
}

/// An LTL formula.
#[derive(Clone)]
pub struct Formula(Arc<Inner>);

impl Formula {
    pub fn new(node: Node) -> Self {
        let mut hasher = DefaultHasher::new();
        node.hash(&mut hasher);
        let hash = hasher.finish();
        Formula(Arc::new(Inner { node, hash }))
    }

    pub fn tt() -> Self {
        Formula::new(Node::True)
    }

    pub fn ff() -> Self {
        Formula::new(Node::False)
    }

    pub fn atom(p: Prop) -> Self {
        Formula::new(Node::Atom(p))
    }

    pub fn neg_atom(p: Prop) -> Self {
        Formula::new(Node::NegAtom(p))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::new(Node::Not(f))
    }

    pub fn and(children: Vec<Formula>) -> Self {
        Formula::new(Node::And(children))
    }

    pub fn or(children: Vec<Formula>) -> Self {
        Formula::new(Node::Or(children))
    }

    pub fn next(f: Formula) -> Self {
        Formula::new(Node::Next(f))
    }

    pub fn finally(f: Formula) -> Self {
        Formula::new(Node::Finally(f))
    }

    pub fn globally(f: Formula) -> Self {
        Formula::new(Node::Globally(f))
    }

    pub fn until(l: Formula, r: Formula) -> Self {
        Formula::new(Node::Until(l, r))
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn is_true(&self) -> bool {
        matches!(self.node(), Node::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self.node(), Node::False)
    }

    /// A formula is proper if it is neither a conjunction nor a disjunction
    /// (nor a Boolean constant).
    pub fn is_proper(&self) -> bool {
        !matches!(self.node(), Node::True | Node::False | Node::And(_) | Node::Or(_))
    }

    /// Whether the formula is in negation normal form.
    pub fn is_nnf(&self) -> bool {
        match self.node() {
            Node::Not(_) => false,
            _ => self.children().all(Formula::is_nnf),
        }
    }

    pub fn children(&self) -> impl Iterator<Item = &Formula> {
        let (slice, extra): (&[Formula], Option<&Formula>) = match self.node() {
            Node::True | Node::False | Node::Atom(_) | Node::NegAtom(_) => (&[], None),
            Node::Not(f) | Node::Next(f) | Node::Finally(f) | Node::Globally(f) => (std::slice::from_ref(f), None),
            Node::And(cs) | Node::Or(cs) => (cs, None),
            Node::Until(l, r) => (std::slice::from_ref(l), Some(r)),
        };
        slice.iter().chain(extra)
    }

    /// All subformulas, including the formula itself, without duplicates,
    /// in pre-order of first occurrence.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let mut stack = vec![self.clone()];
        while let Some(f) = stack.pop() {
            if !seen.insert(f.clone()) {
                continue;
            }
            let children: Vec<Formula> = f.children().cloned().collect();
            out.push(f);
            stack.extend(children.into_iter().rev());
        }
        out
    }

    /// The atomic propositions mentioned anywhere in the formula.
    pub fn props(&self) -> Vec<Prop> {
        let mut props: Vec<Prop> = self
            .subformulas()
            .into_iter()
            .filter_map(|f| match f.node() {
                Node::Atom(p) | Node::NegAtom(p) => Some(p.clone()),
                _ => None,
            })
            .collect();
        props.sort();
        props.dedup();
        props
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        1 + self.children().map(Formula::size).sum::<usize>()
    }

    pub fn ptr_eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other) || (self.0.hash == other.0.hash && self.0.node == other.0.node)
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.ptr_eq(other) {
            return Ordering::Equal;
        }
        let (a, b) = (self.node(), other.node());
        a.rank().cmp(&b.rank()).then_with(|| match (a, b) {
            (Node::Atom(p), Node::Atom(q)) | (Node::NegAtom(p), Node::NegAtom(q)) => p.cmp(q),
            (Node::Not(f), Node::Not(g))
            | (Node::Next(f), Node::Next(g))
            | (Node::Finally(f), Node::Finally(g))
            | (Node::Globally(f), Node::Globally(g)) => f.cmp(g),
            (Node::And(fs), Node::And(gs)) | (Node::Or(fs), Node::Or(gs)) => fs.cmp(gs),
            (Node::Until(f1, f2), Node::Until(g1, g2)) => f1.cmp(g1).then_with(|| f2.cmp(g2)),
            _ => Ordering::Equal,
        })
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn is_binary(f: &Formula) -> bool {
    match f.node() {
        Node::And(cs) | Node::Or(cs) => cs.len() > 1,
        Node::Until(_, _) => true,
        _ => false,
    }
}

fn write_operand(out: &mut fmt::Formatter<'_>, f: &Formula) -> fmt::Result {
    if is_binary(f) {
        write!(out, "({f})")
    } else {
        write!(out, "{f}")
    }
}

fn write_joined(out: &mut fmt::Formatter<'_>, cs: &[Formula], op: &str, unit: &str) -> fmt::Result {
    if cs.is_empty() {
        return out.write_str(unit);
    }
    for (i, c) in cs.iter().enumerate() {
        if i > 0 {
            write!(out, " {op} ")?;
        }
        write_operand(out, c)?;
    }
    Ok(())
}

/// Prints in the same concrete syntax the parser accepts.
impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::True => out.write_str("tt"),
            Node::False => out.write_str("ff"),
            Node::Atom(p) => out.write_str(p.name()),
            Node::NegAtom(p) => write!(out, "!{}", p.name()),
            Node::Not(f) => {
                out.write_str("!")?;
                write_operand(out, f)
            }
            Node::And(cs) => write_joined(out, cs, "&", "tt"),
            Node::Or(cs) => write_joined(out, cs, "|", "ff"),
            Node::Next(f) => {
                out.write_str("X ")?;
                write_operand(out, f)
            }
            Node::Finally(f) => {
                out.write_str("F ")?;
                write_operand(out, f)
            }
            Node::Globally(f) => {
                out.write_str("G ")?;
                write_operand(out, f)
            }
            Node::Until(l, r) => {
                write_operand(out, l)?;
                out.write_str(" U ")?;
                write_operand(out, r)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Formula {
        Formula::atom(Prop::new(0, "a"))
    }

    fn b() -> Formula {
        Formula::atom(Prop::new(1, "b"))
    }

    #[test]
    fn structural_equality_ignores_sharing() {
        let f1 = Formula::finally(Formula::globally(a()));
        let f2 = Formula::finally(Formula::globally(a()));
        assert!(!f1.ptr_eq(&f2));
        assert_eq!(f1, f2);
        assert_eq!(f1.cmp(&f2), Ordering::Equal);
    }

    #[test]
    fn display_parenthesizes_binary_operands() {
        let f = Formula::until(Formula::or(vec![a(), b()]), Formula::next(b()));
        assert_eq!(f.to_string(), "(a | b) U X b");
        let g = Formula::globally(Formula::until(a(), b()));
        assert_eq!(g.to_string(), "G (a U b)");
    }

    #[test]
    fn subformulas_are_deduplicated() {
        let fa = Formula::finally(a());
        let f = Formula::and(vec![fa.clone(), Formula::globally(fa.clone())]);
        let subs = f.subformulas();
        assert_eq!(subs.iter().filter(|s| **s == fa).count(), 1);
        assert_eq!(subs.len(), 4);
    }
}
