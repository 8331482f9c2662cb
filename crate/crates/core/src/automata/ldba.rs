//! Limit-deterministic Büchi automata with transition-based acceptance.

use std::collections::HashMap;
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use thiserror::Error;

use super::alphabet::Alphabet;
use crate::ltl::Formula;
use crate::word::{LassoWord, Letter, WordError};

pub type StateId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub target: StateId,
    pub accepting: bool,
}

#[derive(Clone, Debug)]
struct State {
    name: String,
    in_qd: bool,
    edges: Vec<Vec<Edge>>,
    jumps: Vec<StateId>,
    label: Option<Formula>,
    base: Option<Vec<u32>>,
}

/// A Büchi automaton together with a designated set `Q_d` of states.
///
/// The builder accepts any structure; [`validate_ldba`] reports the
/// violations of limit determinism. Jumps are ε-moves from outside `Q_d`
/// into `Q_d` and are removed by [`eliminate_jumps`] before any
/// determinization.
#[derive(Clone, Debug)]
pub struct Ldba {
    alphabet: Alphabet,
    initial: StateId,
    states: Vec<State>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LdbaError {
    #[error("jump from {from} leads to {to}, which is outside Q_d")]
    JumpOutsideQd { from: String, to: String },
    #[error("state {0} does not exist")]
    NoSuchState(StateId),
    #[error("letter {letter} is outside the alphabet of size {size}")]
    NoSuchLetter { letter: Letter, size: usize },
}

impl Ldba {
    pub fn new(alphabet: Alphabet) -> Self {
        Ldba {
            alphabet,
            initial: 0,
            states: Vec::new(),
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>, in_qd: bool) -> StateId {
        self.states.push(State {
            name: name.into(),
            in_qd,
            edges: vec![Vec::new(); self.alphabet.size()],
            jumps: Vec::new(),
            label: None,
            base: None,
        });
        self.states.len() - 1
    }

    fn check(&self, q: StateId) -> Result<(), LdbaError> {
        if q < self.states.len() {
            Ok(())
        } else {
            Err(LdbaError::NoSuchState(q))
        }
    }

    /// Adds `from -letter-> to`; adding an existing transition again only
    /// updates its acceptance to the disjunction of both.
    pub fn add_edge(&mut self, from: StateId, letter: Letter, to: StateId, accepting: bool) -> Result<(), LdbaError> {
        self.check(from)?;
        self.check(to)?;
        let size = self.alphabet.size();
        let edges = self.states[from]
            .edges
            .get_mut(letter as usize)
            .ok_or(LdbaError::NoSuchLetter { letter, size })?;
        match edges.iter_mut().find(|e| e.target == to) {
            Some(e) => e.accepting |= accepting,
            None => {
                edges.push(Edge { target: to, accepting });
                edges.sort();
            }
        }
        Ok(())
    }

    pub fn add_jump(&mut self, from: StateId, to: StateId) -> Result<(), LdbaError> {
        self.check(from)?;
        self.check(to)?;
        let jumps = &mut self.states[from].jumps;
        if let Err(pos) = jumps.binary_search(&to) {
            jumps.insert(pos, to);
        }
        Ok(())
    }

    pub fn set_initial(&mut self, q: StateId) -> Result<(), LdbaError> {
        self.check(q)?;
        self.initial = q;
        Ok(())
    }

    pub fn set_label(&mut self, q: StateId, label: Formula) {
        self.states[q].label = Some(label);
    }

    pub fn set_base(&mut self, q: StateId, base: Vec<u32>) {
        self.states[q].base = Some(base);
    }

    pub fn set_name(&mut self, q: StateId, name: impl Into<String>) {
        self.states[q].name = name.into();
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.states.len()
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.states[q].name
    }

    pub fn in_qd(&self, q: StateId) -> bool {
        self.states[q].in_qd
    }

    pub fn qd_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states().filter(|&q| self.in_qd(q))
    }

    pub fn qd_count(&self) -> usize {
        self.states.iter().filter(|s| s.in_qd).count()
    }

    pub fn edges(&self, q: StateId, letter: Letter) -> &[Edge] {
        &self.states[q].edges[letter as usize]
    }

    /// The unique successor of a state of `Q_d`.
    pub fn det_edge(&self, q: StateId, letter: Letter) -> Option<Edge> {
        self.states[q].edges[letter as usize].first().copied()
    }

    pub fn jumps(&self, q: StateId) -> &[StateId] {
        &self.states[q].jumps
    }

    pub fn has_jumps(&self) -> bool {
        self.states.iter().any(|s| !s.jumps.is_empty())
    }

    pub fn label(&self, q: StateId) -> Option<&Formula> {
        self.states[q].label.as_ref()
    }

    pub fn base(&self, q: StateId) -> Option<&[u32]> {
        self.states[q].base.as_deref()
    }

    pub fn num_edges(&self) -> usize {
        self.states
            .iter()
            .map(|s| s.edges.iter().map(Vec::len).sum::<usize>())
            .sum()
    }

    /// Whether the transitions among states outside `Q_d` are deterministic.
    pub fn is_initial_deterministic(&self) -> bool {
        self.states().filter(|&q| !self.in_qd(q)).all(|q| {
            self.alphabet
                .letters()
                .all(|l| self.edges(q, l).iter().filter(|e| !self.in_qd(e.target)).count() <= 1)
        })
    }
}

/// A violation of limit determinism, naming the offending state or
/// transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    AcceptingOutsideQd {
        from: String,
        letter: String,
        to: String,
    },
    NondeterministicInQd {
        state: String,
        letter: String,
        targets: Vec<String>,
    },
    QdNotClosed {
        from: String,
        letter: String,
        to: String,
    },
    Incomplete {
        state: String,
        letter: String,
    },
    InitialInQd {
        state: String,
    },
    JumpNotIntoQd {
        from: String,
        to: String,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::AcceptingOutsideQd { from, letter, to } => {
                write!(f, "accepting transition {from} -{letter}-> {to} is not inside Q_d")
            }
            Diagnostic::NondeterministicInQd { state, letter, targets } => write!(
                f,
                "state {state} of Q_d has {} successors on {letter}: {}",
                targets.len(),
                targets.join(", ")
            ),
            Diagnostic::QdNotClosed { from, letter, to } => {
                write!(f, "transition {from} -{letter}-> {to} leaves Q_d")
            }
            Diagnostic::Incomplete { state, letter } => {
                write!(f, "state {state} has no successor on {letter}")
            }
            Diagnostic::InitialInQd { state } => write!(f, "initial state {state} is in Q_d"),
            Diagnostic::JumpNotIntoQd { from, to } => {
                write!(f, "jump {from} -> {to} does not go from outside Q_d into Q_d")
            }
        }
    }
}

/// Lists every violation of the limit-determinism conditions: accepting
/// transitions inside `Q_d`, determinism inside `Q_d`, `Q_d` a trap, a total
/// transition relation and an initial state outside `Q_d`.
pub fn validate_ldba(a: &Ldba) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let name = |q: StateId| a.name(q).to_string();
    if a.in_qd(a.initial()) {
        out.push(Diagnostic::InitialInQd {
            state: name(a.initial()),
        });
    }
    for q in a.states() {
        for l in a.alphabet().letters() {
            let letter = a.alphabet().letter_name(l);
            let edges = a.edges(q, l);
            if edges.is_empty() && a.jumps(q).is_empty() {
                out.push(Diagnostic::Incomplete {
                    state: name(q),
                    letter: letter.clone(),
                });
            }
            if a.in_qd(q) && edges.len() > 1 {
                out.push(Diagnostic::NondeterministicInQd {
                    state: name(q),
                    letter: letter.clone(),
                    targets: edges.iter().map(|e| name(e.target)).collect(),
                });
            }
            for e in edges {
                if e.accepting && !(a.in_qd(q) && a.in_qd(e.target)) {
                    out.push(Diagnostic::AcceptingOutsideQd {
                        from: name(q),
                        letter: letter.clone(),
                        to: name(e.target),
                    });
                }
                if a.in_qd(q) && !a.in_qd(e.target) {
                    out.push(Diagnostic::QdNotClosed {
                        from: name(q),
                        letter: letter.clone(),
                        to: name(e.target),
                    });
                }
            }
        }
        for &p in a.jumps(q) {
            if a.in_qd(q) || !a.in_qd(p) {
                out.push(Diagnostic::JumpNotIntoQd {
                    from: name(q),
                    to: name(p),
                });
            }
        }
    }
    out
}

/// Folds every jump into letter transitions: for a jump `q -> p` and a
/// letter `σ`, `q` gets a non-accepting `σ`-transition to the successor of
/// `p`. A run `q ε p σ r` becomes `q σ r`, losing at most one accepting
/// transition, so the language is unchanged.
pub fn eliminate_jumps(a: &Ldba) -> Result<Ldba, LdbaError> {
    let mut out = a.clone();
    for q in a.states() {
        for &p in a.jumps(q) {
            if !a.in_qd(p) || a.in_qd(q) {
                return Err(LdbaError::JumpOutsideQd {
                    from: a.name(q).to_string(),
                    to: a.name(p).to_string(),
                });
            }
            for l in a.alphabet().letters() {
                for e in a.edges(p, l) {
                    out.add_edge(q, l, e.target, false)?;
                }
            }
        }
        out.states[q].jumps.clear();
    }
    Ok(out)
}

/// Whether `a` accepts `w` starting from `from`.
///
/// Searches the product of `a` with the lasso graph of `w` for a reachable
/// strongly connected component that contains an accepting transition.
/// Jumps are ignored; eliminate them first.
pub fn ldba_accepts_lasso(a: &Ldba, w: &LassoWord, from: StateId) -> Result<bool, WordError> {
    w.check_alphabet(a.alphabet().size())?;
    let mut graph: DiGraph<(), bool> = DiGraph::new();
    let mut index: HashMap<(StateId, usize), NodeIndex> = HashMap::new();
    let start = graph.add_node(());
    index.insert((from, 0), start);
    let mut stack = vec![(from, 0)];
    while let Some((q, pos)) = stack.pop() {
        let src = index[&(q, pos)];
        let next = w.succ(pos);
        for e in a.edges(q, w.letter_at(pos)) {
            let dst = *index.entry((e.target, next)).or_insert_with(|| {
                stack.push((e.target, next));
                graph.add_node(())
            });
            graph.add_edge(src, dst, e.accepting);
        }
    }
    let mut component = vec![usize::MAX; graph.node_count()];
    for (i, scc) in tarjan_scc(&graph).into_iter().enumerate() {
        for n in scc {
            component[n.index()] = i;
        }
    }
    Ok(graph
        .raw_edges()
        .iter()
        .any(|e| e.weight && component[e.source().index()] == component[e.target().index()]))
}
