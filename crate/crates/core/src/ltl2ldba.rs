//! Translation of LTL formulas into limit-deterministic Büchi automata.
//!
//! The initial component tracks `af(φ, w)` up to propositional equivalence.
//! For every set `G` of G-subformulas there is an accepting subcomponent,
//! the product of a monitor for `φ'[G]` with one monitor per `Gψ ∈ G` for
//! `G(ψ[G])`. Each initial state jumps (by an ε-move) into every subcomponent
//! whose entry state is not already dead.
//!
//! The subcomponents carry a generalized Büchi condition, one set per
//! monitor; a round-robin counter turns it into a plain Büchi condition on
//! transitions. All states whose language is empty are merged into a single
//! dead state.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::automata::{Alphabet, AlphabetTooLarge, Ldba, StateId, DEFAULT_MAX_APS};
use crate::budget::{Budget, BudgetError};
use crate::ltl::{canonicalize, g_subformulas, substitute_gset, After, Class, Clause, Formula, Node};
use crate::word::Letter;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("formula is not in negation normal form")]
    NotNnf,
    #[error(transparent)]
    Alphabet(#[from] AlphabetTooLarge),
    #[error(transparent)]
    Budget(#[from] BudgetError),
    #[error("{0} G-subformulas are too many to enumerate their subsets")]
    TooManyGSubformulas(usize),
}

/// State of the monitor for `G ψ'`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonitorState {
    pub xi1: Class,
    pub xi2: Class,
}

impl MonitorState {
    pub fn initial(psi: &Class) -> Self {
        MonitorState {
            xi1: psi.clone(),
            xi2: Class::tt(),
        }
    }

    fn is_dead(&self) -> bool {
        self.xi1.is_ff() || self.xi2.is_ff()
    }
}

impl fmt::Display for MonitorState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.xi1, self.xi2)
    }
}

/// One step of the monitor for `G psi`. The monitor fires when the pending
/// obligation `xi1` is discharged; the second coordinate collects the
/// obligations started since.
pub fn monitor_step(after: &mut After, psi: &Class, m: &MonitorState, letter: Letter) -> (MonitorState, bool) {
    let next1 = after.step(&m.xi1, letter);
    let next2 = after.step(&m.xi2, letter).and(psi);
    if next1.is_tt() {
        (
            MonitorState {
                xi1: next2,
                xi2: Class::tt(),
            },
            true,
        )
    } else {
        (MonitorState { xi1: next1, xi2: next2 }, false)
    }
}

/// State of the subcomponent for a set of G-subformulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AccState {
    /// Bit `i` is set iff the `i`-th G-subformula (in formula order) is in the
    /// set.
    pub gset: u64,
    pub main: Class,
    pub monitors: Vec<MonitorState>,
    /// Index of the monitor the degeneralization waits for.
    pub counter: usize,
}

/// One step of a subcomponent. `psis[i]` is the formula monitored by
/// `s.monitors[i]`. Monitor `i` counts only when the first coordinate of the
/// source state is `tt`; the step is accepting when the counter wraps
/// around, and with no monitors at all whenever the first coordinate is
/// `tt`.
pub fn acc_step(after: &mut After, psis: &[Class], s: &AccState, letter: Letter) -> (AccState, bool) {
    let main = after.step(&s.main, letter);
    let mut fired = Vec::with_capacity(psis.len());
    let mut monitors = Vec::with_capacity(psis.len());
    for (psi, m) in psis.iter().zip(&s.monitors) {
        let (next, f) = monitor_step(after, psi, m, letter);
        monitors.push(next);
        fired.push(f && s.main.is_tt());
    }
    let n = psis.len();
    let (counter, accepting) = if n == 0 {
        (0, s.main.is_tt())
    } else {
        let mut j = s.counter;
        let mut wrapped = false;
        for _ in 0..n {
            if !fired[j] {
                break;
            }
            j = (j + 1) % n;
            wrapped |= j == 0;
        }
        (j, wrapped)
    };
    (
        AccState {
            gset: s.gset,
            main,
            monitors,
            counter,
        },
        accepting,
    )
}

/// What an automaton state stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StateInfo {
    Initial(Class),
    Accepting(AccState),
    /// The single sink with empty language.
    Dead,
}

/// The automaton built by [`translate`] together with the meaning of its
/// states.
#[derive(Clone, Debug)]
pub struct Translation {
    pub ldba: Ldba,
    pub info: Vec<StateInfo>,
    /// The G-subformulas of the formula, in the order used by
    /// [`AccState::gset`].
    pub g_subformulas: Vec<Formula>,
    /// Interned label conjuncts; the base of a state indexes into this list.
    pub conjuncts: Vec<Clause>,
}

impl Translation {
    pub fn initial_component(&self) -> Vec<StateId> {
        (0..self.info.len())
            .filter(|&q| matches!(self.info[q], StateInfo::Initial(_)))
            .collect()
    }
}

/// Closure of `{φ}` under `af`, modulo propositional equivalence, in
/// breadth-first order; `delta[q][letter]` indexes into the returned states.
pub fn build_initial_component(
    phi: &Formula,
    letters: usize,
    budget: &Budget,
) -> Result<(Vec<Class>, Vec<Vec<usize>>), TranslateError> {
    if !phi.is_nnf() {
        return Err(TranslateError::NotNnf);
    }
    let mut after = After::new();
    let mut states = vec![canonicalize(phi)];
    let mut index: HashMap<Class, usize> = HashMap::from([(states[0].clone(), 0)]);
    let mut delta = Vec::new();
    let mut q = 0;
    while q < states.len() {
        let mut row = Vec::with_capacity(letters);
        for l in 0..letters as Letter {
            let next = after.step(&states[q], l);
            let id = *index.entry(next.clone()).or_insert_with(|| {
                states.push(next);
                states.len() - 1
            });
            row.push(id);
        }
        delta.push(row);
        budget.check(states.len())?;
        q += 1;
    }
    Ok((states, delta))
}

struct Builder {
    ldba: Ldba,
    info: Vec<StateInfo>,
    acc_index: HashMap<AccState, StateId>,
    conjunct_index: HashMap<Clause, u32>,
    conjuncts: Vec<Clause>,
    dead: Option<StateId>,
    letters: usize,
}

impl Builder {
    fn intern_label(&mut self, q: StateId, label: &Class) {
        let mut base: Vec<u32> = label
            .clauses()
            .iter()
            .map(|c| {
                *self.conjunct_index.entry(c.clone()).or_insert_with(|| {
                    self.conjuncts.push(c.clone());
                    (self.conjuncts.len() - 1) as u32
                })
            })
            .collect();
        base.sort_unstable();
        self.ldba.set_label(q, label.to_formula());
        self.ldba.set_base(q, base);
    }

    fn dead(&mut self) -> StateId {
        if let Some(d) = self.dead {
            return d;
        }
        let d = self.ldba.add_state("ff", true);
        for l in 0..self.letters as Letter {
            self.ldba.add_edge(d, l, d, false).expect("valid state");
        }
        self.info.push(StateInfo::Dead);
        self.intern_label(d, &Class::ff());
        self.dead = Some(d);
        d
    }
}

fn acc_name(s: &AccState) -> String {
    let mut name = format!("<{}", s.main);
    for m in &s.monitors {
        name.push_str(&format!(", {m}"));
    }
    name.push('>');
    if s.monitors.len() > 1 {
        name.push_str(&format!(" #{}", s.counter + 1));
    }
    name
}

/// `φ'[G] ∧ ξ11 ∧ ξ21 ∧ ... ∧ G(ψ1[G]) ∧ ...`: the language of the state.
fn acc_label(s: &AccState, psis: &[Class]) -> Class {
    let mut label = s.main.clone();
    for (m, psi) in s.monitors.iter().zip(psis) {
        label = label.and(&m.xi1).and(&m.xi2);
        label = label.and(&canonicalize(&Formula::globally(psi.to_formula())));
    }
    label
}

/// Translates a formula in negation normal form over the propositions
/// `aps` (the table it was parsed against).
pub fn translate(phi: &Formula, aps: &[String], budget: &Budget) -> Result<Translation, TranslateError> {
    translate_with_cap(phi, aps, DEFAULT_MAX_APS, budget)
}

pub fn translate_with_cap(
    phi: &Formula,
    aps: &[String],
    max_aps: usize,
    budget: &Budget,
) -> Result<Translation, TranslateError> {
    if !phi.is_nnf() {
        return Err(TranslateError::NotNnf);
    }
    let alphabet = Alphabet::propositional(aps.to_vec(), max_aps)?;
    let letters = alphabet.size();
    let phi = canonicalize(phi).to_formula();
    let all: BTreeSet<Formula> = g_subformulas(&phi);
    let gs: Vec<Formula> = all.iter().cloned().collect();
    if gs.len() > 16 {
        return Err(TranslateError::TooManyGSubformulas(gs.len()));
    }
    let (init, delta) = build_initial_component(&phi, letters, budget)?;

    let mut b = Builder {
        ldba: Ldba::new(alphabet),
        info: Vec::new(),
        acc_index: HashMap::new(),
        conjunct_index: HashMap::new(),
        conjuncts: Vec::new(),
        dead: None,
        letters,
    };
    for c in &init {
        let q = b.ldba.add_state(c.to_string(), false);
        b.info.push(StateInfo::Initial(c.clone()));
        b.intern_label(q, c);
    }
    for (q, row) in delta.iter().enumerate() {
        for (l, &t) in row.iter().enumerate() {
            b.ldba.add_edge(q, l as Letter, t, false).expect("valid state");
        }
    }

    // ψ[G] for every Gψ ∈ G, per subset G
    let subsets = 1u64 << gs.len();
    let psis: Vec<Vec<Class>> = (0..subsets)
        .map(|mask| {
            let set: BTreeSet<Formula> = gs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, g)| g.clone())
                .collect();
            set.iter()
                .map(|g| match g.node() {
                    Node::Globally(psi) => substitute_gset(psi, &set, &all),
                    _ => unreachable!("G-subformula expected"),
                })
                .collect()
        })
        .collect();

    let mut after = After::new();
    let mut queue: VecDeque<StateId> = VecDeque::new();
    for (q, c) in init.iter().enumerate() {
        let f = c.to_formula();
        for mask in 0..subsets {
            let set: BTreeSet<Formula> = gs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, g)| g.clone())
                .collect();
            let main = substitute_gset(&f, &set, &all);
            let monitors: Vec<MonitorState> = psis[mask as usize].iter().map(MonitorState::initial).collect();
            if main.is_ff() || monitors.iter().any(MonitorState::is_dead) {
                continue;
            }
            let s = AccState {
                gset: mask,
                main,
                monitors,
                counter: 0,
            };
            let target = intern_acc(&mut b, s, &psis[mask as usize], &mut queue);
            b.ldba.add_jump(q, target).expect("valid state");
        }
        budget.check(b.ldba.num_states())?;
    }

    while let Some(q) = queue.pop_front() {
        let StateInfo::Accepting(s) = b.info[q].clone() else {
            unreachable!("only subcomponent states are queued")
        };
        let ps = &psis[s.gset as usize];
        for l in 0..letters as Letter {
            let (next, accepting) = acc_step(&mut after, ps, &s, l);
            let target = if next.main.is_ff() || next.monitors.iter().any(MonitorState::is_dead) {
                b.dead()
            } else {
                intern_acc(&mut b, next, ps, &mut queue)
            };
            let accepting = accepting && b.dead != Some(target);
            b.ldba.add_edge(q, l, target, accepting).expect("valid state");
        }
        budget.check(b.ldba.num_states())?;
    }

    Ok(Translation {
        ldba: b.ldba,
        info: b.info,
        g_subformulas: gs,
        conjuncts: b.conjuncts,
    })
}

fn intern_acc(b: &mut Builder, s: AccState, psis: &[Class], queue: &mut VecDeque<StateId>) -> StateId {
    if let Some(&q) = b.acc_index.get(&s) {
        return q;
    }
    let q = b.ldba.add_state(acc_name(&s), true);
    let label = acc_label(&s, psis);
    b.intern_label(q, &label);
    b.acc_index.insert(s.clone(), q);
    b.info.push(StateInfo::Accepting(s));
    queue.push_back(q);
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{eliminate_jumps, ldba_accepts_lasso, validate_ldba};
    use crate::ltl::{eval_lasso, parse_ltl, to_nnf};
    use crate::word::LassoWord;

    fn setup(text: &str) -> (Formula, Vec<String>) {
        let mut props = Vec::new();
        let f = to_nnf(&parse_ltl(text, &mut props).unwrap()).unwrap();
        (f, props)
    }

    fn class(text: &str, props: &mut Vec<String>) -> Class {
        canonicalize(&to_nnf(&parse_ltl(text, props).unwrap()).unwrap())
    }

    #[test]
    fn monitor_examples() {
        let mut props = vec!["c".to_string(), "a".to_string(), "b".to_string()];
        let psi = class("a | F b", &mut props);
        let fb = class("F b", &mut props);
        let (a, b) = (2, 4);
        let mut after = After::new();
        let start = MonitorState::initial(&psi);
        assert_eq!(monitor_step(&mut after, &psi, &start, a), (start.clone(), true));
        let waiting = MonitorState {
            xi1: fb.clone(),
            xi2: psi.clone(),
        };
        assert_eq!(monitor_step(&mut after, &psi, &start, 0), (waiting.clone(), false));
        assert_eq!(monitor_step(&mut after, &psi, &waiting, b), (start, true));
    }

    #[test]
    fn initial_component_of_tt() {
        let (f, props) = setup("tt");
        let (states, _) = build_initial_component(&f, 1 << props.len(), &Budget::default()).unwrap();
        assert_eq!(states.len(), 1);
    }

    #[test]
    fn translation_is_limit_deterministic() {
        for text in ["c | X G (a | F b)", "F G a | F G b", "G F a", "a U b", "G (a -> F b)"] {
            let (f, props) = setup(text);
            let t = translate(&f, &props, &Budget::default()).unwrap();
            assert!(validate_ldba(&t.ldba).is_empty(), "{text}");
            let a = eliminate_jumps(&t.ldba).unwrap();
            assert!(validate_ldba(&a).is_empty(), "{text}");
            assert!(a.is_initial_deterministic(), "{text}");
        }
    }

    #[test]
    fn language_matches_semantics() {
        for text in [
            "c | X G (a | F b)",
            "F G a | F G b",
            "G F a & F G b",
            "a U (b | G a)",
            "tt",
            "ff",
        ] {
            let (f, props) = setup(text);
            let t = translate(&f, &props, &Budget::default()).unwrap();
            let a = eliminate_jumps(&t.ldba).unwrap();
            for w in LassoWord::enumerate(a.alphabet().size(), 2, 2) {
                assert_eq!(
                    ldba_accepts_lasso(&a, &w, a.initial()).unwrap(),
                    eval_lasso(&f, &w),
                    "{text} on {w}"
                );
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let (f, props) = setup("G F a & G F b & F G c");
        let err = translate(&f, &props, &Budget::new(3)).unwrap_err();
        assert_eq!(err, TranslateError::Budget(BudgetError::Exceeded(3)));
    }
}
