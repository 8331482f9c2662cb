//! Determinization of LDBAs into deterministic parity automata.
//!
//! A DPA state is a ranking state `(s, t)`: the set `s` of reached states
//! outside `Q_d` and the sequence `t` of reached states of `Q_d`, ranked by
//! their position. On each letter the continuing states of `t` keep the
//! order of their least predecessor and newly entered states of `Q_d`
//! follow in the order of a fixed [`StateOrder`]. The color reports the
//! smallest index whose run visited an accepting transition (even) or
//! merged into a run of smaller index (odd).

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::automata::{validate_ldba, Color, Diagnostic, Dpa, Ldba, StateId, StateOrder};
use crate::budget::{Budget, BudgetError};
use crate::ltl::{canonicalize, classify_fragment, to_nnf, Formula, Fragment, Node};
use crate::oracle::{RedirectPolicy, ReduceOptions, RedundancyOracle};
use crate::word::Letter;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DeterminizeError {
    #[error("automaton still has jumps")]
    HasJumps,
    #[error("automaton is not limit-deterministic: {}", .0.first().map(ToString::to_string).unwrap_or_default())]
    NotLimitDeterministic(Vec<Diagnostic>),
    #[error(transparent)]
    Budget(#[from] BudgetError),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RankingState {
    /// Reached states outside `Q_d`, sorted.
    pub s: Vec<StateId>,
    /// Reached states of `Q_d` by increasing index.
    pub t: Vec<StateId>,
}

impl RankingState {
    pub fn index(&self, q: StateId) -> Option<usize> {
        self.t.iter().position(|&p| p == q).map(|k| k + 1)
    }

    pub fn display<'a>(&'a self, a: &'a Ldba) -> impl fmt::Display + 'a {
        struct D<'a>(&'a RankingState, &'a Ldba);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let names = |v: &[StateId], sep: &str| v.iter().map(|&q| self.1.name(q)).collect::<Vec<_>>().join(sep);
                write!(f, "{{{}}},[{}]", names(&self.0.s, ","), names(&self.0.t, "<"))
            }
        }
        D(self, a)
    }
}

pub fn initial_ranking(a: &Ldba) -> RankingState {
    RankingState {
        s: vec![a.initial()],
        t: Vec::new(),
    }
}

/// One transition of the plain construction.
pub fn ranking_step(a: &Ldba, ord: &StateOrder, r: &RankingState, letter: Letter) -> (RankingState, Color) {
    step(a, ord, r, letter, None)
}

/// One transition of the reduced construction: after ranking, entries the
/// oracle reports as redundant behind the entries before them are dropped.
pub fn reduced_ranking_step(
    a: &Ldba,
    ord: &StateOrder,
    oracle: &dyn RedundancyOracle,
    options: ReduceOptions,
    r: &RankingState,
    letter: Letter,
) -> (RankingState, Color) {
    step(a, ord, r, letter, Some((oracle, options)))
}

type Reduction<'a> = Option<(&'a dyn RedundancyOracle, ReduceOptions)>;

fn step(
    a: &Ldba,
    ord: &StateOrder,
    r: &RankingState,
    letter: Letter,
    reduction: Reduction<'_>,
) -> (RankingState, Color) {
    let mut s2 = BTreeSet::new();
    let mut entered = BTreeSet::new();
    for &q in &r.s {
        for e in a.edges(q, letter) {
            if a.in_qd(e.target) {
                entered.insert(e.target);
            } else {
                s2.insert(e.target);
            }
        }
    }
    let mut t2: Vec<StateId> = Vec::with_capacity(r.t.len() + entered.len());
    let mut succ = Vec::with_capacity(r.t.len());
    for &q in &r.t {
        let e = a.det_edge(q, letter).expect("Q_d is deterministic and total");
        let pos = match t2.iter().position(|&p| p == e.target) {
            Some(pos) => pos,
            None => {
                t2.push(e.target);
                t2.len() - 1
            }
        };
        succ.push((pos, e.accepting));
    }
    let mut fresh: Vec<StateId> = entered.into_iter().filter(|q| !t2.contains(q)).collect();
    fresh.sort_by_key(|&q| ord.rank(q));
    t2.extend(fresh);

    // new_index[pos] is the 1-based index after reduction, if kept
    let mut redirect = RedirectPolicy::Merge;
    let new_index: Vec<Option<usize>> = match reduction {
        None => (1..=t2.len()).map(Some).collect(),
        Some((oracle, options)) => {
            redirect = options.redirect;
            let mut n = 0;
            oracle
                .reduce(&t2, options)
                .into_iter()
                .map(|keep| {
                    n += keep as usize;
                    keep.then_some(n)
                })
                .collect()
        }
    };
    let kept: Vec<StateId> = t2
        .iter()
        .zip(&new_index)
        .filter(|(_, i)| i.is_some())
        .map(|(&q, _)| q)
        .collect();

    let mut color = 2 * a.qd_count() as Color + 1;
    for (k, &(pos, accepting)) in succ.iter().enumerate() {
        let k = k + 1;
        let (dec, acc) = match new_index[pos] {
            Some(j) => (j < k, accepting),
            None => match redirect {
                RedirectPolicy::Merge => (true, false),
                RedirectPolicy::Literal => (!kept.is_empty() && k > 1, false),
            },
        };
        if acc {
            color = color.min(2 * k as Color);
        }
        if dec {
            color = color.min(2 * k as Color - 1);
        }
    }
    (
        RankingState {
            s: s2.into_iter().collect(),
            t: kept,
        },
        color,
    )
}

/// A DPA together with the ranking state behind each of its states.
#[derive(Clone, Debug)]
pub struct Determinization {
    pub dpa: Dpa,
    pub rankings: Vec<RankingState>,
}

impl Determinization {
    /// Longest ranked sequence over all states.
    pub fn max_t(&self) -> usize {
        self.rankings.iter().map(|r| r.t.len()).max().unwrap_or(0)
    }

    pub fn max_s(&self) -> usize {
        self.rankings.iter().map(|r| r.s.len()).max().unwrap_or(0)
    }
}

pub fn construct_dpa(a: &Ldba, ord: &StateOrder, budget: &Budget) -> Result<Determinization, DeterminizeError> {
    construct(a, ord, None, budget)
}

pub fn construct_reduced_dpa(
    a: &Ldba,
    ord: &StateOrder,
    oracle: &dyn RedundancyOracle,
    options: ReduceOptions,
    budget: &Budget,
) -> Result<Determinization, DeterminizeError> {
    construct(a, ord, Some((oracle, options)), budget)
}

fn construct(
    a: &Ldba,
    ord: &StateOrder,
    reduction: Reduction<'_>,
    budget: &Budget,
) -> Result<Determinization, DeterminizeError> {
    if a.has_jumps() {
        return Err(DeterminizeError::HasJumps);
    }
    let diagnostics = validate_ldba(a);
    if !diagnostics.is_empty() {
        return Err(DeterminizeError::NotLimitDeterministic(diagnostics));
    }
    let letters = a.alphabet().size();
    let mut rankings = vec![initial_ranking(a)];
    let mut index: HashMap<RankingState, usize> = HashMap::from([(rankings[0].clone(), 0)]);
    let mut edges: Vec<Vec<(usize, Color)>> = Vec::new();
    let mut queue = VecDeque::from([0]);
    while let Some(q) = queue.pop_front() {
        let mut row = Vec::with_capacity(letters);
        for l in a.alphabet().letters() {
            let (next, color) = step(a, ord, &rankings[q], l, reduction);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    rankings.push(next.clone());
                    index.insert(next, rankings.len() - 1);
                    queue.push_back(rankings.len() - 1);
                    rankings.len() - 1
                }
            };
            row.push((id, color));
        }
        if edges.len() <= q {
            edges.resize(q + 1, Vec::new());
        }
        edges[q] = row;
        budget.check(rankings.len())?;
    }
    let names = rankings.iter().map(|r| r.display(a).to_string()).collect();
    let dpa = Dpa::new(a.alphabet().clone(), 0, edges, names, 2 * a.qd_count() as Color + 1);
    Ok(Determinization { dpa, rankings })
}

/// Outcome of comparing the widest ranking of a reduced DPA with the number
/// of base languages.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WidthReport {
    pub max_t: usize,
    /// Number of base languages; `None` when the oracle has no base.
    pub m: Option<usize>,
    /// `m + 1`, the bound on `max_t`.
    pub bound: Option<usize>,
    pub holds: bool,
}

pub fn width_check(oracle: &dyn RedundancyOracle, reduced: &Determinization) -> WidthReport {
    let max_t = reduced.max_t();
    let m = oracle.base_size();
    let bound = m.map(|m| m + 1);
    WidthReport {
        max_t,
        m,
        bound,
        holds: bound.is_none_or(|b| max_t <= b),
    }
}

/// Upper bound on the number of ranking states: `2^n_bar` choices of `s`
/// times the number of duplicate-free sequences over `n_d` states. `None` on
/// overflow.
pub fn size_bound(n_bar: usize, n_d: usize) -> Option<u128> {
    let mut sequences: u128 = 0;
    let mut term: u128 = 1;
    for i in 0..=n_d {
        sequences = sequences.checked_add(term)?;
        term = term.checked_mul((n_d - i) as u128)?;
    }
    1u128
        .checked_shl(n_bar as u32)
        .filter(|_| n_bar < 128)?
        .checked_mul(sequences)
}

/// Ranks states of `Q_d` whose label is a pure eventuality first and those
/// whose label is a pure `X`-safety formula last, keeping state ids as the
/// tie-break. Top-level `G`-conjuncts of a label are ignored, as they hold
/// for every state of a subcomponent. Unlabeled states count as neither.
pub fn choose_ord(a: &Ldba) -> StateOrder {
    let mut seq: Vec<(u8, StateId)> = a
        .qd_states()
        .map(|q| {
            let key = match a.label(q).map(label_fragment) {
                Some(Fragment::PureEventual) => 0,
                Some(Fragment::XSafety) => 2,
                _ => 1,
            };
            (key, q)
        })
        .collect();
    seq.sort();
    let seq: Vec<StateId> = seq.into_iter().map(|(_, q)| q).collect();
    StateOrder::from_sequence(a, &seq).expect("permutation of Q_d")
}

/// `choose_ord` with a seed: a uniformly random order instead.
pub fn random_ord<R: Rng>(a: &Ldba, rng: &mut R) -> StateOrder {
    StateOrder::random(a, rng)
}

fn label_fragment(label: &Formula) -> Fragment {
    let Ok(f) = to_nnf(label) else {
        return Fragment::Other;
    };
    let class = canonicalize(&f);
    if class.is_ff() {
        return Fragment::XSafety;
    }
    let clauses: Vec<Formula> = class
        .clauses()
        .iter()
        .map(|c| {
            let rest: Vec<Formula> = c
                .iter()
                .filter(|g| !matches!(g.node(), Node::Globally(_)))
                .cloned()
                .collect();
            match rest.len() {
                0 => Formula::tt(),
                1 => rest[0].clone(),
                _ => Formula::and(rest),
            }
        })
        .collect();
    if clauses.iter().any(Formula::is_true) {
        // only G-obligations remain, which never fail once the guess is right
        return Fragment::PureEventual;
    }
    classify_fragment(&Formula::or(clauses))
}
