//! Cross-validation of every stage on lasso words.
//!
//! For each lasso the following must agree: the LTL semantics (when the
//! source is a formula), acceptance by the LDBA, the parity of the color
//! summary of the plain and of the reduced run DAG, and acceptance by the
//! plain, reduced and color-compressed DPAs.
//!
//! Exhaustive checks reuse work across words. Prefixes are enumerated once
//! together with the DPA states, LDBA states and run-DAG levels they lead
//! to; per period, the verdict from each of those is tabulated, and the LTL
//! semantics is extended backwards from the period one prefix letter at a
//! time.

use std::collections::{BTreeSet, HashMap};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{PipelineConfig, PipelineError};
use crate::automata::{eliminate_jumps, ldba_accepts_lasso, Dpa, Ldba, StateId, StateOrder};
use crate::budget::Budget;
use crate::ldba2dpa::{construct_dpa, construct_reduced_dpa};
use crate::ltl::{Formula, LassoEvaluator};
use crate::ltl2ldba::translate_with_cap;
use crate::oracle::{lenient_oracle, syntactic_oracle, BaseOracle, ReduceOptions};
use crate::run_dag::{advance, color_summary, period_summary_from, reduced_color_summary, Level, Reduction};
use crate::word::{LassoWord, Letter};

/// Everything that is checked, built once.
#[derive(Clone, Debug)]
pub struct Artifacts {
    pub formula: Option<Formula>,
    /// Jump-free.
    pub ldba: Ldba,
    pub ord: StateOrder,
    pub oracle: BaseOracle,
    pub options: ReduceOptions,
    pub plain: Dpa,
    pub reduced: Dpa,
    pub compressed: Dpa,
}

impl Artifacts {
    pub fn from_formula(f: &Formula, aps: &[String], cfg: &PipelineConfig) -> Result<Self, PipelineError> {
        let t = translate_with_cap(f, aps, cfg.max_aps, &Budget::new(cfg.max_ldba_states))?;
        let a = eliminate_jumps(&t.ldba)?;
        let oracle = syntactic_oracle(&a)?;
        Self::build(Some(f.clone()), a, oracle, cfg)
    }

    /// For an automaton without a formula; labels are used where present.
    pub fn from_ldba(a: &Ldba, cfg: &PipelineConfig) -> Result<Self, PipelineError> {
        let a = eliminate_jumps(a)?;
        let oracle = lenient_oracle(&a);
        Self::build(None, a, oracle, cfg)
    }

    /// With an explicit order and oracle.
    pub fn with_oracle(
        formula: Option<Formula>,
        a: &Ldba,
        ord: StateOrder,
        oracle: BaseOracle,
        cfg: &PipelineConfig,
    ) -> Result<Self, PipelineError> {
        let a = eliminate_jumps(a)?;
        let budget = Budget::new(cfg.max_dpa_states);
        let options = cfg.reduce_options();
        let plain = construct_dpa(&a, &ord, &budget)?.dpa;
        let reduced = construct_reduced_dpa(&a, &ord, &oracle, options, &budget)?.dpa;
        let compressed = reduced.compress();
        Ok(Artifacts {
            formula,
            ldba: a,
            ord,
            oracle,
            options,
            plain,
            reduced,
            compressed,
        })
    }

    fn build(
        formula: Option<Formula>,
        a: Ldba,
        oracle: BaseOracle,
        cfg: &PipelineConfig,
    ) -> Result<Self, PipelineError> {
        let ord = cfg.ord(&a);
        Self::with_oracle(formula, &a, ord, oracle, cfg)
    }

    fn reduction(&self) -> Reduction<'_> {
        Some((&self.oracle, self.options))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CheckBounds {
    pub max_prefix: usize,
    pub max_period: usize,
    /// Check this many random lassos instead of all of them.
    pub samples: Option<usize>,
    pub seed: u64,
}

impl Default for CheckBounds {
    fn default() -> Self {
        CheckBounds {
            max_prefix: 3,
            max_period: 3,
            samples: None,
            seed: 0,
        }
    }
}

/// One oracle's answer on a word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub oracle: &'static str,
    pub accepts: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub word: String,
    pub prefix: Vec<Letter>,
    pub period: Vec<Letter>,
    pub verdicts: Vec<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub words: u64,
    pub counterexample: Option<Counterexample>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.counterexample.is_none()
    }
}

const NAMES: [&str; 7] = [
    "ltl",
    "ldba",
    "run-dag",
    "reduced-dag",
    "dpa",
    "reduced-dpa",
    "compressed-dpa",
];

fn verdicts(values: [Option<bool>; 7]) -> Option<Vec<Verdict>> {
    let present: Vec<Verdict> = NAMES
        .iter()
        .zip(values)
        .filter_map(|(&oracle, v)| v.map(|accepts| Verdict { oracle, accepts }))
        .collect();
    let disagree = present.windows(2).any(|p| p[0].accepts != p[1].accepts);
    disagree.then_some(present)
}

fn counterexample(w: &LassoWord, verdicts: Vec<Verdict>) -> Counterexample {
    Counterexample {
        word: w.to_string(),
        prefix: w.prefix().to_vec(),
        period: w.period().to_vec(),
        verdicts,
    }
}

/// Checks all lassos within the bounds (or a random sample of them) and
/// stops at the first disagreement.
pub fn crossvalidate(art: &Artifacts, bounds: &CheckBounds) -> Report {
    match bounds.samples {
        Some(n) => sampled(art, bounds, n),
        None => exhaustive(art, bounds),
    }
}

fn sampled(art: &Artifacts, bounds: &CheckBounds, n: usize) -> Report {
    let letters = art.ldba.alphabet().size();
    let eval = art.formula.as_ref().map(LassoEvaluator::new);
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    for i in 0..n {
        let w = LassoWord::random(&mut rng, letters, bounds.max_prefix, bounds.max_period.max(1));
        let a = &art.ldba;
        let values = [
            eval.as_ref().map(|e| e.eval(&w)),
            Some(ldba_accepts_lasso(a, &w, a.initial()).expect("word over the alphabet")),
            Some(color_summary(a, &art.ord, &w).is_multiple_of(2)),
            Some(reduced_color_summary(a, &art.ord, &art.oracle, art.options, &w).is_multiple_of(2)),
            Some(art.plain.accepts_lasso(&w).expect("word over the alphabet")),
            Some(art.reduced.accepts_lasso(&w).expect("word over the alphabet")),
            Some(art.compressed.accepts_lasso(&w).expect("word over the alphabet")),
        ];
        if let Some(v) = verdicts(values) {
            return Report {
                words: i as u64 + 1,
                counterexample: Some(counterexample(&w, v)),
            };
        }
    }
    Report {
        words: n as u64,
        counterexample: None,
    }
}

/// What a prefix leads to.
struct PrefixInfo {
    word: Vec<Letter>,
    /// Index into the interned LDBA state sets.
    states: usize,
    dpa: [usize; 3],
    /// Indices into the interned plain and reduced levels.
    levels: [usize; 2],
    /// Position of `word[1..]` in the prefix list, for extending the LTL
    /// semantics backwards.
    tail: usize,
}

struct Interner<T> {
    items: Vec<T>,
    index: HashMap<T, usize>,
}

impl<T: Clone + Eq + std::hash::Hash> Interner<T> {
    fn new() -> Self {
        Interner {
            items: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn intern(&mut self, x: T) -> usize {
        if let Some(&i) = self.index.get(&x) {
            return i;
        }
        self.items.push(x.clone());
        self.index.insert(x, self.items.len() - 1);
        self.items.len() - 1
    }
}

fn all_words(letters: usize, max_len: usize, min_len: usize) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for len in 0..=max_len {
        if len >= min_len {
            out.extend(layer.iter().cloned());
        }
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..letters as Letter).map(move |l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
    }
    out
}

fn exhaustive(art: &Artifacts, bounds: &CheckBounds) -> Report {
    let a = &art.ldba;
    let letters = a.alphabet().size();
    let dpas = [&art.plain, &art.reduced, &art.compressed];

    // prefixes in order of length, so the tail of each comes earlier
    let mut prefixes: Vec<PrefixInfo> = Vec::new();
    let mut by_word: HashMap<Vec<Letter>, usize> = HashMap::new();
    let mut state_sets: Interner<Vec<StateId>> = Interner::new();
    let mut levels: [Interner<Level>; 2] = [Interner::new(), Interner::new()];
    for word in all_words(letters, bounds.max_prefix, 0) {
        let info = match word.split_last() {
            None => PrefixInfo {
                word: Vec::new(),
                states: state_sets.intern(vec![a.initial()]),
                dpa: dpas.map(|d| d.initial()),
                levels: [levels[0].intern(Level::initial(a)), levels[1].intern(Level::initial(a))],
                tail: 0,
            },
            Some((&l, init)) => {
                let parent = &prefixes[by_word[init]];
                let states: BTreeSet<StateId> = state_sets.items[parent.states]
                    .iter()
                    .flat_map(|&q| a.edges(q, l).iter().map(|e| e.target))
                    .collect();
                let mut next_levels = [0; 2];
                for (k, reduction) in [None, art.reduction()].into_iter().enumerate() {
                    let level = advance(a, &art.ord, &levels[k].items[parent.levels[k]], l, reduction);
                    next_levels[k] = levels[k].intern(Level {
                        removed: Vec::new(),
                        ..level
                    });
                }
                PrefixInfo {
                    word: word.clone(),
                    states: state_sets.intern(states.into_iter().collect()),
                    dpa: [0, 1, 2].map(|k| dpas[k].step(parent.dpa[k], l).0),
                    levels: next_levels,
                    tail: by_word[&word[1..]],
                }
            }
        };
        by_word.insert(word, prefixes.len());
        prefixes.push(info);
    }

    let eval = art.formula.as_ref().map(LassoEvaluator::new);
    let mut words = 0u64;
    for period in all_words(letters, bounds.max_period, 1) {
        let ldba_from = accepting_from(a, &period);
        let mut dpa_memo: [Vec<Option<bool>>; 3] = dpas.map(|d| vec![None; d.num_states()]);
        let mut dag_memo: [Vec<Option<bool>>; 2] =
            [vec![None; levels[0].items.len()], vec![None; levels[1].items.len()]];
        let mut truth: Vec<Vec<bool>> = Vec::with_capacity(prefixes.len());
        for p in &prefixes {
            let ltl = eval.as_ref().map(|e| {
                let vals = match p.word.first() {
                    None => e.on_period(&period),
                    Some(&l) => e.prepend(l, &truth[p.tail]),
                };
                let root = e.root(&vals);
                truth.push(vals);
                root
            });
            let ldba = state_sets.items[p.states].iter().any(|&q| ldba_from[q]);
            let mut dag = [false; 2];
            for (k, reduction) in [None, art.reduction()].into_iter().enumerate() {
                let id = p.levels[k];
                dag[k] = *dag_memo[k][id].get_or_insert_with(|| {
                    period_summary_from(a, &art.ord, &levels[k].items[id], &period, reduction).is_multiple_of(2)
                });
            }
            let mut dpa = [false; 3];
            for k in 0..3 {
                let q = p.dpa[k];
                dpa[k] = *dpa_memo[k][q].get_or_insert_with(|| dpas[k].period_summary(q, &period).is_multiple_of(2));
            }
            words += 1;
            let values = [
                ltl,
                Some(ldba),
                Some(dag[0]),
                Some(dag[1]),
                Some(dpa[0]),
                Some(dpa[1]),
                Some(dpa[2]),
            ];
            if let Some(v) = verdicts(values) {
                let w = LassoWord::new(p.word.clone(), period.clone()).expect("nonempty period");
                return Report {
                    words,
                    counterexample: Some(counterexample(&w, v)),
                };
            }
        }
    }
    Report {
        words,
        counterexample: None,
    }
}

/// For every state `q`, whether `a` accepts `period^ω` from `q`: some
/// strongly connected component with an accepting edge is reachable in the
/// product with the period.
fn accepting_from(a: &Ldba, period: &[Letter]) -> Vec<bool> {
    let n = period.len();
    let mut graph: DiGraph<(), bool> = DiGraph::with_capacity(a.num_states() * n, 0);
    let node = |q: StateId, pos: usize| NodeIndex::new(q * n + pos);
    for _ in 0..a.num_states() * n {
        graph.add_node(());
    }
    for q in a.states() {
        for (pos, &l) in period.iter().enumerate() {
            for e in a.edges(q, l) {
                graph.add_edge(node(q, pos), node(e.target, (pos + 1) % n), e.accepting);
            }
        }
    }
    // components come out with successors first
    let sccs = tarjan_scc(&graph);
    let mut component = vec![0; graph.node_count()];
    for (i, scc) in sccs.iter().enumerate() {
        for v in scc {
            component[v.index()] = i;
        }
    }
    let mut good = vec![false; sccs.len()];
    for (i, scc) in sccs.iter().enumerate() {
        for &v in scc {
            for e in graph.edges(v) {
                use petgraph::visit::EdgeRef;
                let c = component[e.target().index()];
                if (c == i && *e.weight()) || (c != i && good[c]) {
                    good[i] = true;
                }
            }
        }
    }
    a.states().map(|q| good[component[node(q, 0).index()]]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{parse_formula, rand_ldba, RandomLdba};

    #[test]
    fn formulas_agree() {
        for text in ["F G a | F G b", "G (a -> X b)", "a U (b | G a)", "G F a & F G !b"] {
            let (f, aps) = parse_formula(text).unwrap();
            let art = Artifacts::from_formula(&f, &aps, &PipelineConfig::default()).unwrap();
            let report = crossvalidate(&art, &CheckBounds::default());
            assert!(report.ok(), "{text}: {:?}", report.counterexample);
            assert_eq!(report.words, LassoWord::count(4, 3, 3) as u64);
        }
    }

    #[test]
    fn product_table_matches_direct_search() {
        for seed in 0..30 {
            let a = rand_ldba(seed, &RandomLdba::default());
            for period in all_words(2, 3, 1) {
                let table = accepting_from(&a, &period);
                for q in a.states() {
                    let w = LassoWord::new(Vec::new(), period.clone()).unwrap();
                    assert_eq!(table[q], ldba_accepts_lasso(&a, &w, q).unwrap());
                }
            }
        }
    }

    #[test]
    fn sampling_and_fault_injection() {
        let (f, aps) = parse_formula("F G a | F G b").unwrap();
        let mut art = Artifacts::from_formula(&f, &aps, &PipelineConfig::default()).unwrap();
        let bounds = CheckBounds {
            samples: Some(300),
            ..Default::default()
        };
        assert!(crossvalidate(&art, &bounds).ok());
        // flip the parity of a self-loop
        let d = &art.compressed;
        let (q, l) = (0..d.num_states())
            .flat_map(|q| (0..4).map(move |l| (q, l)))
            .find(|&(q, l)| d.step(q, l).0 == q)
            .expect("some self-loop");
        let c = d.step(q, l).1;
        art.compressed.set_color(q, l, c + 1);
        let report = crossvalidate(&art, &CheckBounds::default());
        let cex = report.counterexample.expect("mutation is detected");
        assert!(cex.verdicts.iter().any(|v| v.oracle == "compressed-dpa"));
    }
}
