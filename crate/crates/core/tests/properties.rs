mod common;

use std::collections::BTreeSet;

use common::CORPUS;
use ltl2dpa::automata::{
    eliminate_jumps, emit_dpa, emit_ldba, ldba_accepts_lasso, parse_hoa, Automaton, Ldba, StateOrder,
};
use ltl2dpa::budget::Budget;
use ltl2dpa::ldba2dpa::{construct_dpa, ranking_step};
use ltl2dpa::ltl::{af_word, eval_lasso};
use ltl2dpa::ltl2ldba::translate;
use ltl2dpa::pipeline::{parse_formula, rand_ldba, RandomLdba};
use ltl2dpa::run_dag::build_run_dag;
use ltl2dpa::{LassoWord, Letter};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_ldba(seed: u64) -> Ldba {
    let p = RandomLdba {
        states: 2 + (seed as usize % 6),
        ..Default::default()
    };
    rand_ldba(seed, &p)
}

fn lasso_strategy(letters: u32, max_prefix: usize, max_period: usize) -> impl Strategy<Value = LassoWord> {
    (
        prop::collection::vec(0..letters, 0..=max_prefix),
        prop::collection::vec(0..letters, 1..=max_period),
    )
        .prop_map(|(u, v)| LassoWord::new(u, v).unwrap())
}

/// Levels of `Q_d` vertices ordered by brute force: each vertex gets the
/// least sequence of ranks over the run prefixes reaching it, with states
/// outside `Q_d` ranked last.
fn prefix_order(a: &Ldba, ord: &StateOrder, w: &LassoWord, horizon: usize) -> Vec<Vec<usize>> {
    let rank = |q: usize| if a.in_qd(q) { ord.rank(q) } else { usize::MAX };
    let mut least: Vec<Option<Vec<usize>>> = vec![None; a.num_states()];
    least[a.initial()] = Some(vec![rank(a.initial())]);
    let mut out = Vec::new();
    for i in 0..=horizon {
        let mut level: Vec<(Vec<usize>, usize)> = a
            .states()
            .filter(|&q| a.in_qd(q))
            .filter_map(|q| least[q].clone().map(|s| (s, q)))
            .collect();
        level.sort();
        out.push(level.into_iter().map(|(_, q)| q).collect());
        if i == horizon {
            break;
        }
        let mut next: Vec<Option<Vec<usize>>> = vec![None; a.num_states()];
        for q in a.states() {
            let Some(seq) = &least[q] else { continue };
            for e in a.edges(q, w.letter(i)) {
                let mut s = seq.clone();
                s.push(rank(e.target));
                if next[e.target].as_ref().is_none_or(|t| s < *t) {
                    next[e.target] = Some(s);
                }
            }
        }
        least = next;
    }
    out
}

/// Acceptance with jumps taken as free moves before any letter.
fn accepts_with_jumps(a: &Ldba, w: &LassoWord) -> bool {
    let n = w.positions();
    let node = |q: usize, pos: usize| q * n + pos;
    let mut succ: Vec<Vec<(usize, bool)>> = vec![Vec::new(); a.num_states() * n];
    for q in a.states() {
        for pos in 0..n {
            let mut sources = vec![q];
            sources.extend_from_slice(a.jumps(q));
            for p in sources {
                for e in a.edges(p, w.letter_at(pos)) {
                    succ[node(q, pos)].push((node(e.target, w.succ(pos)), e.accepting));
                }
            }
        }
    }
    let reach = |from: usize| {
        let mut seen = BTreeSet::from([from]);
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for &(t, _) in &succ[v] {
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        seen
    };
    // some reachable accepting edge lies on a cycle
    reach(node(a.initial(), 0))
        .into_iter()
        .any(|v| succ[v].iter().any(|&(t, acc)| acc && reach(t).contains(&v)))
}

#[test]
fn incremental_order_matches_prefix_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..200 {
        let a = small_ldba(seed);
        let ord = StateOrder::random(&a, &mut rng);
        for _ in 0..20 {
            let w = LassoWord::random(&mut rng, 2, 4, 4);
            let levels = build_run_dag(&a, &ord, &w, 12);
            let ranked: Vec<Vec<usize>> = levels.into_iter().map(|l| l.ranked).collect();
            assert_eq!(ranked, prefix_order(&a, &ord, &w, 12), "seed {seed}, {w}");
        }
    }
}

#[test]
fn indices_never_grow() {
    for seed in 0..300 {
        let a = small_ldba(seed);
        let ord = StateOrder::discovery(&a);
        let det = construct_dpa(&a, &ord, &Budget::default()).unwrap();
        for r in &det.rankings {
            for l in a.alphabet().letters() {
                let (next, _) = ranking_step(&a, &ord, r, l);
                for (k, &q) in r.t.iter().enumerate() {
                    let target = a.det_edge(q, l).unwrap().target;
                    assert!(next.index(target).unwrap() <= k + 1, "seed {seed}");
                }
            }
        }
    }
}

#[test]
fn acceptance_does_not_depend_on_the_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..200 {
        let a = small_ldba(seed);
        let d1 = construct_dpa(&a, &StateOrder::random(&a, &mut rng), &Budget::default())
            .unwrap()
            .dpa;
        let d2 = construct_dpa(&a, &StateOrder::random(&a, &mut rng), &Budget::default())
            .unwrap()
            .dpa;
        for w in LassoWord::enumerate(2, 3, 3) {
            assert_eq!(d1.accepts_lasso(&w), d2.accepts_lasso(&w), "seed {seed}, {w}");
        }
    }
}

#[test]
fn random_automata_survive_hoa() {
    for seed in 0..100 {
        let a = small_ldba(seed);
        let text = emit_ldba(&a, None).unwrap();
        let Automaton::Ldba(back) = parse_hoa(&text).unwrap() else {
            panic!("seed {seed}: not an LDBA")
        };
        assert_eq!(back.num_states(), a.num_states());
        for q in a.states() {
            assert_eq!(back.in_qd(q), a.in_qd(q));
            for l in a.alphabet().letters() {
                let edges = |x: &Ldba| -> BTreeSet<(usize, bool)> {
                    x.edges(q, l).iter().map(|e| (e.target, e.accepting)).collect()
                };
                assert_eq!(edges(&back), edges(&a), "seed {seed}");
            }
        }
        let d = construct_dpa(&a, &StateOrder::discovery(&a), &Budget::default())
            .unwrap()
            .dpa;
        let text = emit_dpa(&d, None);
        let Automaton::Dpa(back) = parse_hoa(&text).unwrap() else {
            panic!("seed {seed}: not a DPA")
        };
        for q in 0..d.num_states() {
            for l in d.alphabet().letters() {
                assert_eq!(back.step(q, l), d.step(q, l), "seed {seed}");
            }
        }
    }
}

#[test]
fn jump_elimination_keeps_the_language() {
    for text in CORPUS.iter().filter(|t| common::props(t) <= 2) {
        let (f, aps) = parse_formula(text).unwrap();
        let t = translate(&f, &aps, &Budget::default()).unwrap();
        let a = eliminate_jumps(&t.ldba).unwrap();
        for w in LassoWord::enumerate(a.alphabet().size(), 2, 2) {
            assert_eq!(
                ldba_accepts_lasso(&a, &w, a.initial()).unwrap(),
                accepts_with_jumps(&t.ldba, &w),
                "{text}: {w}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn after_reads_a_prefix(
        i in 0..CORPUS.len(),
        v in prop::collection::vec(0..8u32, 0..=3),
        w in lasso_strategy(8, 2, 3),
    ) {
        let (f, aps) = parse_formula(CORPUS[i]).unwrap();
        let mask = (1u32 << aps.len()) - 1;
        let v: Vec<Letter> = v.into_iter().map(|l| l & mask).collect();
        let w = LassoWord::new(
            w.prefix().iter().map(|l| l & mask).collect(),
            w.period().iter().map(|l| l & mask).collect(),
        ).unwrap();
        let after = af_word(&f, &v).to_formula();
        prop_assert_eq!(eval_lasso(&f, &w.prepend(&v)), eval_lasso(&after, &w));
    }

    #[test]
    fn complement_flips_and_compression_keeps(seed in 0..1000u64, w in lasso_strategy(2, 4, 4)) {
        let a = small_ldba(seed);
        let d = construct_dpa(&a, &StateOrder::discovery(&a), &Budget::default()).unwrap().dpa;
        let accepts = d.accepts_lasso(&w).unwrap();
        prop_assert_eq!(d.complement().accepts_lasso(&w).unwrap(), !accepts);
        let c = d.compress();
        prop_assert_eq!(c.accepts_lasso(&w).unwrap(), accepts);
        prop_assert!(c.max_color() <= d.max_color());
    }

    #[test]
    fn dpa_agrees_with_ldba_on_longer_lassos(seed in 0..5000u64, w in lasso_strategy(2, 6, 6)) {
        let a = small_ldba(seed);
        let d = construct_dpa(&a, &StateOrder::discovery(&a), &Budget::default()).unwrap().dpa;
        prop_assert_eq!(d.accepts_lasso(&w).unwrap(), ldba_accepts_lasso(&a, &w, 0).unwrap());
    }
}
