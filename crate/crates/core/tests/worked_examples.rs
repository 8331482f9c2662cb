mod common;

use common::*;
use ltl2dpa::automata::{eliminate_jumps, emit_dpa, emit_ldba, ldba_accepts_lasso, parse_hoa, Automaton, StateOrder};
use ltl2dpa::budget::Budget;
use ltl2dpa::ldba2dpa::{construct_dpa, construct_reduced_dpa, initial_ranking, ranking_step};
use ltl2dpa::oracle::{NoOracle, RedirectPolicy, ReduceOptions};
use ltl2dpa::pipeline::{parse_formula, translate_formula, PipelineConfig};
use ltl2dpa::run_dag::{build_reduced_dag, build_run_dag, color_trace, reduced_color_summary};
use ltl2dpa::LassoWord;

#[test]
fn ranking_state_names() {
    let a = persistence();
    let ord = StateOrder::discovery(&a);
    let det = construct_dpa(&a, &ord, &Budget::default()).unwrap();
    let mut names: Vec<String> = det.rankings.iter().map(|r| r.display(&a).to_string()).collect();
    names.sort();
    assert_eq!(names, ["{1},[2]", "{1},[3]", "{1},[4<2]", "{1},[4<3]", "{1},[]"]);
    let (r, c) = ranking_step(&a, &ord, &initial_ranking(&a), B);
    assert_eq!((r.display(&a).to_string(), c), ("{1},[3]".to_string(), 7));
}

#[test]
fn dead_state_never_appears_in_reduced_levels() {
    let a = persistence();
    let ord = StateOrder::discovery(&a);
    let oracle = dead_four_oracle(&a);
    for w in LassoWord::enumerate(2, 3, 3) {
        for level in build_reduced_dag(&a, &ord, &oracle, ReduceOptions::default(), &w, 10) {
            assert!(!level.ranked.contains(&3), "{w}");
        }
    }
}

#[test]
fn reduced_summary_accepts_aab() {
    let a = persistence();
    let ord = StateOrder::discovery(&a);
    let oracle = dead_four_oracle(&a);
    let w = lasso(&[A, A], &[B]);
    assert_eq!(
        reduced_color_summary(&a, &ord, &oracle, ReduceOptions::default(), &w) % 2,
        0
    );
}

#[test]
fn silent_oracle_changes_nothing() {
    let a = persistence();
    let ord = StateOrder::discovery(&a);
    for w in LassoWord::enumerate(2, 3, 3) {
        let plain = build_run_dag(&a, &ord, &w, 9);
        let reduced = build_reduced_dag(&a, &ord, &NoOracle, ReduceOptions::default(), &w, 9);
        assert_eq!(plain, reduced);
        assert_eq!(
            color_trace(&a, &plain, &w, RedirectPolicy::Merge),
            color_trace(&a, &reduced, &w, RedirectPolicy::Merge)
        );
    }
}

#[test]
fn literal_redirect_loses_the_language() {
    // Without counting the redirected run as merged, the even color of the
    // 2-self-loop is never cancelled on (aab)^ω.
    let a = persistence();
    let ord = StateOrder::discovery(&a);
    let options = ReduceOptions {
        redirect: RedirectPolicy::Literal,
        ..Default::default()
    };
    let d = construct_reduced_dpa(&a, &ord, &dead_four_oracle(&a), options, &Budget::default())
        .unwrap()
        .dpa;
    let w = lasso(&[], &[A, A, B]);
    assert!(!ldba_accepts_lasso(&a, &w, 0).unwrap());
    assert!(d.accepts_lasso(&w).unwrap());
}

#[test]
fn keep_smallest_keeps_the_dead_state_at_index_one() {
    let a = persistence();
    let ord = StateOrder::discovery(&a);
    let options = ReduceOptions {
        keep_smallest: true,
        ..Default::default()
    };
    let det = construct_reduced_dpa(&a, &ord, &dead_four_oracle(&a), options, &Budget::default()).unwrap();
    assert!(det.rankings.iter().any(|r| r.t.first() == Some(&3)));
    let plain = construct_dpa(&a, &ord, &Budget::default()).unwrap().dpa;
    for w in LassoWord::enumerate(2, 3, 3) {
        assert_eq!(det.dpa.accepts_lasso(&w), plain.accepts_lasso(&w), "{w}");
    }
}

#[test]
fn small_automata_survive_hoa() {
    let a = persistence();
    let text = emit_ldba(&a, Some("persistence")).unwrap();
    let Automaton::Ldba(back) = parse_hoa(&text).unwrap() else {
        panic!("not an LDBA")
    };
    assert_eq!(emit_ldba(&back, Some("persistence")).unwrap(), text);

    let d = construct_dpa(&a, &StateOrder::discovery(&a), &Budget::default())
        .unwrap()
        .dpa;
    let text = emit_dpa(&d, None);
    let Automaton::Dpa(back) = parse_hoa(&text).unwrap() else {
        panic!("not a DPA")
    };
    assert_eq!(emit_dpa(&back, None), text);

    let (f, aps) = parse_formula("c | X G (a | F b)").unwrap();
    let out = translate_formula(&f, &aps, &PipelineConfig::default(), None).unwrap();
    let ldba = eliminate_jumps(&out.ldba).unwrap();
    let text = emit_ldba(&ldba, None).unwrap();
    let Automaton::Ldba(back) = parse_hoa(&text).unwrap() else {
        panic!("not an LDBA")
    };
    for w in LassoWord::enumerate(8, 2, 2) {
        assert_eq!(
            ldba_accepts_lasso(&back, &w, 0),
            ldba_accepts_lasso(&ldba, &w, 0),
            "{w}"
        );
    }
}

#[test]
fn translation_of_the_example_is_sound() {
    let (f, aps) = parse_formula("c | X G (a | F b)").unwrap();
    let t = ltl2dpa::ltl2ldba::translate(&f, &aps, &Budget::default()).unwrap();
    let a = eliminate_jumps(&t.ldba).unwrap();
    for w in LassoWord::enumerate(8, 3, 2) {
        assert_eq!(
            ldba_accepts_lasso(&a, &w, a.initial()).unwrap(),
            ltl2dpa::ltl::eval_lasso(&f, &w),
            "{w}"
        );
    }
}
