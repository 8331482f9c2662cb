//! Redundancy oracles for the reduced determinization.
//!
//! A state `q` of `Q_d` is redundant behind states `p1, ..., pk` if
//! `L(q) ⊆ L(p1) ∪ ... ∪ L(pk)`. The oracles here decide this through base
//! sets: every state's language is the union of the base languages indexed
//! by its set `I_q`, so `I_q ⊆ I_p1 ∪ ... ∪ I_pk` is a sufficient test.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::automata::{Ldba, StateId};
use crate::ltl::{canonicalize, to_nnf, Clause};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("state {0} has neither a label nor a base set")]
    MissingLabel(String),
    #[error("label of state {0} has no negation normal form")]
    BadLabel(String),
}

/// How the reduced construction treats a vertex whose successor was removed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RedirectPolicy {
    /// The vertex is merged away: it counts as decreasing at its own index.
    #[default]
    Merge,
    /// The vertex now leads to the first remaining vertex and decreases iff
    /// its index was larger than 1.
    Literal,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ReduceOptions {
    /// Never remove the vertex of index 1, even when its language is empty.
    pub keep_smallest: bool,
    pub redirect: RedirectPolicy,
}

pub trait RedundancyOracle {
    /// Whether `L(q)` is contained in the union of the languages of
    /// `smaller` (empty union for the vertex of index 1).
    fn is_redundant(&self, q: StateId, smaller: &[StateId]) -> bool;

    /// Number of base languages, if the oracle is base driven.
    fn base_size(&self) -> Option<usize> {
        None
    }

    /// Which entries of the ordered sequence `t` survive one left-to-right
    /// reduction pass. Removing a redundant vertex leaves the union of the
    /// languages before later vertices unchanged, so one pass suffices.
    fn reduce(&self, t: &[StateId], options: ReduceOptions) -> Vec<bool> {
        let mut kept = Vec::with_capacity(t.len());
        let mut keep = Vec::with_capacity(t.len());
        for (i, &q) in t.iter().enumerate() {
            let k = (options.keep_smallest && i == 0) || !self.is_redundant(q, &kept);
            if k {
                kept.push(q);
            }
            keep.push(k);
        }
        keep
    }
}

/// Never reports redundancy; the reduced construction then coincides with
/// the plain one.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoOracle;

impl RedundancyOracle for NoOracle {
    fn is_redundant(&self, _: StateId, _: &[StateId]) -> bool {
        false
    }

    fn reduce(&self, t: &[StateId], _: ReduceOptions) -> Vec<bool> {
        vec![true; t.len()]
    }
}

/// Oracle over explicit base sets `I_q`.
#[derive(Clone, Debug)]
pub struct BaseOracle {
    sets: Vec<FixedBitSet>,
    m: usize,
}

impl BaseOracle {
    /// `sets[q]` is `I_q`; entries for states outside `Q_d` are ignored.
    pub fn new(a: &Ldba, sets: Vec<Vec<u32>>) -> Self {
        assert_eq!(sets.len(), a.num_states(), "one base set per state");
        let width = sets.iter().flatten().map(|&i| i as usize + 1).max().unwrap_or(0);
        let mut used = FixedBitSet::with_capacity(width);
        let sets: Vec<FixedBitSet> = sets
            .into_iter()
            .enumerate()
            .map(|(q, s)| {
                let mut b = FixedBitSet::with_capacity(width);
                for i in s {
                    b.insert(i as usize);
                }
                if a.in_qd(q) {
                    used.union_with(&b);
                }
                b
            })
            .collect();
        BaseOracle {
            sets,
            m: used.count_ones(..),
        }
    }

    pub fn base(&self, q: StateId) -> Vec<u32> {
        self.sets[q].ones().map(|i| i as u32).collect()
    }
}

impl RedundancyOracle for BaseOracle {
    fn is_redundant(&self, q: StateId, smaller: &[StateId]) -> bool {
        let mut union = FixedBitSet::with_capacity(self.sets[q].len());
        for &p in smaller {
            union.union_with(&self.sets[p]);
        }
        self.sets[q].is_subset(&union)
    }

    fn base_size(&self) -> Option<usize> {
        Some(self.m)
    }

    fn reduce(&self, t: &[StateId], options: ReduceOptions) -> Vec<bool> {
        let mut union = FixedBitSet::new();
        t.iter()
            .enumerate()
            .map(|(i, &q)| {
                let k = (options.keep_smallest && i == 0) || !self.sets[q].is_subset(&union);
                if k {
                    union.union_with(&self.sets[q]);
                }
                k
            })
            .collect()
    }
}

/// The label-derived oracle: `I_q` is the set of conjunctions in the
/// canonical disjunctive form of the label of `q`. Uses the stored base sets
/// when every state of `Q_d` has one, and otherwise derives them from the
/// labels, failing on unlabeled states.
pub fn syntactic_oracle(a: &Ldba) -> Result<BaseOracle, OracleError> {
    build(a, false)
}

/// Like [`syntactic_oracle`], but an unlabeled state gets a base language of
/// its own, so it is never removed and never covers another state.
pub fn lenient_oracle(a: &Ldba) -> BaseOracle {
    build(a, true).expect("lenient construction does not fail")
}

fn build(a: &Ldba, lenient: bool) -> Result<BaseOracle, OracleError> {
    if a.qd_states().all(|q| a.base(q).is_some()) {
        let sets = a
            .states()
            .map(|q| a.base(q).map(<[u32]>::to_vec).unwrap_or_default())
            .collect();
        return Ok(BaseOracle::new(a, sets));
    }
    let mut table: HashMap<Clause, u32> = HashMap::new();
    let mut sets: Vec<Option<Vec<u32>>> = vec![None; a.num_states()];
    for q in a.qd_states() {
        let Some(label) = a.label(q) else {
            if lenient {
                continue;
            }
            return Err(OracleError::MissingLabel(a.name(q).to_string()));
        };
        let label = match to_nnf(label) {
            Ok(f) => f,
            Err(_) if lenient => continue,
            Err(_) => return Err(OracleError::BadLabel(a.name(q).to_string())),
        };
        let set = canonicalize(&label)
            .clauses()
            .iter()
            .map(|c| {
                let next = table.len() as u32;
                *table.entry(c.clone()).or_insert(next)
            })
            .collect();
        sets[q] = Some(set);
    }
    let mut fresh = table.len() as u32;
    let sets = a
        .states()
        .map(|q| match sets[q].take() {
            Some(s) => s,
            None if a.in_qd(q) => {
                fresh += 1;
                vec![fresh - 1]
            }
            None => Vec::new(),
        })
        .collect();
    Ok(BaseOracle::new(a, sets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Alphabet;
    use crate::ltl::parse_ltl;

    fn labeled(labels: &[Option<&str>]) -> Ldba {
        let mut a = Ldba::new(Alphabet::symbols(["x"]));
        a.add_state("init", false);
        let mut props = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            let q = a.add_state(format!("q{i}"), true);
            if let Some(text) = l {
                a.set_label(q, parse_ltl(text, &mut props).unwrap());
            }
        }
        a
    }

    #[test]
    fn label_inclusion() {
        let a = labeled(&[Some("a | b"), Some("a"), Some("ff"), Some("c")]);
        let o = syntactic_oracle(&a).unwrap();
        assert!(o.is_redundant(2, &[1]));
        assert!(!o.is_redundant(1, &[2]));
        assert!(o.is_redundant(3, &[]));
        assert!(!o.is_redundant(4, &[1, 2]));
        assert_eq!(o.base_size(), Some(3));
    }

    #[test]
    fn index_one_rule() {
        let a = labeled(&[Some("ff"), Some("a"), Some("a")]);
        let o = syntactic_oracle(&a).unwrap();
        let verbatim = ReduceOptions::default();
        let keep = ReduceOptions {
            keep_smallest: true,
            ..verbatim
        };
        assert_eq!(o.reduce(&[1, 2, 3], verbatim), vec![false, true, false]);
        assert_eq!(o.reduce(&[1, 2, 3], keep), vec![true, true, false]);
        assert_eq!(o.reduce(&[2, 1, 3], verbatim), vec![true, false, false]);
        assert_eq!(NoOracle.reduce(&[1, 2, 3], verbatim), vec![true; 3]);
    }

    #[test]
    fn default_reduce_agrees_with_base_reduce() {
        struct Plain<'a>(&'a BaseOracle);
        impl RedundancyOracle for Plain<'_> {
            fn is_redundant(&self, q: StateId, smaller: &[StateId]) -> bool {
                self.0.is_redundant(q, smaller)
            }
        }
        let a = labeled(&[Some("a | b"), Some("a"), Some("ff"), Some("b | c"), Some("c")]);
        let o = syntactic_oracle(&a).unwrap();
        let t = [5, 2, 3, 1, 4];
        for keep_smallest in [false, true] {
            let opts = ReduceOptions {
                keep_smallest,
                ..Default::default()
            };
            assert_eq!(Plain(&o).reduce(&t, opts), o.reduce(&t, opts));
        }
    }

    #[test]
    fn missing_labels() {
        let a = labeled(&[Some("a"), None]);
        assert_eq!(
            syntactic_oracle(&a).unwrap_err(),
            OracleError::MissingLabel("q1".into())
        );
        let o = lenient_oracle(&a);
        assert!(!o.is_redundant(2, &[1]));
        assert!(!o.is_redundant(1, &[2]));
    }

    #[test]
    fn stored_bases_win() {
        let mut a = labeled(&[Some("a"), Some("b")]);
        a.set_base(1, vec![0]);
        a.set_base(2, vec![0]);
        let o = syntactic_oracle(&a).unwrap();
        assert!(o.is_redundant(2, &[1]));
        assert_eq!(o.base(2), vec![0]);
    }
}
