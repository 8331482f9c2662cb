//! Strict total orders on the deterministic part of an LDBA.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use super::ldba::{Ldba, StateId};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("state {0} is listed but is not in Q_d")]
    NotInQd(StateId),
    #[error("state {0} is listed twice")]
    Duplicate(StateId),
    #[error("state {0} of Q_d is missing from the order")]
    Missing(StateId),
}

/// A bijection from `Q_d` onto `1..=|Q_d|`; states outside `Q_d` rank
/// after all of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateOrder {
    rank: Vec<usize>,
}

impl StateOrder {
    /// Rank of states outside `Q_d`.
    pub const INFINITY: usize = usize::MAX;

    /// `Q_d` ordered by state id.
    pub fn discovery(a: &Ldba) -> Self {
        let seq: Vec<StateId> = a.qd_states().collect();
        Self::from_sequence(a, &seq).expect("Q_d in id order")
    }

    /// The `i`-th listed state gets rank `i + 1`. Every state of `Q_d` must
    /// appear exactly once.
    pub fn from_sequence(a: &Ldba, seq: &[StateId]) -> Result<Self, OrderError> {
        let mut rank = vec![Self::INFINITY; a.num_states()];
        for (i, &q) in seq.iter().enumerate() {
            if q >= a.num_states() || !a.in_qd(q) {
                return Err(OrderError::NotInQd(q));
            }
            if rank[q] != Self::INFINITY {
                return Err(OrderError::Duplicate(q));
            }
            rank[q] = i + 1;
        }
        if let Some(q) = a.qd_states().find(|&q| rank[q] == Self::INFINITY) {
            return Err(OrderError::Missing(q));
        }
        Ok(StateOrder { rank })
    }

    pub fn random<R: Rng>(a: &Ldba, rng: &mut R) -> Self {
        let mut seq: Vec<StateId> = a.qd_states().collect();
        seq.shuffle(rng);
        Self::from_sequence(a, &seq).expect("permutation of Q_d")
    }

    pub fn rank(&self, q: StateId) -> usize {
        self.rank[q]
    }

    /// `Q_d` from rank 1 upwards.
    pub fn sequence(&self) -> Vec<StateId> {
        let mut seq: Vec<StateId> = (0..self.rank.len())
            .filter(|&q| self.rank[q] != Self::INFINITY)
            .collect();
        seq.sort_by_key(|&q| self.rank[q]);
        seq
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Alphabet;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn three() -> Ldba {
        let mut a = Ldba::new(Alphabet::symbols(["x"]));
        a.add_state("i", false);
        a.add_state("p", true);
        a.add_state("q", true);
        a
    }

    #[test]
    fn ranks() {
        let a = three();
        let o = StateOrder::from_sequence(&a, &[2, 1]).unwrap();
        assert_eq!((o.rank(0), o.rank(1), o.rank(2)), (StateOrder::INFINITY, 2, 1));
        assert_eq!(o.sequence(), vec![2, 1]);
        assert_eq!(StateOrder::discovery(&a).sequence(), vec![1, 2]);
    }

    #[test]
    fn rejects_bad_sequences() {
        let a = three();
        assert_eq!(StateOrder::from_sequence(&a, &[0, 1, 2]), Err(OrderError::NotInQd(0)));
        assert_eq!(StateOrder::from_sequence(&a, &[1, 1]), Err(OrderError::Duplicate(1)));
        assert_eq!(StateOrder::from_sequence(&a, &[1]), Err(OrderError::Missing(2)));
    }

    #[test]
    fn random_is_a_permutation() {
        let a = three();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seq = StateOrder::random(&a, &mut rng).sequence();
        seq.sort();
        assert_eq!(seq, vec![1, 2]);
    }
}
