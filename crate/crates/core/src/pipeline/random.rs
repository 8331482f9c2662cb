//! Random limit-deterministic automata for property tests.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automata::{Alphabet, Ldba};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RandomLdba {
    pub states: usize,
    pub letters: usize,
    /// Probability of each possible transition outside `Q_d`.
    pub density: f64,
    /// Probability that a transition inside `Q_d` is accepting.
    pub acc_density: f64,
}

impl Default for RandomLdba {
    fn default() -> Self {
        RandomLdba {
            states: 5,
            letters: 2,
            density: 0.3,
            acc_density: 0.3,
        }
    }
}

/// A valid LDBA drawn from `seed`. State 0 is initial and lies outside
/// `Q_d`; at least one further state is in `Q_d`. Outside `Q_d` every
/// transition is present with probability `density`, and a state left
/// without successors on some letter gets one at random.
pub fn rand_ldba(seed: u64, p: &RandomLdba) -> Ldba {
    assert!(p.states >= 2, "need room for both parts");
    assert!(p.letters >= 1, "need a letter");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_bar = rng.gen_range(1..p.states);
    let names: Vec<String> = (0..p.letters)
        .map(|i| ((b'a' + (i % 26) as u8) as char).to_string())
        .collect();
    let names: Vec<String> = if p.letters > 26 {
        (0..p.letters).map(|i| format!("s{i}")).collect()
    } else {
        names
    };
    let mut a = Ldba::new(Alphabet::symbols(names));
    for q in 0..p.states {
        a.add_state(q.to_string(), q >= n_bar);
    }
    for q in 0..p.states {
        for l in 0..p.letters as u32 {
            if q >= n_bar {
                let t = rng.gen_range(n_bar..p.states);
                let acc = rng.gen_bool(p.acc_density);
                a.add_edge(q, l, t, acc).expect("valid edge");
            } else {
                let mut any = false;
                for t in 0..p.states {
                    if rng.gen_bool(p.density) {
                        a.add_edge(q, l, t, false).expect("valid edge");
                        any = true;
                    }
                }
                if !any {
                    let t = rng.gen_range(0..p.states);
                    a.add_edge(q, l, t, false).expect("valid edge");
                }
            }
        }
    }
    a
}
