//! Ultimately periodic words `u v^ω`.

use std::fmt;

use rand::Rng;
use thiserror::Error;

/// A letter is an index into an alphabet. For propositional alphabets the
/// index is the bit set of true propositions.
pub type Letter = u32;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("the period of a lasso word must be nonempty")]
    EmptyPeriod,
    #[error("letter {letter} is outside the alphabet of size {size}")]
    LetterOutOfRange { letter: Letter, size: usize },
}

/// The ω-word `prefix · period^ω`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LassoWord {
    prefix: Vec<Letter>,
    period: Vec<Letter>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Letter>, period: Vec<Letter>) -> Result<Self, WordError> {
        if period.is_empty() {
            return Err(WordError::EmptyPeriod);
        }
        Ok(LassoWord { prefix, period })
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    /// Number of positions of the lasso graph, `|u| + |v|`.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    /// Letter read at lasso position `pos < positions()`.
    pub fn letter_at(&self, pos: usize) -> Letter {
        if pos < self.prefix.len() {
            self.prefix[pos]
        } else {
            self.period[pos - self.prefix.len()]
        }
    }

    /// Successor of a lasso position; the last position loops back to the
    /// start of the period.
    pub fn succ(&self, pos: usize) -> usize {
        if pos + 1 < self.positions() {
            pos + 1
        } else {
            self.prefix.len()
        }
    }

    /// The `i`-th letter of the infinite word.
    pub fn letter(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// `v · self`.
    pub fn prepend(&self, v: &[Letter]) -> LassoWord {
        let mut prefix = v.to_vec();
        prefix.extend_from_slice(&self.prefix);
        LassoWord {
            prefix,
            period: self.period.clone(),
        }
    }

    pub fn check_alphabet(&self, size: usize) -> Result<(), WordError> {
        match self.prefix.iter().chain(&self.period).find(|&&l| l as usize >= size) {
            Some(&letter) => Err(WordError::LetterOutOfRange { letter, size }),
            None => Ok(()),
        }
    }

    /// Whether this is the shortest description of its ω-word: the period is
    /// primitive and cannot be rotated into the prefix.
    pub fn is_reduced(&self) -> bool {
        let p = &self.period;
        let primitive = (1..p.len())
            .filter(|d| p.len().is_multiple_of(*d))
            .all(|d| p.chunks(d).any(|c| c != &p[..d]));
        let rotatable = self.prefix.last() == p.last();
        primitive && !rotatable
    }

    /// All lassos over `alphabet` letters with `|u| <= max_prefix` and
    /// `1 <= |v| <= max_period`.
    pub fn enumerate(alphabet: usize, max_prefix: usize, max_period: usize) -> LassoIter {
        LassoIter {
            alphabet: alphabet as u32,
            max_prefix,
            max_period,
            prefix: Vec::new(),
            period: vec![0],
            done: alphabet == 0 || max_period == 0,
        }
    }

    /// A uniformly random lasso length pair and uniformly random letters.
    pub fn random<R: Rng>(rng: &mut R, alphabet: usize, max_prefix: usize, max_period: usize) -> LassoWord {
        let u = rng.gen_range(0..=max_prefix);
        let v = rng.gen_range(1..=max_period.max(1));
        let mut letter = || rng.gen_range(0..alphabet as u32);
        let prefix = (0..u).map(|_| letter()).collect();
        let period = (0..v).map(|_| letter()).collect();
        LassoWord { prefix, period }
    }

    /// Number of lassos [`LassoWord::enumerate`] yields.
    pub fn count(alphabet: usize, max_prefix: usize, max_period: usize) -> u128 {
        let a = alphabet as u128;
        let prefixes: u128 = (0..=max_prefix as u32).map(|i| a.pow(i)).sum();
        let periods: u128 = (1..=max_period as u32).map(|i| a.pow(i)).sum();
        prefixes * periods
    }
}

/// Odometer over (prefix, period) pairs, shortest first.
pub struct LassoIter {
    alphabet: u32,
    max_prefix: usize,
    max_period: usize,
    prefix: Vec<Letter>,
    period: Vec<Letter>,
    done: bool,
}

fn bump(word: &mut Vec<Letter>, alphabet: u32, max_len: usize, min_len: usize) -> bool {
    for l in word.iter_mut().rev() {
        *l += 1;
        if *l < alphabet {
            return true;
        }
        *l = 0;
    }
    if word.len() < max_len {
        word.push(0);
        true
    } else {
        word.clear();
        word.resize(min_len, 0);
        false
    }
}

impl Iterator for LassoIter {
    type Item = LassoWord;

    fn next(&mut self) -> Option<LassoWord> {
        if self.done {
            return None;
        }
        let out = LassoWord {
            prefix: self.prefix.clone(),
            period: self.period.clone(),
        };
        if !bump(&mut self.period, self.alphabet, self.max_period, 1)
            && !bump(&mut self.prefix, self.alphabet, self.max_prefix, 0)
        {
            self.done = true;
        }
        Some(out)
    }
}

impl fmt::Debug for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |w: &[Letter]| w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "[{}]([{}])^w", join(&self.prefix), join(&self.period))
    }
}
