//! Deterministic parity automata with colored transitions and "min even"
//! acceptance.

use std::collections::{BTreeSet, HashMap};

use super::alphabet::Alphabet;
use crate::word::{LassoWord, Letter, WordError};

pub type Color = u32;

/// A complete deterministic automaton whose transitions carry colors
/// `1..=max_color`. A run is accepting iff the least color it sees
/// infinitely often is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dpa {
    alphabet: Alphabet,
    initial: usize,
    edges: Vec<Vec<(usize, Color)>>,
    names: Vec<String>,
    max_color: Color,
}

impl Dpa {
    /// `edges[q][letter] = (target, color)`. `max_color` is raised to the
    /// largest color in use if needed.
    pub fn new(
        alphabet: Alphabet,
        initial: usize,
        edges: Vec<Vec<(usize, Color)>>,
        names: Vec<String>,
        max_color: Color,
    ) -> Self {
        let n = edges.len();
        assert!(initial < n.max(1), "initial state out of range");
        assert_eq!(names.len(), n, "one name per state");
        for row in &edges {
            assert_eq!(row.len(), alphabet.size(), "transition table must be complete");
            assert!(row.iter().all(|&(t, c)| t < n && c >= 1), "bad transition");
        }
        let used = edges.iter().flatten().map(|e| e.1).max().unwrap_or(1);
        Dpa {
            alphabet,
            initial,
            edges,
            names,
            max_color: max_color.max(used),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn max_color(&self) -> Color {
        self.max_color
    }

    pub fn step(&self, q: usize, letter: Letter) -> (usize, Color) {
        self.edges[q][letter as usize]
    }

    pub fn set_color(&mut self, q: usize, letter: Letter, color: Color) {
        self.edges[q][letter as usize].1 = color;
        self.max_color = self.max_color.max(color);
    }

    pub fn used_colors(&self) -> BTreeSet<Color> {
        self.edges.iter().flatten().map(|e| e.1).collect()
    }

    /// State reached after reading `word` from `q`.
    pub fn run(&self, q: usize, word: &[Letter]) -> usize {
        word.iter().fold(q, |q, &l| self.step(q, l).0)
    }

    /// The first `n` colors of the run on `w`.
    pub fn run_colors(&self, w: &LassoWord, n: usize) -> Vec<Color> {
        let mut q = self.initial;
        (0..n)
            .map(|i| {
                let (next, c) = self.step(q, w.letter(i));
                q = next;
                c
            })
            .collect()
    }

    /// Least color seen infinitely often when reading `period^ω` from `q`.
    pub fn period_summary(&self, q: usize, period: &[Letter]) -> Color {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut mins = Vec::new();
        let mut q = q;
        loop {
            if let Some(&start) = seen.get(&q) {
                return mins[start..].iter().copied().min().unwrap_or(Color::MAX);
            }
            seen.insert(q, mins.len());
            let mut m = Color::MAX;
            for &l in period {
                let (next, c) = self.step(q, l);
                m = m.min(c);
                q = next;
            }
            mins.push(m);
        }
    }

    /// Runs the prefix, then repeats the period until the state at the start
    /// of a period repeats; the answer is the parity of the least color on
    /// that cycle.
    pub fn accepts_lasso(&self, w: &LassoWord) -> Result<bool, WordError> {
        w.check_alphabet(self.alphabet.size())?;
        let q = self.run(self.initial, w.prefix());
        Ok(self.period_summary(q, w.period()).is_multiple_of(2))
    }

    /// The automaton for the complement language: every color shifted by
    /// one, which flips the parity of every least color.
    pub fn complement(&self) -> Dpa {
        Dpa {
            alphabet: self.alphabet.clone(),
            initial: self.initial,
            edges: self
                .edges
                .iter()
                .map(|row| row.iter().map(|&(t, c)| (t, c + 1)).collect())
                .collect(),
            names: self.names.clone(),
            max_color: self.max_color + 1,
        }
    }

    /// Maps the used colors `c1 < ... < ck` monotonically onto the smallest
    /// values that keep each parity and the relative order.
    pub fn compress(&self) -> Dpa {
        let mut map = HashMap::new();
        let mut last = 0;
        for c in self.used_colors() {
            let mut d = last + 1;
            if d % 2 != c % 2 {
                d += 1;
            }
            map.insert(c, d);
            last = d;
        }
        Dpa {
            alphabet: self.alphabet.clone(),
            initial: self.initial,
            edges: self
                .edges
                .iter()
                .map(|row| row.iter().map(|&(t, c)| (t, map[&c])).collect())
                .collect(),
            names: self.names.clone(),
            max_color: last.max(1),
        }
    }
}
