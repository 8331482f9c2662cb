use std::fmt;

use thiserror::Error;

use crate::word::Letter;

/// Default cap on the number of atomic propositions of an enumerated
/// propositional alphabet.
pub const DEFAULT_MAX_APS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{count} atomic propositions exceed the cap of {cap}")]
pub struct AlphabetTooLarge {
    pub count: usize,
    pub cap: usize,
}

/// An explicit, enumerated alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// Letters are the subsets of the propositions; letter `l` contains
    /// proposition `i` iff bit `i` of `l` is set.
    Propositional(Vec<String>),
    /// Abstract symbols, letter `i` being the `i`-th name.
    Symbols(Vec<String>),
}

impl Alphabet {
    pub fn propositional(aps: Vec<String>, cap: usize) -> Result<Self, AlphabetTooLarge> {
        if aps.len() > cap.min(31) {
            return Err(AlphabetTooLarge {
                count: aps.len(),
                cap: cap.min(31),
            });
        }
        Ok(Alphabet::Propositional(aps))
    }

    pub fn symbols<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Alphabet::Symbols(names.into_iter().map(Into::into).collect())
    }

    pub fn size(&self) -> usize {
        match self {
            Alphabet::Propositional(aps) => 1 << aps.len(),
            Alphabet::Symbols(names) => names.len(),
        }
    }

    pub fn letters(&self) -> std::ops::Range<Letter> {
        0..self.size() as Letter
    }

    /// Proposition names for a propositional alphabet, symbol names
    /// otherwise.
    pub fn names(&self) -> &[String] {
        match self {
            Alphabet::Propositional(aps) | Alphabet::Symbols(aps) => aps,
        }
    }

    /// The valuation of the propositions `names()` a letter stands for: the
    /// letter itself, or a one-hot vector for symbols.
    pub fn valuation(&self, l: Letter) -> u32 {
        match self {
            Alphabet::Propositional(_) => l,
            Alphabet::Symbols(_) => 1 << l,
        }
    }

    pub fn letter_name(&self, l: Letter) -> String {
        match self {
            Alphabet::Symbols(names) => names[l as usize].clone(),
            Alphabet::Propositional(aps) if aps.is_empty() => "tt".to_string(),
            Alphabet::Propositional(aps) => aps
                .iter()
                .enumerate()
                .map(|(i, a)| if l >> i & 1 == 1 { a.clone() } else { format!("!{a}") })
                .collect::<Vec<_>>()
                .join("&"),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Propositional(aps) => write!(f, "2^{{{}}}", aps.join(",")),
            Alphabet::Symbols(names) => write!(f, "{{{}}}", names.join(",")),
        }
    }
}
