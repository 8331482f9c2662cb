//! Automata over explicit alphabets: limit-deterministic Büchi automata,
//! deterministic parity automata, and their text formats.

mod alphabet;
mod dot;
mod dpa;
mod hoa;
mod ldba;
mod order;

pub use alphabet::{Alphabet, AlphabetTooLarge, DEFAULT_MAX_APS};
pub use dot::{dpa_to_dot, ldba_to_dot};
pub use dpa::{Color, Dpa};
pub use hoa::{emit_dpa, emit_ldba, parse_hoa, Automaton, HoaError};
pub use ldba::{eliminate_jumps, ldba_accepts_lasso, validate_ldba, Diagnostic, Edge, Ldba, LdbaError, StateId};
pub use order::{OrderError, StateOrder};
