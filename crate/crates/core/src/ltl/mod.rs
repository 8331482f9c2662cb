//! LTL syntax, normalization, propositional canonical forms, the "after"
//! function and a reference semantics on lasso words.

mod canon;
mod formula;
mod fragment;
mod nnf;
mod parse;
mod semantics;
mod subst;

pub use canon::{af_step, af_word, canonicalize, normalize, After, Class, Clause};
pub use formula::{Formula, Node, Prop};
pub use fragment::{classify_fragment, Fragment};
pub use nnf::{to_nnf, NnfError};
pub use parse::{parse_ltl, ParseError, ParseErrorKind};
pub use semantics::{eval_lasso, LassoEvaluator};
pub use subst::{g_subformulas, substitute_gset};
