pub mod automata;
pub mod budget;
pub mod ldba2dpa;
pub mod ltl;
pub mod ltl2ldba;
pub mod oracle;
pub mod pipeline;
pub mod run_dag;
pub mod word;

pub use word::{LassoWord, Letter};
