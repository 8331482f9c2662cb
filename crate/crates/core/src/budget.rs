//! State budgets and cooperative cancellation for the constructions.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;

use thiserror::Error;

/// Default cap on the number of states a single construction may create.
pub const DEFAULT_MAX_STATES: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BudgetError {
    #[error("state budget of {0} exceeded")]
    Exceeded(usize),
    #[error("construction cancelled")]
    Cancelled,
}

/// Shared between a running construction and whoever may cancel it.
#[derive(Debug, Default)]
pub struct Progress {
    cancel: AtomicBool,
    explored: AtomicUsize,
}

impl Progress {
    pub fn cancel(&self) {
        self.cancel.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.cancel.load(Ordering::Relaxed)
    }

    /// States created so far by the construction reporting here.
    pub fn explored(&self) -> usize {
        self.explored.load(Ordering::Relaxed)
    }
}

#[derive(Clone, Debug)]
pub struct Budget {
    pub max_states: usize,
    pub progress: Option<Arc<Progress>>,
    /// Whether [`Budget::check`] publishes its state count to `progress`.
    pub report: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_MAX_STATES)
    }
}

impl Budget {
    pub fn new(max_states: usize) -> Self {
        Budget {
            max_states,
            progress: None,
            report: true,
        }
    }

    pub fn with_progress(mut self, progress: Arc<Progress>) -> Self {
        self.progress = Some(progress);
        self
    }

    /// Same limit and cancellation token, but the state count is kept
    /// private. Used for preparatory stages whose size is not comparable to
    /// the final result.
    pub fn silent(&self) -> Self {
        Budget {
            report: false,
            ..self.clone()
        }
    }

    /// Called after each expansion with the number of states created so far.
    pub fn check(&self, states: usize) -> Result<(), BudgetError> {
        if let Some(p) = &self.progress {
            if self.report {
                p.explored.store(states, Ordering::Relaxed);
            }
            if p.is_cancelled() {
                return Err(BudgetError::Cancelled);
            }
        }
        if states > self.max_states {
            return Err(BudgetError::Exceeded(self.max_states));
        }
        Ok(())
    }
}
