//! End-to-end translation from LTL text to a parity automaton, the
//! negation race, cross-validation, random automata and benchmark families.

mod check;
mod families;
mod random;

pub use check::{crossvalidate, Artifacts, CheckBounds, Counterexample, Report, Verdict};
pub use families::{bench_families, BenchRecord, Family, UnknownFamily, CSV_HEADER};
pub use random::{rand_ldba, RandomLdba};

use std::sync::mpsc;
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::automata::{eliminate_jumps, Dpa, Ldba, LdbaError, StateOrder, DEFAULT_MAX_APS};
use crate::budget::{Budget, BudgetError, Progress, DEFAULT_MAX_STATES};
use crate::ldba2dpa::{choose_ord, construct_dpa, construct_reduced_dpa, width_check, DeterminizeError};
use crate::ltl::{parse_ltl, to_nnf, Formula, NnfError, ParseError};
use crate::ltl2ldba::{translate_with_cap, TranslateError};
use crate::oracle::{lenient_oracle, syntactic_oracle, BaseOracle, OracleError, RedirectPolicy, ReduceOptions};

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub reduce: bool,
    pub compress: bool,
    pub keep_smallest: bool,
    pub redirect: RedirectPolicy,
    pub race: bool,
    pub max_ldba_states: usize,
    pub max_dpa_states: usize,
    pub max_aps: usize,
    /// Replaces the ordering heuristic by a random order drawn from this
    /// seed.
    pub seed: Option<u64>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            reduce: true,
            compress: true,
            keep_smallest: false,
            redirect: RedirectPolicy::Merge,
            race: false,
            max_ldba_states: DEFAULT_MAX_STATES,
            max_dpa_states: DEFAULT_MAX_STATES,
            max_aps: DEFAULT_MAX_APS,
            seed: None,
        }
    }
}

impl PipelineConfig {
    pub fn reduce_options(&self) -> ReduceOptions {
        ReduceOptions {
            keep_smallest: self.keep_smallest,
            redirect: self.redirect,
        }
    }

    fn ord(&self, a: &Ldba) -> StateOrder {
        match self.seed {
            Some(seed) => StateOrder::random(a, &mut ChaCha8Rng::seed_from_u64(seed)),
            None => choose_ord(a),
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Nnf(#[from] NnfError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Ldba(#[from] LdbaError),
    #[error(transparent)]
    Determinize(#[from] DeterminizeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl PipelineError {
    fn is_cancelled(&self) -> bool {
        matches!(
            self,
            PipelineError::Translate(TranslateError::Budget(BudgetError::Cancelled))
                | PipelineError::Determinize(DeterminizeError::Budget(BudgetError::Cancelled))
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub ldba_states: usize,
    pub qd_states: usize,
    pub dpa_states: usize,
    /// Number of distinct colors in use.
    pub colors: usize,
    pub max_color: u32,
    pub max_t: usize,
    pub max_s: usize,
    /// Number of base languages of the oracle.
    pub base_m: Option<usize>,
    pub width_ok: Option<bool>,
    /// Whether the result was obtained by complementing the automaton for
    /// the negated formula.
    pub negated: bool,
    pub millis: u128,
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub formula: Formula,
    pub aps: Vec<String>,
    /// The automaton before jump elimination, with labels.
    pub ldba: Ldba,
    pub dpa: Dpa,
    pub stats: Stats,
}

/// Parses and normalizes a formula, collecting its propositions.
pub fn parse_formula(text: &str) -> Result<(Formula, Vec<String>), PipelineError> {
    let mut aps = Vec::new();
    let f = parse_ltl(text, &mut aps)?;
    Ok((to_nnf(&f)?, aps))
}

/// Parse, translate to an LDBA, determinize (with reduction when enabled)
/// and compress colors. With `cfg.race` set this is [`negation_race`].
pub fn translate_pipeline(text: &str, cfg: &PipelineConfig) -> Result<PipelineOutput, PipelineError> {
    if cfg.race {
        return negation_race(text, cfg);
    }
    let (f, aps) = parse_formula(text)?;
    translate_formula(&f, &aps, cfg, None)
}

/// The pipeline on an already normalized formula over `aps`.
pub fn translate_formula(
    f: &Formula,
    aps: &[String],
    cfg: &PipelineConfig,
    progress: Option<Arc<Progress>>,
) -> Result<PipelineOutput, PipelineError> {
    let start = Instant::now();
    let with = |b: Budget| match &progress {
        Some(p) => b.with_progress(p.clone()),
        None => b,
    };
    let ldba_budget = with(Budget::new(cfg.max_ldba_states)).silent();
    let dpa_budget = with(Budget::new(cfg.max_dpa_states));
    let t = translate_with_cap(f, aps, cfg.max_aps, &ldba_budget)?;
    let a = eliminate_jumps(&t.ldba)?;
    let oracle = if cfg.reduce { Some(syntactic_oracle(&a)?) } else { None };
    let (dpa, mut stats) = determinize(&a, cfg, oracle.as_ref(), &dpa_budget)?;
    stats.millis = start.elapsed().as_millis();
    Ok(PipelineOutput {
        formula: f.clone(),
        aps: aps.to_vec(),
        ldba: t.ldba,
        dpa,
        stats,
    })
}

/// Determinizes a given automaton, e.g. one read from HOA. Labels, where
/// present, drive the reduction; unlabeled states are never removed.
pub fn determinize_ldba(a: &Ldba, cfg: &PipelineConfig) -> Result<(Dpa, Stats), PipelineError> {
    let start = Instant::now();
    let a = eliminate_jumps(a)?;
    let oracle = cfg.reduce.then(|| lenient_oracle(&a));
    let (dpa, mut stats) = determinize(&a, cfg, oracle.as_ref(), &Budget::new(cfg.max_dpa_states))?;
    stats.millis = start.elapsed().as_millis();
    Ok((dpa, stats))
}

fn determinize(
    a: &Ldba,
    cfg: &PipelineConfig,
    oracle: Option<&BaseOracle>,
    budget: &Budget,
) -> Result<(Dpa, Stats), PipelineError> {
    let ord = cfg.ord(a);
    let det = match oracle {
        Some(o) => construct_reduced_dpa(a, &ord, o, cfg.reduce_options(), budget)?,
        None => construct_dpa(a, &ord, budget)?,
    };
    let width = oracle.map(|o| width_check(o, &det));
    let dpa = if cfg.compress {
        det.dpa.compress()
    } else {
        det.dpa.clone()
    };
    let stats = Stats {
        ldba_states: a.num_states(),
        qd_states: a.qd_count(),
        dpa_states: dpa.num_states(),
        colors: dpa.used_colors().len(),
        max_color: dpa.max_color(),
        max_t: det.max_t(),
        max_s: det.max_s(),
        base_m: width.as_ref().and_then(|w| w.m),
        width_ok: width.map(|w| w.holds),
        negated: false,
        millis: 0,
    };
    Ok((dpa, stats))
}

/// Translates the formula and its negation concurrently and keeps the
/// smaller automaton, complementing it if it came from the negation. Ties go
/// to the formula itself. Once one side has finished, the other is
/// cancelled as soon as its partial automaton can no longer be smaller. If
/// the negation has no negation normal form only the formula is translated.
pub fn negation_race(text: &str, cfg: &PipelineConfig) -> Result<PipelineOutput, PipelineError> {
    let start = Instant::now();
    let mut aps = Vec::new();
    let raw = parse_ltl(text, &mut aps)?;
    let f = to_nnf(&raw)?;
    let single = PipelineConfig {
        race: false,
        ..cfg.clone()
    };
    let Ok(neg) = to_nnf(&Formula::not(raw)) else {
        return translate_formula(&f, &aps, &single, None);
    };

    let progress = [Arc::new(Progress::default()), Arc::new(Progress::default())];
    let (tx, rx) = mpsc::channel();
    let mut results: [Option<Result<PipelineOutput, PipelineError>>; 2] = [None, None];
    thread::scope(|scope| {
        for (side, formula) in [f.clone(), neg].into_iter().enumerate() {
            let tx = tx.clone();
            let (aps, single, progress) = (&aps, &single, progress[side].clone());
            scope.spawn(move || {
                let r = translate_formula(&formula, aps, single, Some(progress));
                let _ = tx.send((side, r));
            });
        }
        drop(tx);
        // size to beat, per side still running
        let mut threshold: [Option<usize>; 2] = [None, None];
        while results.iter().any(Option::is_none) {
            match rx.recv_timeout(Duration::from_millis(2)) {
                Ok((side, r)) => {
                    if let Ok(out) = &r {
                        let other = 1 - side;
                        // the negation has to be strictly smaller to win
                        threshold[other] = Some(if other == 1 {
                            out.stats.dpa_states.saturating_sub(1)
                        } else {
                            out.stats.dpa_states
                        });
                    }
                    results[side] = Some(r);
                }
                Err(mpsc::RecvTimeoutError::Timeout) => {}
                Err(mpsc::RecvTimeoutError::Disconnected) => break,
            }
            for side in 0..2 {
                if results[side].is_none() && threshold[side].is_some_and(|t| progress[side].explored() > t) {
                    progress[side].cancel();
                }
            }
        }
    });
    let [pos, neg] = results.map(|r| r.expect("both workers report"));
    let mut out = match (pos, neg) {
        (Ok(p), Ok(n)) if n.stats.dpa_states < p.stats.dpa_states => complemented(n, cfg),
        (Ok(p), _) => p,
        (Err(_), Ok(n)) => complemented(n, cfg),
        (Err(e), Err(e2)) => return Err(if e.is_cancelled() { e2 } else { e }),
    };
    out.formula = f;
    out.stats.millis = start.elapsed().as_millis();
    Ok(out)
}

fn complemented(mut out: PipelineOutput, cfg: &PipelineConfig) -> PipelineOutput {
    let dpa = out.dpa.complement();
    out.dpa = if cfg.compress { dpa.compress() } else { dpa };
    out.stats.colors = out.dpa.used_colors().len();
    out.stats.max_color = out.dpa.max_color();
    out.stats.negated = true;
    out
}
