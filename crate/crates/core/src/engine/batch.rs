use std::fmt;
use std::io;
use std::sync::Arc;

use rayon::prelude::*;

use crate::graphs::ProductGraph;

use super::{play, CopStrategy, EngineError, Outcome, RobberStrategy, StrategyError, Transcript};

pub type CopFactory = Arc<dyn Fn() -> Result<Box<dyn CopStrategy>, StrategyError> + Send + Sync>;
pub type RobberFactory = Arc<dyn Fn() -> Result<Box<dyn RobberStrategy>, StrategyError> + Send + Sync>;

/// One experiment: a graph, a team size and fresh strategy instances per trial.
#[derive(Clone)]
pub struct BatchConfig {
    pub graph: Arc<ProductGraph>,
    pub cops: usize,
    pub max_rounds: usize,
    pub cop_factory: CopFactory,
    pub robber_factory: RobberFactory,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutcomeKind {
    Captured,
    Survived,
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutcomeKind::Captured => "captured",
            OutcomeKind::Survived => "survived",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialSummary {
    pub trial: usize,
    pub seed: u64,
    pub outcome: OutcomeKind,
    pub length: usize,
}

impl TrialSummary {
    fn of(trial: usize, t: &Transcript) -> Self {
        let outcome = match t.outcome {
            Outcome::Captured { .. } => OutcomeKind::Captured,
            Outcome::Survived { .. } => OutcomeKind::Survived,
        };
        Self { trial, seed: t.seed, outcome, length: t.length() }
    }
}

impl BatchConfig {
    /// Plays trial `trial` with seed `base_seed + trial`.
    pub fn play_trial(&self, trial: usize, base_seed: u64) -> Result<Transcript, EngineError> {
        let seed = base_seed.wrapping_add(trial as u64);
        let wrap = |source: EngineError| EngineError::Trial { trial, seed, source: Box::new(source) };
        let build = |e: StrategyError| {
            wrap(EngineError::StrategyFault {
                role: super::Role::Cops,
                strategy: "<factory>".into(),
                round: 0,
                cop: None,
                detail: e.to_string(),
            })
        };
        let mut cops = (self.cop_factory)().map_err(build)?;
        let mut robber = (self.robber_factory)().map_err(build)?;
        play(&self.graph, self.cops, cops.as_mut(), robber.as_mut(), self.max_rounds, seed).map_err(wrap)
    }
}

/// Runs `trials` independent games in parallel. Results are in trial order and
/// identical to a sequential run; the first failing trial (by index) is reported.
pub fn batch_play(config: &BatchConfig, trials: usize, base_seed: u64) -> Result<Vec<TrialSummary>, EngineError> {
    let results: Vec<Result<TrialSummary, EngineError>> = (0..trials)
        .into_par_iter()
        .map(|t| config.play_trial(t, base_seed).map(|tr| TrialSummary::of(t, &tr)))
        .collect();
    results.into_iter().collect()
}

/// CSV with columns `trial,seed,outcome,length`.
pub fn write_summaries_csv<W: io::Write>(mut out: W, rows: &[TrialSummary]) -> io::Result<()> {
    writeln!(out, "trial,seed,outcome,length")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.trial, r.seed, r.outcome, r.length)?;
    }
    Ok(())
}
