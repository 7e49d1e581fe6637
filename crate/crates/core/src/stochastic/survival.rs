use std::sync::Arc;

use crate::cops::{parity_greedy_cop, CopPlacement};
use crate::engine::{batch_play, BatchConfig, CopStrategy, EngineError, OutcomeKind, RobberStrategy};
use crate::graphs::{hypercube, GraphError};
use crate::robbers::{random_robber, PlacementPolicy};

use super::{LowerBoundParams, StochasticError};

#[derive(Clone, Debug)]
pub struct SurvivalReport {
    pub params: LowerBoundParams,
    pub cops: usize,
    pub trials: usize,
    /// Rounds the robber must stay free: `ceil((1 - eps) T)`.
    pub required_rounds: usize,
    pub survived: usize,
    pub fraction: f64,
    /// Game lengths, capped at the round limit.
    pub lengths: Vec<usize>,
    pub captured: Vec<bool>,
}

impl SurvivalReport {
    /// Nearest-rank quantile of the (capped) game lengths.
    pub fn quantile(&self, q: f64) -> usize {
        let mut v = self.lengths.clone();
        v.sort_unstable();
        let idx = ((q.clamp(0.0, 1.0) * v.len() as f64).ceil() as usize).clamp(1, v.len()) - 1;
        v[idx]
    }
}

fn params(n: usize, cops: usize) -> Result<LowerBoundParams, StochasticError> {
    // cop count n^d; a single cop gives d = 0, which the formulas tolerate
    let d = (cops as f64).ln() / (n as f64).ln();
    if n < 3 {
        return Err(StochasticError::LowerBound { n, d });
    }
    let mut p = super::lower_bound_params(n, d.max(f64::MIN_POSITIVE))?;
    p.d = d;
    Ok(p)
}

#[derive(Debug, thiserror::Error)]
pub enum SurvivalError {
    #[error(transparent)]
    Params(#[from] StochasticError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Uniformly placed parity-greedy cops against a random robber that starts
/// at least `n/4 + 1` from every cop, on `Q_n`, through [`batch_play`].
///
/// Trial `t` uses seed `seed + t`. Games run for `max_rounds` (default: the
/// required survival time); a trial counts as survived when no capture
/// happens in the first `required_rounds` rounds.
pub fn survival_experiment(
    n: usize,
    cops: usize,
    trials: usize,
    seed: u64,
    max_rounds: Option<usize>,
) -> Result<SurvivalReport, SurvivalError> {
    if trials == 0 {
        return Err(StochasticError::NoTrials.into());
    }
    let params = params(n, cops)?;
    let required_rounds = params.threshold.max(0.0).ceil() as usize;
    let graph = Arc::new(hypercube(n)?);
    let distance = params.placement_distance;
    let config = BatchConfig {
        graph,
        cops,
        max_rounds: max_rounds.unwrap_or(required_rounds).max(1),
        cop_factory: Arc::new(|| Ok(Box::new(parity_greedy_cop(CopPlacement::Uniform)) as Box<dyn CopStrategy>)),
        robber_factory: Arc::new(move || {
            Ok(Box::new(random_robber(PlacementPolicy::FarFromCops).require_distance(Some(distance)))
                as Box<dyn RobberStrategy>)
        }),
    };
    let rows = batch_play(&config, trials, seed)?;
    let captured: Vec<bool> = rows.iter().map(|r| r.outcome == OutcomeKind::Captured).collect();
    let survived = rows.iter().filter(|r| r.outcome == OutcomeKind::Survived || r.length > required_rounds).count();
    Ok(SurvivalReport {
        params,
        cops,
        trials,
        required_rounds,
        survived,
        fraction: survived as f64 / trials as f64,
        lengths: rows.iter().map(|r| r.length).collect(),
        captured,
    })
}
