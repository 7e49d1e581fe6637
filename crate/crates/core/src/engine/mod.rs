//! Referee for one game between a cop strategy and a robber strategy.
//!
//! Order of events: the cops place, the robber places having seen them, then
//! each round is a cop phase (any subset of cops moves one edge) followed by
//! a robber move. Capture is checked after placement and after each phase;
//! a capture in either phase of round `r` ends the game with length `r`.

mod batch;
mod transcript;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graphs::{GraphError, ProductGraph, Vertex};

pub use batch::{batch_play, write_summaries_csv, BatchConfig, CopFactory, OutcomeKind, RobberFactory, TrialSummary};
pub use transcript::{Outcome, RoundRecord, Transcript};

/// Seeded generator handed to strategies. ChaCha keeps streams stable across platforms.
pub type GameRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Turn {
    CopsPlace,
    RobberPlace,
    Cops,
    Robber,
}

/// Everything a strategy may look at. Both sides see the full position.
#[derive(Clone, Debug)]
pub struct GameState<'g> {
    pub graph: &'g ProductGraph,
    pub cops: Vec<Vertex>,
    pub robber: Option<Vertex>,
    pub round: usize,
    pub to_move: Turn,
}

impl GameState<'_> {
    /// The robber's vertex. Panics before robber placement.
    pub fn robber(&self) -> &Vertex {
        self.robber.as_ref().expect("robber is placed before any move is requested")
    }

    /// Lowest-index cop sharing the robber's vertex.
    pub fn capturing_cop(&self) -> Option<usize> {
        let r = self.robber.as_ref()?;
        self.cops.iter().position(|c| c == r)
    }

    pub fn min_cop_distance(&self) -> Option<usize> {
        let r = self.robber.as_ref()?;
        self.cops.iter().map(|c| self.graph.distance(c, r)).min()
    }
}

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error("{0}")]
    Unsupported(String),
    #[error("state missing from solver table: {0}")]
    MissingState(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Strategy for the whole cop team.
pub trait CopStrategy: Send {
    fn name(&self) -> &str;

    /// Initial positions for `cops` cops.
    fn place(&mut self, graph: &ProductGraph, cops: usize, rng: &mut GameRng) -> Result<Vec<Vertex>, StrategyError>;

    /// New position of every cop; returning the current vertex means "pass".
    fn respond(&mut self, state: &GameState<'_>, rng: &mut GameRng) -> Result<Vec<Vertex>, StrategyError>;
}

pub trait RobberStrategy: Send {
    fn name(&self) -> &str;

    /// Starting vertex, chosen after seeing the cop placement.
    fn place(&mut self, state: &GameState<'_>, rng: &mut GameRng) -> Result<Vertex, StrategyError>;

    fn respond(&mut self, state: &GameState<'_>, rng: &mut GameRng) -> Result<Vertex, StrategyError>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Cops,
    Robber,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Cops => "cop",
            Role::Robber => "robber",
        })
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("at least one cop is required")]
    NoCops,
    #[error("max_rounds must be at least 1")]
    NoRounds,
    #[error("{role} strategy `{strategy}` faulted in round {round}{}: {detail}",
        .cop.map(|c| format!(" (cop {c})")).unwrap_or_default())]
    StrategyFault { role: Role, strategy: String, round: usize, cop: Option<usize>, detail: String },
    #[error("trial {trial} (seed {seed}): {source}")]
    Trial {
        trial: usize,
        seed: u64,
        #[source]
        source: Box<EngineError>,
    },
    #[error("transcript line {line}: {detail}")]
    Transcript { line: usize, detail: String },
}

/// Independent cop and robber generators derived from one seed.
pub fn game_rngs(seed: u64) -> (GameRng, GameRng) {
    let mut cop = GameRng::seed_from_u64(seed);
    cop.set_stream(0);
    let mut robber = GameRng::seed_from_u64(seed);
    robber.set_stream(1);
    (cop, robber)
}

/// Default round cap: `4 n ceil(lg n)` for `n` factors, raised to twice the
/// capture bound and four times the diameter so products of deep trees are
/// never truncated before the bound.
pub fn default_max_rounds(graph: &ProductGraph) -> usize {
    let n = graph.dimension();
    let factor_radii: Vec<usize> = graph.factors().iter().map(|f| f.radius()).collect();
    let bound = crate::cops::capture_bound(&factor_radii);
    (4 * n * crate::ceil_log2(n)).max(2 * bound).max(4 * graph.diameter()).max(1)
}

fn check_cop_moves(
    graph: &ProductGraph,
    strategy: &str,
    round: usize,
    from: Option<&[Vertex]>,
    to: &[Vertex],
    k: usize,
) -> Result<(), EngineError> {
    let fault = |cop: Option<usize>, detail: String| EngineError::StrategyFault {
        role: Role::Cops,
        strategy: strategy.to_string(),
        round,
        cop,
        detail,
    };
    if to.len() != k {
        return Err(fault(None, format!("returned {} positions for {k} cops", to.len())));
    }
    for (i, v) in to.iter().enumerate() {
        if !graph.contains(v) {
            return Err(fault(Some(i), format!("invalid vertex {v:?}")));
        }
        if let Some(from) = from {
            if !graph.is_move(&from[i], v) {
                return Err(fault(
                    Some(i),
                    format!("illegal move {} -> {}", graph.format_vertex(&from[i]), graph.format_vertex(v)),
                ));
            }
        }
    }
    Ok(())
}

fn check_robber_move(
    graph: &ProductGraph,
    strategy: &str,
    round: usize,
    from: Option<&Vertex>,
    to: &Vertex,
) -> Result<(), EngineError> {
    let fault = |detail: String| EngineError::StrategyFault {
        role: Role::Robber,
        strategy: strategy.to_string(),
        round,
        cop: None,
        detail,
    };
    if !graph.contains(to) {
        return Err(fault(format!("invalid vertex {to:?}")));
    }
    if let Some(from) = from {
        if !graph.is_move(from, to) {
            return Err(fault(format!("illegal move {} -> {}", graph.format_vertex(from), graph.format_vertex(to))));
        }
    }
    Ok(())
}

/// Plays one game to capture or `max_rounds`.
pub fn play(
    graph: &ProductGraph,
    k: usize,
    cops: &mut dyn CopStrategy,
    robber: &mut dyn RobberStrategy,
    max_rounds: usize,
    seed: u64,
) -> Result<Transcript, EngineError> {
    if k == 0 {
        return Err(EngineError::NoCops);
    }
    if max_rounds == 0 {
        return Err(EngineError::NoRounds);
    }
    let (mut cop_rng, mut robber_rng) = game_rngs(seed);
    let cop_name = cops.name().to_string();
    let robber_name = robber.name().to_string();
    let cop_fault = |round: usize, e: StrategyError| EngineError::StrategyFault {
        role: Role::Cops,
        strategy: cop_name.clone(),
        round,
        cop: None,
        detail: e.to_string(),
    };

    let start = cops.place(graph, k, &mut cop_rng).map_err(|e| cop_fault(0, e))?;
    check_cop_moves(graph, &cop_name, 0, None, &start, k)?;
    let mut state = GameState { graph, cops: start.clone(), robber: None, round: 0, to_move: Turn::RobberPlace };
    let robber_start = robber.place(&state, &mut robber_rng).map_err(|e| robber_fault(&robber_name, 0, e))?;
    check_robber_move(graph, &robber_name, 0, None, &robber_start)?;
    state.robber = Some(robber_start.clone());

    let mut transcript = Transcript {
        graph: graph.name().to_string(),
        cops: k,
        seed,
        cop_start: start,
        robber_start,
        rounds: Vec::new(),
        outcome: Outcome::Survived { rounds_played: max_rounds },
    };
    if let Some(c) = state.capturing_cop() {
        transcript.outcome = Outcome::Captured { round: 0, by_cop: c };
        return Ok(transcript);
    }

    for round in 1..=max_rounds {
        state.round = round;
        state.to_move = Turn::Cops;
        let next = cops.respond(&state, &mut cop_rng).map_err(|e| cop_fault(round, e))?;
        check_cop_moves(graph, &cop_name, round, Some(&state.cops), &next, k)?;
        let cop_moves: Vec<(usize, Vertex)> =
            next.iter().enumerate().filter(|(i, v)| **v != state.cops[*i]).map(|(i, v)| (i, v.clone())).collect();
        state.cops = next;
        if let Some(c) = state.capturing_cop() {
            transcript.rounds.push(RoundRecord { round, cop_moves, robber_move: None });
            transcript.outcome = Outcome::Captured { round, by_cop: c };
            return Ok(transcript);
        }

        state.to_move = Turn::Robber;
        let r = robber.respond(&state, &mut robber_rng).map_err(|e| robber_fault(&robber_name, round, e))?;
        check_robber_move(graph, &robber_name, round, state.robber.as_ref(), &r)?;
        state.robber = Some(r.clone());
        transcript.rounds.push(RoundRecord { round, cop_moves, robber_move: Some(r) });
        if let Some(c) = state.capturing_cop() {
            transcript.outcome = Outcome::Captured { round, by_cop: c };
            return Ok(transcript);
        }
    }
    Ok(transcript)
}

fn robber_fault(name: &str, round: usize, e: StrategyError) -> EngineError {
    EngineError::StrategyFault {
        role: Role::Robber,
        strategy: name.to_string(),
        round,
        cop: None,
        detail: e.to_string(),
    }
}
