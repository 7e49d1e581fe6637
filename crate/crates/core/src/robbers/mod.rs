//! Robber strategies and start-vertex selection.

use std::cmp::Ordering;
use std::sync::Arc;

use rand::Rng;

use crate::engine::{GameRng, GameState, RobberStrategy, StrategyError};
use crate::graphs::{ProductGraph, Vertex};
use crate::solver::SolverTable;

pub use crate::solver::{extract_robber as solver_optimal_robber, SolverRobber};

/// Random starts for the bit-flip ascent on implicit graphs.
pub const ASCENT_STARTS: usize = 32;

#[derive(Clone, Debug)]
pub enum PlacementPolicy {
    FarFromCops,
    Fixed(Vertex),
    SolverOptimal(Arc<SolverTable>),
}

impl PlacementPolicy {
    pub fn place(&self, state: &GameState<'_>, rng: &mut GameRng) -> Result<Vertex, StrategyError> {
        match self {
            PlacementPolicy::FarFromCops => Ok(far_placement(state.graph, &state.cops, rng)),
            PlacementPolicy::Fixed(v) => Ok(v.clone()),
            PlacementPolicy::SolverOptimal(table) => {
                let cops = state
                    .cops
                    .iter()
                    .map(|c| state.graph.index_of(c).ok_or_else(|| StrategyError::MissingState(format!("{c:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(state.graph.vertex_at(table.best_robber_placement(&cops)))
            }
        }
    }
}

/// Smallest distance from `v` to any cop.
pub fn min_distance(graph: &ProductGraph, cops: &[Vertex], v: &Vertex) -> usize {
    cops.iter().map(|c| graph.distance(c, v)).min().unwrap_or(usize::MAX)
}

/// Ascent objective: larger minimum distance, then fewer cops at that
/// minimum, then larger total distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Score {
    min: usize,
    at_min: usize,
    sum: usize,
}

impl Score {
    fn of(dists: impl Iterator<Item = usize>) -> Self {
        let mut s = Score { min: usize::MAX, at_min: 0, sum: 0 };
        for d in dists {
            s.sum += d;
            match d.cmp(&s.min) {
                Ordering::Less => {
                    s.min = d;
                    s.at_min = 1;
                }
                Ordering::Equal => s.at_min += 1,
                Ordering::Greater => {}
            }
        }
        s
    }
}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        self.min.cmp(&other.min).then(other.at_min.cmp(&self.at_min)).then(self.sum.cmp(&other.sum))
    }
}

/// A vertex far from every cop.
///
/// Explicit graphs are scanned exhaustively (lowest label among maximizers).
/// Implicit products use steepest ascent over single-coordinate moves from
/// [`ASCENT_STARTS`] random starts plus the point farthest from cop 0; the
/// best local optimum wins, lexicographically smallest on ties.
pub fn far_placement(graph: &ProductGraph, cops: &[Vertex], rng: &mut GameRng) -> Vertex {
    if cops.is_empty() {
        return graph.center();
    }
    if let Some(ex) = graph.explicit() {
        let mut best = (0usize, 0usize);
        for idx in 0..ex.vertex_count() {
            let d = min_distance(graph, cops, &graph.vertex_at(idx));
            if d > best.0 {
                best = (d, idx);
            }
        }
        return graph.vertex_at(best.1);
    }
    if cops.iter().all(|c| *c == cops[0]) {
        return graph.farthest_from(&cops[0]);
    }
    let mut starts = vec![graph.farthest_from(&cops[0])];
    starts.extend((0..ASCENT_STARTS).map(|_| graph.random_vertex(rng)));
    let mut best: Option<(Score, Vertex)> = None;
    for s in starts {
        let (score, v) = ascend(graph, cops, s);
        let better = match &best {
            None => true,
            Some((bs, bv)) => score > *bs || (score == *bs && v.coords() < bv.coords()),
        };
        if better {
            best = Some((score, v));
        }
    }
    best.expect("at least one start").1
}

fn ascend(graph: &ProductGraph, cops: &[Vertex], mut v: Vertex) -> (Score, Vertex) {
    let mut dists: Vec<usize> = cops.iter().map(|c| graph.distance(c, &v)).collect();
    let mut score = Score::of(dists.iter().copied());
    loop {
        let mut step: Option<(Score, usize, usize)> = None;
        for (i, w) in graph.moves(&v) {
            let f = graph.factor(i);
            let from = v.coord(i);
            let cand = Score::of(
                cops.iter().zip(&dists).map(|(c, &d)| d + f.distance(w, c.coord(i)) - f.distance(from, c.coord(i))),
            );
            if cand > score && step.as_ref().is_none_or(|(s, _, _)| cand > *s) {
                step = Some((cand, i, w));
            }
        }
        let Some((s, i, w)) = step else { return (score, v) };
        let f = graph.factor(i);
        let from = v.coord(i);
        for (c, d) in cops.iter().zip(dists.iter_mut()) {
            *d = *d + f.distance(w, c.coord(i)) - f.distance(from, c.coord(i));
        }
        v.set_coord(i, w);
        score = s;
    }
}

/// [`far_placement`] that fails unless every cop is at least `required` away.
pub fn far_placement_at_least(
    graph: &ProductGraph,
    cops: &[Vertex],
    required: usize,
    rng: &mut GameRng,
) -> Result<Vertex, StrategyError> {
    let v = far_placement(graph, cops, rng);
    let got = min_distance(graph, cops, &v);
    if got < required {
        return Err(StrategyError::Unsupported(format!(
            "far placement reached min-distance {got}, {required} required"
        )));
    }
    Ok(v)
}

/// Moves to a uniformly random neighbor every turn and never passes.
#[derive(Clone, Debug)]
pub struct RandomRobber {
    placement: PlacementPolicy,
    required: Option<usize>,
}

pub fn random_robber(placement: PlacementPolicy) -> RandomRobber {
    RandomRobber { placement, required: None }
}

impl RandomRobber {
    /// Fail placement unless the start is at least `d` from every cop.
    pub fn require_distance(mut self, d: Option<usize>) -> Self {
        self.required = d;
        self
    }
}

impl RobberStrategy for RandomRobber {
    fn name(&self) -> &str {
        "random"
    }

    fn place(&mut self, state: &GameState<'_>, rng: &mut GameRng) -> Result<Vertex, StrategyError> {
        match (self.required, &self.placement) {
            (Some(d), PlacementPolicy::FarFromCops) => far_placement_at_least(state.graph, &state.cops, d, rng),
            _ => self.placement.place(state, rng),
        }
    }

    fn respond(&mut self, state: &GameState<'_>, rng: &mut GameRng) -> Result<Vertex, StrategyError> {
        let r = state.robber();
        let degree = state.graph.degree(r);
        if degree == 0 {
            return Ok(r.clone());
        }
        let pick = rng.random_range(0..degree);
        let (i, w) = state.graph.moves(r).nth(pick).expect("pick < degree");
        Ok(r.with_coord(i, w))
    }
}

/// Greedy evader: maximize the minimum distance to the cops, then the total
/// distance, then take the lexicographically smallest vertex. Passing counts.
#[derive(Clone, Debug)]
pub struct MaxMinRobber {
    placement: PlacementPolicy,
}

pub fn max_min_distance_robber(placement: PlacementPolicy) -> MaxMinRobber {
    MaxMinRobber { placement }
}

impl MaxMinRobber {
    pub fn decide(graph: &ProductGraph, cops: &[Vertex], r: &Vertex) -> Vertex {
        let dists: Vec<usize> = cops.iter().map(|c| graph.distance(c, r)).collect();
        let key = |min: usize, sum: usize| (min, sum);
        let pass_min = dists.iter().copied().min().unwrap_or(usize::MAX);
        let mut best = (key(pass_min, dists.iter().sum()), r.clone());
        for (i, w) in graph.moves(r) {
            let f = graph.factor(i);
            let from = r.coord(i);
            let (mut min, mut sum) = (usize::MAX, 0);
            for (c, &d) in cops.iter().zip(&dists) {
                let nd = d + f.distance(w, c.coord(i)) - f.distance(from, c.coord(i));
                min = min.min(nd);
                sum += nd;
            }
            let k = key(min, sum);
            if k > best.0 {
                best = (k, r.with_coord(i, w));
            } else if k == best.0 {
                let cand = r.with_coord(i, w);
                if cand.coords() < best.1.coords() {
                    best.1 = cand;
                }
            }
        }
        best.1
    }
}

impl RobberStrategy for MaxMinRobber {
    fn name(&self) -> &str {
        "maxmin"
    }

    fn place(&mut self, state: &GameState<'_>, rng: &mut GameRng) -> Result<Vertex, StrategyError> {
        self.placement.place(state, rng)
    }

    fn respond(&mut self, state: &GameState<'_>, _: &mut GameRng) -> Result<Vertex, StrategyError> {
        Ok(Self::decide(state.graph, &state.cops, state.robber()))
    }
}
