//! Cop strategies: greedy, parity-greedy, the two-tree chase and the squad
//! strategy for products of trees.

mod squad;

use crate::ceil_log2;
use crate::engine::{CopStrategy, GameRng, GameState, StrategyError};
use crate::graphs::{ProductGraph, Vertex};

pub use squad::{active_coords, seq_prefix, squad_size, SquadCops, SquadError};

/// `(sum of radii) * ceil(lg n) - floor((n - 1) / 2) + 1` for `n` factors.
pub fn capture_bound(radii: &[usize]) -> usize {
    let n = radii.len();
    if n == 0 {
        return 0;
    }
    let total: usize = radii.iter().sum();
    let v = (total * ceil_log2(n)) as i64 - ((n as i64 - 1) / 2) + 1;
    v.max(0) as usize
}

/// [`capture_bound`] for the factors of `graph`.
pub fn capture_bound_for(graph: &ProductGraph) -> usize {
    let radii: Vec<usize> = graph.factors().iter().map(|f| f.radius()).collect();
    capture_bound(&radii)
}

/// One step from `cop` toward `robber` in coordinate `coord`.
pub(crate) fn step_in(graph: &ProductGraph, cop: &Vertex, robber: &Vertex, coord: usize) -> Vertex {
    let to = graph
        .factor(coord)
        .step_toward(cop.coord(coord), robber.coord(coord))
        .expect("caller only steps in a disagreeing coordinate");
    cop.with_coord(coord, to)
}

/// Greedy step: first disagreeing coordinate, lowest-label closer neighbor.
pub fn greedy_step(graph: &ProductGraph, cop: &Vertex, robber: &Vertex) -> Vertex {
    match cop.differing_coords(robber).next() {
        Some(i) => step_in(graph, cop, robber, i),
        None => cop.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CopPlacement {
    /// Every cop on the product center.
    Center,
    /// Independent uniform vertices.
    Uniform,
    Fixed(Vec<Vertex>),
}

impl CopPlacement {
    pub fn place(&self, graph: &ProductGraph, cops: usize, rng: &mut GameRng) -> Result<Vec<Vertex>, StrategyError> {
        match self {
            CopPlacement::Center => Ok(vec![graph.center(); cops]),
            CopPlacement::Uniform => Ok((0..cops).map(|_| graph.random_vertex(rng)).collect()),
            CopPlacement::Fixed(vs) if vs.len() == cops => Ok(vs.clone()),
            CopPlacement::Fixed(vs) => {
                Err(StrategyError::Unsupported(format!("{} fixed positions for {cops} cops", vs.len())))
            }
        }
    }
}

/// Every cop steps toward the robber each turn; with `parity` set a cop at
/// even distance sits still instead.
#[derive(Clone, Debug)]
pub struct GreedyCops {
    placement: CopPlacement,
    parity: bool,
}

pub fn greedy_cop(placement: CopPlacement) -> GreedyCops {
    GreedyCops { placement, parity: false }
}

pub fn parity_greedy_cop(placement: CopPlacement) -> GreedyCops {
    GreedyCops { placement, parity: true }
}

impl GreedyCops {
    pub fn decide(&self, graph: &ProductGraph, cop: &Vertex, robber: &Vertex) -> Vertex {
        if self.parity && graph.distance(cop, robber).is_multiple_of(2) {
            return cop.clone();
        }
        greedy_step(graph, cop, robber)
    }
}

impl CopStrategy for GreedyCops {
    fn name(&self) -> &str {
        if self.parity {
            "parity-greedy"
        } else {
            "greedy"
        }
    }

    fn place(&mut self, graph: &ProductGraph, cops: usize, rng: &mut GameRng) -> Result<Vec<Vertex>, StrategyError> {
        self.placement.place(graph, cops, rng)
    }

    fn respond(&mut self, state: &GameState<'_>, _: &mut GameRng) -> Result<Vec<Vertex>, StrategyError> {
        let r = state.robber();
        Ok(state.cops.iter().map(|c| self.decide(state.graph, c, r)).collect())
    }
}

/// Per-factor distances between one cop and the robber on two coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChaseState {
    pub d1: usize,
    pub d2: usize,
}

impl ChaseState {
    pub fn new(graph: &ProductGraph, cop: &Vertex, robber: &Vertex, pair: (usize, usize)) -> Self {
        let d = |i: usize| graph.factor(i).distance(cop.coord(i), robber.coord(i));
        Self { d1: d(pair.0), d2: d(pair.1) }
    }

    pub fn distance(&self) -> usize {
        self.d1 + self.d2
    }

    /// `None` to pass, `Some(false)` to step in the first coordinate, `Some(true)` in the second.
    pub fn decide(&self) -> Option<bool> {
        if self.distance().is_multiple_of(2) {
            None
        } else {
            Some(self.d2 > self.d1)
        }
    }
}

/// Chase move for one cop restricted to the coordinates in `pair`.
pub fn chase_step(graph: &ProductGraph, cop: &Vertex, robber: &Vertex, pair: (usize, usize)) -> Vertex {
    match ChaseState::new(graph, cop, robber, pair).decide() {
        None => cop.clone(),
        Some(false) => step_in(graph, cop, robber, pair.0),
        Some(true) => step_in(graph, cop, robber, pair.1),
    }
}

fn require_trees(graph: &ProductGraph) -> Result<(), StrategyError> {
    match graph.factors().iter().find(|f| !f.is_tree()) {
        Some(f) => Err(StrategyError::Unsupported(format!("factor {} is not a tree", f.name()))),
        None => Ok(()),
    }
}

/// One cop on the product of two trees, placed at the center.
#[derive(Clone, Debug, Default)]
pub struct Lemma1Cop;

pub fn product_single_cop() -> Lemma1Cop {
    Lemma1Cop
}

impl CopStrategy for Lemma1Cop {
    fn name(&self) -> &str {
        "lemma1"
    }

    fn place(&mut self, graph: &ProductGraph, cops: usize, _: &mut GameRng) -> Result<Vec<Vertex>, StrategyError> {
        if graph.dimension() != 2 || cops != 1 {
            return Err(StrategyError::Unsupported(format!(
                "lemma1 plays one cop on a product of two trees, got {cops} cops on {} factors",
                graph.dimension()
            )));
        }
        require_trees(graph)?;
        Ok(vec![graph.center()])
    }

    fn respond(&mut self, state: &GameState<'_>, _: &mut GameRng) -> Result<Vec<Vertex>, StrategyError> {
        Ok(vec![chase_step(state.graph, &state.cops[0], state.robber(), (0, 1))])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{hypercube, path_graph, product, single};
    use std::sync::Arc;

    fn bits(g: &ProductGraph, s: &str) -> Vertex {
        g.parse_vertex(s).unwrap()
    }

    #[test]
    fn bounds() {
        assert_eq!(capture_bound(&[1; 11]), 40);
        assert_eq!(capture_bound(&[1; 3]), 6);
        assert_eq!(capture_bound(&[1; 8]), 22);
        assert_eq!(capture_bound(&[1]), 1);
        assert_eq!(capture_bound_for(&hypercube(11).unwrap()), 40);
    }

    #[test]
    fn greedy_examples() {
        let q4 = hypercube(4).unwrap();
        assert_eq!(greedy_step(&q4, &bits(&q4, "0000"), &bits(&q4, "0011")), bits(&q4, "0010"));
        let q3 = hypercube(3).unwrap();
        assert_eq!(greedy_step(&q3, &bits(&q3, "000"), &bits(&q3, "100")), bits(&q3, "100"));
        let p5 = single(path_graph(5).unwrap());
        assert_eq!(greedy_step(&p5, &Vertex::new(vec![0]), &Vertex::new(vec![4])), Vertex::new(vec![1]));
    }

    #[test]
    fn parity_greedy_examples() {
        let q8 = hypercube(8).unwrap();
        let pg = parity_greedy_cop(CopPlacement::Center);
        let cop = bits(&q8, "00000000");
        assert_eq!(pg.decide(&q8, &cop, &bits(&q8, "11110000")), cop);
        let next = pg.decide(&q8, &cop, &bits(&q8, "11100000"));
        assert_eq!(q8.distance(&next, &bits(&q8, "11100000")), 2);
    }

    #[test]
    fn lemma1_examples() {
        let p3 = Arc::new(path_graph(3).unwrap());
        let g = product(vec![p3.clone(), p3]).unwrap();
        let mut rng = crate::engine::game_rngs(0).0;
        assert_eq!(Lemma1Cop.place(&g, 1, &mut rng).unwrap(), vec![Vertex::new(vec![1, 1])]);
        let cop = Vertex::new(vec![1, 1]);
        assert_eq!(chase_step(&g, &cop, &Vertex::new(vec![0, 0]), (0, 1)), cop);
        assert_eq!(chase_step(&g, &cop, &Vertex::new(vec![0, 1]), (0, 1)), Vertex::new(vec![0, 1]));
        let c4 = Arc::new(crate::graphs::cycle_graph(4).unwrap());
        let bad = product(vec![c4.clone(), c4]).unwrap();
        assert!(Lemma1Cop.place(&bad, 1, &mut rng).is_err());
    }
}
