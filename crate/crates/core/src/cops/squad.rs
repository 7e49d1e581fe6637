//! Team strategy for `ceil((n + 1) / 2)` cops on a product of `n` trees.
//!
//! Cop `i` has reference coordinate `2i` (the even-`n` last cop shares
//! `n - 2` with its partner). In phase `j` a coordinate is active for the cop
//! when its first `j` bits (out of `ceil(lg n)`) differ from the reference's.
//! Step 1 walks the phases: keep active agreements, otherwise close the first
//! active disagreement. Step 2 holds every coordinate outside the cop's final
//! inactive pair and chases the robber inside it.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::ceil_log2;
use crate::engine::{CopStrategy, GameRng, GameState, StrategyError};
use crate::graphs::{product, ProductGraph, Vertex};
use crate::solver::{self, extract_cops, SolverCops, SolverTable};

use super::{chase_step, greedy_cop, require_trees, step_in, CopPlacement, GreedyCops};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SquadError {
    #[error("prefix `{0}` is not a binary string")]
    NotBinary(String),
    #[error("prefix `{prefix}` is longer than {bits} bits")]
    PrefixTooLong { prefix: String, bits: usize },
    #[error("phase {phase} outside 1..={max}")]
    Phase { phase: usize, max: usize },
    #[error("cop {cop} outside 0..{cops}")]
    Cop { cop: usize, cops: usize },
}

/// Team size for `n` tree factors.
pub fn squad_size(n: usize) -> usize {
    n.div_ceil(2) + usize::from(n.is_multiple_of(2))
}

fn reference(i: usize, n: usize) -> usize {
    if 2 * i < n {
        2 * i
    } else {
        n - 2
    }
}

/// Coordinates `x < n` whose `ceil(lg n)`-bit form starts with `s`.
pub fn seq_prefix(s: &str, n: usize) -> Result<Vec<usize>, SquadError> {
    let bits = ceil_log2(n);
    if s.chars().any(|c| c != '0' && c != '1') {
        return Err(SquadError::NotBinary(s.to_string()));
    }
    if s.len() > bits {
        return Err(SquadError::PrefixTooLong { prefix: s.to_string(), bits });
    }
    if s.is_empty() {
        return Ok((0..n).collect());
    }
    let p = usize::from_str_radix(s, 2).expect("checked binary");
    let shift = bits - s.len();
    Ok((0..n).filter(|x| x >> shift == p).collect())
}

/// Active coordinates of cop `i` in phase `j`.
pub fn active_coords(i: usize, j: usize, n: usize) -> Result<Vec<usize>, SquadError> {
    let bits = ceil_log2(n);
    let max = bits.saturating_sub(1);
    if j == 0 || j > max {
        return Err(SquadError::Phase { phase: j, max });
    }
    let cops = squad_size(n);
    if i >= cops {
        return Err(SquadError::Cop { cop: i, cops });
    }
    let shift = bits - j;
    let r = reference(i, n) >> shift;
    Ok((0..n).filter(|x| x >> shift != r).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Inner {
    Chase(usize, usize),
    Line(usize),
    Joint(usize, usize),
}

impl Inner {
    fn contains(self, x: usize) -> bool {
        match self {
            Inner::Chase(a, b) | Inner::Joint(a, b) => x == a || x == b,
            Inner::Line(a) => x == a,
        }
    }
}

#[derive(Clone, Debug)]
struct Plan {
    reference: usize,
    phase: usize,
    step2: bool,
    inner: Inner,
}

enum Decision {
    Move(Vertex),
    Joint,
}

#[derive(Clone, Debug)]
struct Squads {
    n: usize,
    bits: usize,
    plans: Vec<Plan>,
    prev_robber: Option<Vertex>,
    /// Solved two-cop game on the last two factors (even `n` only).
    pair: Option<(ProductGraph, Arc<SolverTable>)>,
}

#[derive(Clone, Debug)]
enum Mode {
    Greedy(GreedyCops),
    Solver(SolverCops),
    Squads(Box<Squads>),
}

/// The squad strategy. Build one per graph with [`SquadCops::new`].
#[derive(Clone, Debug)]
pub struct SquadCops {
    n: usize,
    mode: Mode,
}

impl SquadCops {
    pub fn new(graph: &ProductGraph) -> Result<Self, StrategyError> {
        require_trees(graph)?;
        let n = graph.dimension();
        let mode = match n {
            1 => Mode::Greedy(greedy_cop(CopPlacement::Center)),
            2 => Mode::Solver(extract_cops(Arc::new(solve_explicit(graph)?))),
            _ => {
                let pair = if n.is_multiple_of(2) {
                    let grid = product(vec![graph.factors()[n - 2].clone(), graph.factors()[n - 1].clone()])?;
                    let table = Arc::new(solve_explicit(&grid)?);
                    Some((grid, table))
                } else {
                    None
                };
                let mut s = Squads { n, bits: ceil_log2(n), plans: Vec::new(), prev_robber: None, pair };
                s.reset();
                Mode::Squads(Box::new(s))
            }
        };
        Ok(Self { n, mode })
    }

    /// Number of cops this strategy plays with.
    pub fn cops(&self) -> usize {
        squad_size(self.n)
    }

    fn squads_state(&self) -> Option<&Squads> {
        match &self.mode {
            Mode::Squads(s) => Some(s),
            _ => None,
        }
    }

    /// Current phase of cop `i`; `None` once it is in Step 2 (or for `n <= 2`).
    pub fn phase(&self, i: usize) -> Option<usize> {
        let p = &self.squads_state()?.plans[i];
        (!p.step2).then_some(p.phase)
    }

    pub fn in_step_two(&self, i: usize) -> bool {
        self.squads_state().is_some_and(|s| s.plans[i].step2)
    }

    /// Coordinates cop `i` currently treats as active.
    pub fn active_set(&self, i: usize) -> Vec<usize> {
        let Some(s) = self.squads_state() else { return Vec::new() };
        (0..s.n).filter(|&x| s.is_active(&s.plans[i], x)).collect()
    }

    pub fn inactive_set(&self, i: usize) -> Vec<usize> {
        let Some(s) = self.squads_state() else { return Vec::new() };
        (0..s.n).filter(|&x| !s.is_active(&s.plans[i], x)).collect()
    }

    /// Squads keyed by their current prefix string.
    pub fn squads(&self) -> BTreeMap<String, Vec<usize>> {
        let mut out: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        if let Some(s) = self.squads_state() {
            for (i, p) in s.plans.iter().enumerate() {
                out.entry(s.label(p)).or_default().push(i);
            }
        }
        out
    }
}

fn solve_explicit(graph: &ProductGraph) -> Result<SolverTable, StrategyError> {
    let ex = graph
        .explicit()
        .ok_or_else(|| StrategyError::Unsupported(format!("{} is too large for the two-cop endgame", graph.name())))?;
    solver::solve(ex, 2).map_err(|e| StrategyError::Unsupported(e.to_string()))
}

impl Squads {
    fn reset(&mut self) {
        let k = squad_size(self.n);
        let even = self.n.is_multiple_of(2);
        self.plans = (0..k)
            .map(|i| {
                let r = reference(i, self.n);
                let inner = if even && i + 2 >= k {
                    Inner::Joint(self.n - 2, self.n - 1)
                } else if r + 1 < self.n {
                    Inner::Chase(r, r + 1)
                } else {
                    Inner::Line(r)
                };
                Plan { reference: r, phase: 1, step2: false, inner }
            })
            .collect();
        self.prev_robber = None;
    }

    fn phase_of(&self, p: &Plan) -> usize {
        if p.step2 {
            self.bits - 1
        } else {
            p.phase
        }
    }

    fn is_active(&self, p: &Plan, x: usize) -> bool {
        if p.step2 {
            return !p.inner.contains(x);
        }
        let shift = self.bits - p.phase;
        x >> shift != p.reference >> shift
    }

    fn label(&self, p: &Plan) -> String {
        let j = self.phase_of(p);
        format!("{:0width$b}", p.reference >> (self.bits - j), width = j)
    }

    fn decide(&mut self, i: usize, graph: &ProductGraph, cop: &Vertex, prev: &Vertex, robber: &Vertex) -> Decision {
        let moved = prev.differing_coords(robber).next();
        loop {
            let plan = &self.plans[i];
            if !plan.step2 {
                if let Some(j) = moved {
                    if self.is_active(plan, j) && cop.coord(j) == prev.coord(j) {
                        return Decision::Move(step_in(graph, cop, robber, j));
                    }
                }
                if let Some(x) = cop.differing_coords(robber).find(|&x| self.is_active(plan, x)) {
                    return Decision::Move(step_in(graph, cop, robber, x));
                }
                let last = self.bits - 1;
                let plan = &mut self.plans[i];
                if plan.phase < last {
                    plan.phase += 1;
                } else {
                    plan.step2 = true;
                }
                continue;
            }
            if let Some(x) = cop.differing_coords(robber).find(|&x| !plan.inner.contains(x)) {
                return Decision::Move(step_in(graph, cop, robber, x));
            }
            return match plan.inner {
                Inner::Chase(a, b) => Decision::Move(chase_step(graph, cop, robber, (a, b))),
                Inner::Line(a) if cop.coord(a) != robber.coord(a) => Decision::Move(step_in(graph, cop, robber, a)),
                Inner::Line(_) => Decision::Move(cop.clone()),
                Inner::Joint(..) => Decision::Joint,
            };
        }
    }

    fn joint_move(&self, cops: [&Vertex; 2], robber: &Vertex) -> [Vertex; 2] {
        let (grid, table) = self.pair.as_ref().expect("even n has a pair table");
        let (a, b) = (self.n - 2, self.n - 1);
        let project =
            |v: &Vertex| grid.index_of(&Vertex::new(vec![v.coord(a) as u16, v.coord(b) as u16])).expect("explicit");
        let (next, _) = table.best_cop_move(&[project(cops[0]), project(cops[1])], project(robber));
        let lift = |v: &Vertex, idx: usize| {
            let w = grid.vertex_at(idx);
            v.with_coord(a, w.coord(0)).with_coord(b, w.coord(1))
        };
        [lift(cops[0], next[0]), lift(cops[1], next[1])]
    }

    fn respond(&mut self, state: &GameState<'_>) -> Vec<Vertex> {
        let robber = state.robber().clone();
        let prev = self.prev_robber.replace(robber.clone()).unwrap_or_else(|| robber.clone());
        let mut next = state.cops.clone();
        let mut joint = Vec::new();
        for (i, cop) in state.cops.iter().enumerate() {
            match self.decide(i, state.graph, cop, &prev, &robber) {
                Decision::Move(v) => next[i] = v,
                Decision::Joint => joint.push(i),
            }
        }
        if let [x, y] = joint[..] {
            let [nx, ny] = self.joint_move([&state.cops[x], &state.cops[y]], &robber);
            next[x] = nx;
            next[y] = ny;
        }
        next
    }
}

impl CopStrategy for SquadCops {
    fn name(&self) -> &str {
        "squad"
    }

    fn place(&mut self, graph: &ProductGraph, cops: usize, rng: &mut GameRng) -> Result<Vec<Vertex>, StrategyError> {
        if graph.dimension() != self.n || cops != self.cops() {
            return Err(StrategyError::Unsupported(format!(
                "squad strategy was built for {} cops on {} factors, asked for {cops} on {}",
                self.cops(),
                self.n,
                graph.dimension()
            )));
        }
        match &mut self.mode {
            Mode::Greedy(g) => g.place(graph, cops, rng),
            Mode::Solver(s) => s.place(graph, cops, rng),
            Mode::Squads(s) => {
                s.reset();
                Ok(vec![graph.center(); cops])
            }
        }
    }

    fn respond(&mut self, state: &GameState<'_>, rng: &mut GameRng) -> Result<Vec<Vertex>, StrategyError> {
        match &mut self.mode {
            Mode::Greedy(g) => g.respond(state, rng),
            Mode::Solver(s) => s.respond(state, rng),
            Mode::Squads(s) => Ok(s.respond(state)),
        }
    }
}
