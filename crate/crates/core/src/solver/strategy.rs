use std::sync::Arc;

use crate::engine::{CopStrategy, GameRng, GameState, RobberStrategy, StrategyError};
use crate::graphs::{ProductGraph, Vertex};

use super::SolverTable;

fn indices(graph: &ProductGraph, table: &SolverTable, vs: &[Vertex]) -> Result<Vec<usize>, StrategyError> {
    if graph.vertex_count() != Some(table.graph().vertex_count() as u128) {
        return Err(StrategyError::Unsupported(format!(
            "solver table has {} vertices but {} was given",
            table.graph().vertex_count(),
            graph.name()
        )));
    }
    vs.iter().map(|v| graph.index_of(v).ok_or_else(|| StrategyError::MissingState(format!("{v:?}")))).collect()
}

/// Optimal cops read off a solved table.
#[derive(Clone, Debug)]
pub struct SolverCops {
    table: Arc<SolverTable>,
}

/// Optimal robber read off a solved table; `start` overrides the placement.
#[derive(Clone, Debug)]
pub struct SolverRobber {
    table: Arc<SolverTable>,
    start: Option<Vertex>,
}

pub fn extract_cops(table: Arc<SolverTable>) -> SolverCops {
    SolverCops { table }
}

pub fn extract_robber(table: Arc<SolverTable>) -> SolverRobber {
    SolverRobber { table, start: None }
}

impl SolverCops {
    pub fn table(&self) -> &SolverTable {
        &self.table
    }
}

impl SolverRobber {
    pub fn with_start(mut self, start: Option<Vertex>) -> Self {
        self.start = start;
        self
    }
}

impl CopStrategy for SolverCops {
    fn name(&self) -> &str {
        "solver-optimal"
    }

    fn place(&mut self, graph: &ProductGraph, cops: usize, _: &mut GameRng) -> Result<Vec<Vertex>, StrategyError> {
        if cops != self.table.cops() {
            return Err(StrategyError::Unsupported(format!(
                "table solved for {} cops, asked for {cops}",
                self.table.cops()
            )));
        }
        indices(graph, &self.table, &[])?;
        let (ms, _) = self.table.best_placement();
        Ok(ms.into_iter().map(|i| graph.vertex_at(i)).collect())
    }

    fn respond(&mut self, state: &GameState<'_>, _: &mut GameRng) -> Result<Vec<Vertex>, StrategyError> {
        let cops = indices(state.graph, &self.table, &state.cops)?;
        let robber = indices(state.graph, &self.table, std::slice::from_ref(state.robber()))?[0];
        let (next, _) = self.table.best_cop_move(&cops, robber);
        Ok(next.into_iter().map(|i| state.graph.vertex_at(i)).collect())
    }
}

impl RobberStrategy for SolverRobber {
    fn name(&self) -> &str {
        "solver-optimal"
    }

    fn place(&mut self, state: &GameState<'_>, _: &mut GameRng) -> Result<Vertex, StrategyError> {
        if let Some(s) = &self.start {
            return Ok(s.clone());
        }
        let cops = indices(state.graph, &self.table, &state.cops)?;
        Ok(state.graph.vertex_at(self.table.best_robber_placement(&cops)))
    }

    fn respond(&mut self, state: &GameState<'_>, _: &mut GameRng) -> Result<Vertex, StrategyError> {
        let cops = indices(state.graph, &self.table, &state.cops)?;
        let robber = indices(state.graph, &self.table, std::slice::from_ref(state.robber()))?[0];
        Ok(state.graph.vertex_at(self.table.best_robber_move(&cops, robber).0))
    }
}
