use std::collections::VecDeque;

use super::GraphError;

/// Plain adjacency-list graph over `0..n`. Loops are implicit: every vertex may pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitGraph {
    adjacency: Vec<Vec<u32>>,
}

impl ExplicitGraph {
    /// Builds a graph from an undirected edge list. Duplicate edges are merged,
    /// neighbor lists are sorted ascending.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::Empty);
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(GraphError::VertexOutOfRange(a, b, vertex_count));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            adjacency[a].push(b as u32);
            adjacency[b].push(a as u32);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { adjacency })
    }

    pub(crate) fn from_sorted_adjacency(adjacency: Vec<Vec<u32>>) -> Self {
        Self { adjacency }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&(b as u32)).is_ok()
    }

    /// True when `b` is reachable from `a` in one move (pass or edge).
    pub fn is_move(&self, a: usize, b: usize) -> bool {
        a == b || self.is_adjacent(a, b)
    }

    /// Single-source BFS distances; `None` for unreachable vertices.
    pub fn bfs(&self, source: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap_or(0);
            for &w in &self.adjacency[v] {
                let w = w as usize;
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.bfs(0).iter().all(Option::is_some)
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count() + 1 == self.vertex_count()
    }

    /// Radius, diameter and lowest-label center by BFS from every vertex.
    pub fn metrics(&self) -> Result<Metrics<usize>, GraphError> {
        let mut best: Option<(u32, usize)> = None;
        let mut diameter = 0;
        for v in 0..self.vertex_count() {
            let mut ecc = 0;
            for d in self.bfs(v) {
                ecc = ecc.max(d.ok_or(GraphError::Disconnected)?);
            }
            diameter = diameter.max(ecc);
            if best.is_none_or(|(r, _)| ecc < r) {
                best = Some((ecc, v));
            }
        }
        let (radius, center) = best.ok_or(GraphError::Empty)?;
        Ok(Metrics { radius: radius as usize, diameter: diameter as usize, center })
    }
}

/// Radius, diameter and a central vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metrics<V> {
    pub radius: usize,
    pub diameter: usize,
    pub center: V,
}
