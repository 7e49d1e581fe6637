use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ExplicitGraph, GraphError, Metrics, MAX_FACTOR_SIZE};

/// A small connected graph used as one coordinate of a product.
///
/// All-pairs distances are tabulated at construction, so distance and
/// step-toward queries are O(1) and O(degree).
#[derive(Clone, Debug)]
pub struct FactorGraph {
    name: String,
    graph: ExplicitGraph,
    dist: Vec<u16>,
    eccentricity: Vec<u16>,
    is_tree: bool,
    metrics: Metrics<usize>,
}

impl FactorGraph {
    pub fn from_edges(
        name: impl Into<String>,
        vertex_count: usize,
        edges: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let graph = ExplicitGraph::from_edges(vertex_count, edges)?;
        Self::from_explicit(name, graph)
    }

    pub fn from_explicit(name: impl Into<String>, graph: ExplicitGraph) -> Result<Self, GraphError> {
        let n = graph.vertex_count();
        if n > MAX_FACTOR_SIZE {
            return Err(GraphError::FactorTooLarge(n));
        }
        let mut dist = vec![0u16; n * n];
        for s in 0..n {
            for (t, d) in graph.bfs(s).into_iter().enumerate() {
                dist[s * n + t] = d.ok_or(GraphError::Disconnected)? as u16;
            }
        }
        let eccentricity: Vec<u16> =
            (0..n).map(|s| dist[s * n..(s + 1) * n].iter().copied().max().unwrap_or(0)).collect();
        let radius = eccentricity.iter().copied().min().unwrap_or(0);
        let center = eccentricity.iter().position(|&e| e == radius).unwrap_or(0);
        let diameter = eccentricity.iter().copied().max().unwrap_or(0);
        let is_tree = graph.edge_count() + 1 == n;
        Ok(Self {
            name: name.into(),
            graph,
            dist,
            eccentricity,
            is_tree,
            metrics: Metrics { radius: radius as usize, diameter: diameter as usize, center },
        })
    }

    /// Builds a tree from a parent list: entry `i` is the parent of vertex `i`,
    /// and exactly one entry (the root) is negative.
    pub fn from_parents(name: impl Into<String>, parents: &[i64]) -> Result<Self, GraphError> {
        let n = parents.len();
        let roots = parents.iter().filter(|&&p| p < 0).count();
        if roots != 1 {
            return Err(GraphError::ParentList(format!("expected exactly one root, found {roots}")));
        }
        let mut edges = Vec::with_capacity(n.saturating_sub(1));
        for (child, &parent) in parents.iter().enumerate() {
            if parent >= 0 {
                let parent = parent as usize;
                if parent >= n {
                    return Err(GraphError::ParentList(format!(
                        "vertex {child} names parent {parent}, outside 0..{n}"
                    )));
                }
                edges.push((child, parent));
            }
        }
        let g = Self::from_edges(name, n, &edges)?;
        if !g.is_tree {
            return Err(GraphError::ParentList("parent pointers contain a cycle".into()));
        }
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn explicit(&self) -> &ExplicitGraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        self.graph.neighbors(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.graph.degree(v)
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.graph.is_adjacent(a, b)
    }

    pub fn is_tree(&self) -> bool {
        self.is_tree
    }

    #[inline]
    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.dist[a * self.vertex_count() + b] as usize
    }

    pub fn eccentricity(&self, v: usize) -> usize {
        self.eccentricity[v] as usize
    }

    pub fn metrics(&self) -> &Metrics<usize> {
        &self.metrics
    }

    pub fn radius(&self) -> usize {
        self.metrics.radius
    }

    pub fn diameter(&self) -> usize {
        self.metrics.diameter
    }

    pub fn center(&self) -> usize {
        self.metrics.center
    }

    /// Lowest-label vertex at maximum distance from `v`.
    pub fn farthest_from(&self, v: usize) -> usize {
        let n = self.vertex_count();
        let row = &self.dist[v * n..(v + 1) * n];
        let far = self.eccentricity[v];
        row.iter().position(|&d| d == far).unwrap_or(v)
    }

    /// Lowest-label neighbor of `from` that is one step closer to `to`.
    /// On a tree this is the unique next vertex of the `from`-`to` path.
    pub fn step_toward(&self, from: usize, to: usize) -> Result<usize, GraphError> {
        if from == to {
            return Err(GraphError::ZeroDistanceStep);
        }
        let d = self.distance(from, to);
        self.neighbors(from)
            .iter()
            .map(|&w| w as usize)
            .find(|&w| self.distance(w, to) + 1 == d)
            .ok_or(GraphError::Disconnected)
    }
}

/// Next vertex on the unique tree path from `from` to `to`.
pub fn tree_step_toward(tree: &FactorGraph, from: usize, to: usize) -> Result<usize, GraphError> {
    if !tree.is_tree() {
        return Err(GraphError::NotATree(tree.name().to_string()));
    }
    tree.step_toward(from, to)
}

pub fn path_graph(m: usize) -> Result<FactorGraph, GraphError> {
    if m == 0 {
        return Err(GraphError::Empty);
    }
    let edges: Vec<_> = (1..m).map(|i| (i - 1, i)).collect();
    FactorGraph::from_edges(format!("P{m}"), m, &edges)
}

pub fn cycle_graph(m: usize) -> Result<FactorGraph, GraphError> {
    if m < 3 {
        return Err(GraphError::CycleTooShort(m));
    }
    let edges: Vec<_> = (0..m).map(|i| (i, (i + 1) % m)).collect();
    FactorGraph::from_edges(format!("C{m}"), m, &edges)
}

/// Star with center 0 and leaves `1..=leaves`.
pub fn star_graph(leaves: usize) -> Result<FactorGraph, GraphError> {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    FactorGraph::from_edges(format!("S{leaves}"), leaves + 1, &edges)
}

/// Edges of the labeled tree encoded by a Prüfer sequence over `0..seq.len() + 2`.
pub fn prufer_decode(seq: &[usize]) -> Vec<(usize, usize)> {
    let n = seq.len() + 2;
    let mut degree = vec![1usize; n];
    for &a in seq {
        degree[a] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> = (0..n).filter(|&i| degree[i] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &a in seq {
        let Reverse(leaf) = leaves.pop().expect("a Prüfer sequence always leaves a leaf");
        edges.push((leaf, a));
        degree[a] -= 1;
        if degree[a] == 1 {
            leaves.push(Reverse(a));
        }
    }
    let Reverse(u) = leaves.pop().expect("two leaves remain");
    let Reverse(v) = leaves.pop().expect("two leaves remain");
    edges.push((u, v));
    edges
}

/// Uniformly random labeled tree on `size` vertices, deterministic per seed.
pub fn random_tree(size: usize, seed: u64) -> Result<FactorGraph, GraphError> {
    let name = format!("T{size}:{seed}");
    match size {
        0 => Err(GraphError::Empty),
        1 => FactorGraph::from_edges(name, 1, &[]),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let seq: Vec<usize> = (0..size - 2).map(|_| rng.random_range(0..size)).collect();
            FactorGraph::from_edges(name, size, &prufer_decode(&seq))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths() {
        assert_eq!(path_graph(0).unwrap_err(), GraphError::Empty);
        let p1 = path_graph(1).unwrap();
        assert_eq!((p1.vertex_count(), p1.edge_count()), (1, 0));
        assert!(p1.is_tree());
        let k2 = path_graph(2).unwrap();
        assert_eq!(k2.radius(), 1);
        assert_eq!(k2.center(), 0);
        let p4 = path_graph(4).unwrap();
        assert_eq!((p4.radius(), p4.diameter(), p4.center()), (2, 3, 1));
        let centers: Vec<_> = (0..4).filter(|&v| p4.eccentricity(v) == p4.radius()).collect();
        assert_eq!(centers, vec![1, 2]);
    }

    #[test]
    fn steps_on_trees() {
        let p4 = path_graph(4).unwrap();
        assert_eq!(tree_step_toward(&p4, 0, 3).unwrap(), 1);
        let k2 = path_graph(2).unwrap();
        assert_eq!(tree_step_toward(&k2, 0, 1).unwrap(), 1);
        let star = star_graph(4).unwrap();
        assert_eq!(tree_step_toward(&star, 1, 3).unwrap(), 0);
        assert_eq!(tree_step_toward(&star, 2, 2), Err(GraphError::ZeroDistanceStep));
        let c5 = cycle_graph(5).unwrap();
        assert!(matches!(tree_step_toward(&c5, 0, 2), Err(GraphError::NotATree(_))));
        assert_eq!(c5.step_toward(0, 2).unwrap(), 1);
    }

    #[test]
    fn random_tree_small_cases() {
        assert_eq!(random_tree(0, 1).unwrap_err(), GraphError::Empty);
        assert_eq!(random_tree(1, 5).unwrap().vertex_count(), 1);
        for seed in 0..20 {
            let t = random_tree(2, seed).unwrap();
            assert_eq!(t.edge_count(), 1);
            assert!(t.is_adjacent(0, 1));
        }
        let t = random_tree(8, 42).unwrap();
        assert_eq!(t.edge_count(), 7);
        assert!(t.explicit().is_connected());
    }

    #[test]
    fn prufer_known_sequence() {
        // classic example: sequence [3, 3, 3, 4] on 6 vertices
        let mut edges = prufer_decode(&[3, 3, 3, 4]);
        edges.iter_mut().for_each(|e| *e = (e.0.min(e.1), e.0.max(e.1)));
        edges.sort();
        assert_eq!(edges, vec![(0, 3), (1, 3), (2, 3), (3, 4), (4, 5)]);
    }

    #[test]
    fn parent_list() {
        let t = FactorGraph::from_parents("t", &[-1, 0, 0, 1]).unwrap();
        assert_eq!(t.distance(3, 2), 3);
        assert!(FactorGraph::from_parents("t", &[-1, -1]).is_err());
        assert!(FactorGraph::from_parents("t", &[-1, 7]).is_err());
        assert!(FactorGraph::from_parents("t", &[-1, 2, 1]).is_err());
    }

    #[test]
    fn rejects_malformed() {
        assert_eq!(FactorGraph::from_edges("x", 3, &[(0, 1)]).unwrap_err(), GraphError::Disconnected);
        assert_eq!(FactorGraph::from_edges("x", 2, &[(1, 1)]).unwrap_err(), GraphError::SelfLoop(1));
        assert_eq!(cycle_graph(2).unwrap_err(), GraphError::CycleTooShort(2));
        assert!(matches!(path_graph(2000), Err(GraphError::FactorTooLarge(2000))));
    }

    #[test]
    fn cycle_is_not_tree() {
        let c4 = cycle_graph(4).unwrap();
        assert!(!c4.is_tree());
        assert_eq!((c4.radius(), c4.diameter()), (2, 2));
    }
}
