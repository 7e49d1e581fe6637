use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::{path_graph, ExplicitGraph, FactorGraph, GraphError, Metrics, EXPLICIT_CAP};

/// A vertex of a product graph: one factor-vertex label per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    coords: Vec<u16>,
}

impl Vertex {
    pub fn new(coords: Vec<u16>) -> Self {
        Self { coords }
    }

    /// Hypercube vertex from the low `n` bits of `bits`; bit `i` is coordinate `i`.
    pub fn from_bits(n: usize, bits: u128) -> Self {
        Self { coords: (0..n).map(|i| ((bits >> i) & 1) as u16).collect() }
    }

    /// Inverse of [`Vertex::from_bits`] for 0/1 coordinates (at most 128 of them).
    pub fn to_bits(&self) -> u128 {
        self.coords.iter().enumerate().fold(0u128, |acc, (i, &c)| acc | (u128::from(c & 1) << i))
    }

    pub fn coords(&self) -> &[u16] {
        &self.coords
    }

    #[inline]
    pub fn coord(&self, i: usize) -> usize {
        self.coords[i] as usize
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn set_coord(&mut self, i: usize, value: usize) {
        self.coords[i] = value as u16;
    }

    pub fn with_coord(&self, i: usize, value: usize) -> Self {
        let mut v = self.clone();
        v.set_coord(i, value);
        v
    }

    /// Coordinates in which two vertices differ.
    pub fn differing_coords<'a>(&'a self, other: &'a Vertex) -> impl Iterator<Item = usize> + 'a {
        self.coords.iter().zip(&other.coords).enumerate().filter(|(_, (a, b))| a != b).map(|(i, _)| i)
    }
}

/// Cartesian product of factor graphs with implicit vertices.
///
/// Products up to [`EXPLICIT_CAP`] vertices additionally carry an explicit
/// adjacency form indexed in lexicographic tuple order.
#[derive(Clone, Debug)]
pub struct ProductGraph {
    name: String,
    factors: Vec<Arc<FactorGraph>>,
    explicit: Option<ExplicitGraph>,
}

impl ProductGraph {
    pub fn new(factors: Vec<Arc<FactorGraph>>) -> Result<Self, GraphError> {
        if factors.is_empty() {
            return Err(GraphError::NoFactors);
        }
        let name = factors.iter().map(|f| f.name()).collect::<Vec<_>>().join("x");
        let mut g = Self { name, factors, explicit: None };
        if g.vertex_count().is_some_and(|v| v <= EXPLICIT_CAP as u128) {
            g.explicit = Some(g.build_explicit());
        }
        Ok(g)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of factors.
    pub fn dimension(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Arc<FactorGraph>] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> &FactorGraph {
        &self.factors[i]
    }

    /// Exact vertex count, or `None` when it overflows `u128`.
    pub fn vertex_count(&self) -> Option<u128> {
        self.factors.iter().try_fold(1u128, |acc, f| acc.checked_mul(f.vertex_count() as u128))
    }

    pub fn vertex_count_log2(&self) -> f64 {
        self.factors.iter().map(|f| (f.vertex_count() as f64).log2()).sum()
    }

    pub fn all_factors_trees(&self) -> bool {
        self.factors.iter().all(|f| f.is_tree())
    }

    /// Every factor has exactly two vertices, so vertices print as bit strings.
    pub fn is_hypercube(&self) -> bool {
        self.factors.iter().all(|f| f.vertex_count() == 2)
    }

    pub fn explicit(&self) -> Option<&ExplicitGraph> {
        self.explicit.as_ref()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        v.dimension() == self.dimension()
            && v.coords.iter().zip(&self.factors).all(|(&c, f)| (c as usize) < f.vertex_count())
    }

    #[inline]
    pub fn distance(&self, u: &Vertex, v: &Vertex) -> usize {
        self.factors
            .iter()
            .zip(u.coords.iter().zip(&v.coords))
            .map(|(f, (&a, &b))| if a == b { 0 } else { f.distance(a as usize, b as usize) })
            .sum()
    }

    pub fn degree(&self, v: &Vertex) -> usize {
        self.factors.iter().zip(&v.coords).map(|(f, &c)| f.degree(c as usize)).sum()
    }

    /// Single-coordinate moves out of `v`, as `(coordinate, new factor label)`,
    /// in coordinate order then label order.
    pub fn moves<'a>(&'a self, v: &'a Vertex) -> impl Iterator<Item = (usize, usize)> + 'a {
        self.factors
            .iter()
            .enumerate()
            .flat_map(move |(i, f)| f.neighbors(v.coord(i)).iter().map(move |&w| (i, w as usize)))
    }

    pub fn neighbors<'a>(&'a self, v: &'a Vertex) -> impl Iterator<Item = Vertex> + 'a {
        self.moves(v).map(move |(i, w)| v.with_coord(i, w))
    }

    pub fn is_adjacent(&self, u: &Vertex, v: &Vertex) -> bool {
        let mut diff = u.differing_coords(v);
        match (diff.next(), diff.next()) {
            (Some(i), None) => self.factors[i].is_adjacent(u.coord(i), v.coord(i)),
            _ => false,
        }
    }

    /// Pass or a single edge.
    pub fn is_move(&self, from: &Vertex, to: &Vertex) -> bool {
        from == to || self.is_adjacent(from, to)
    }

    /// Radius and diameter are sums over factors; the center is the tuple of factor centers.
    pub fn metrics(&self) -> Metrics<Vertex> {
        Metrics {
            radius: self.factors.iter().map(|f| f.radius()).sum(),
            diameter: self.factors.iter().map(|f| f.diameter()).sum(),
            center: self.center(),
        }
    }

    pub fn radius(&self) -> usize {
        self.factors.iter().map(|f| f.radius()).sum()
    }

    pub fn diameter(&self) -> usize {
        self.factors.iter().map(|f| f.diameter()).sum()
    }

    pub fn center(&self) -> Vertex {
        Vertex::new(self.factors.iter().map(|f| f.center() as u16).collect())
    }

    /// Lexicographically first vertex at maximum distance from `v`.
    pub fn farthest_from(&self, v: &Vertex) -> Vertex {
        Vertex::new(self.factors.iter().zip(&v.coords).map(|(f, &c)| f.farthest_from(c as usize) as u16).collect())
    }

    pub fn random_vertex<R: Rng + ?Sized>(&self, rng: &mut R) -> Vertex {
        Vertex::new(self.factors.iter().map(|f| rng.random_range(0..f.vertex_count()) as u16).collect())
    }

    /// Lexicographic rank of a vertex; only meaningful when the product is explicit.
    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.explicit.as_ref()?;
        Some(self.factors.iter().zip(&v.coords).fold(0usize, |acc, (f, &c)| acc * f.vertex_count() + c as usize))
    }

    pub fn vertex_at(&self, mut index: usize) -> Vertex {
        let mut coords = vec![0u16; self.dimension()];
        for (i, f) in self.factors.iter().enumerate().rev() {
            let n = f.vertex_count();
            coords[i] = (index % n) as u16;
            index /= n;
        }
        Vertex::new(coords)
    }

    fn build_explicit(&self) -> ExplicitGraph {
        let count = self.vertex_count().unwrap_or(0) as usize;
        let strides: Vec<usize> = {
            let mut s = vec![1usize; self.dimension()];
            for i in (0..self.dimension().saturating_sub(1)).rev() {
                s[i] = s[i + 1] * self.factors[i + 1].vertex_count();
            }
            s
        };
        let adjacency = (0..count)
            .map(|idx| {
                let v = self.vertex_at(idx);
                let mut list: Vec<u32> =
                    self.moves(&v).map(|(i, w)| (idx - v.coord(i) * strides[i] + w * strides[i]) as u32).collect();
                list.sort_unstable();
                list
            })
            .collect();
        ExplicitGraph::from_sorted_adjacency(adjacency)
    }

    /// Text form: a bit string for hypercubes, otherwise dot-separated labels.
    pub fn format_vertex(&self, v: &Vertex) -> String {
        if self.is_hypercube() {
            v.coords.iter().map(|&c| if c == 0 { '0' } else { '1' }).collect()
        } else {
            v.coords.iter().map(u16::to_string).collect::<Vec<_>>().join(".")
        }
    }

    pub fn parse_vertex(&self, s: &str) -> Result<Vertex, GraphError> {
        let bad = || GraphError::InvalidVertex(s.to_string());
        let coords: Vec<u16> = if self.is_hypercube() && !s.contains('.') {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(bad()),
                })
                .collect::<Result<_, _>>()?
        } else {
            s.split('.').map(|p| p.trim().parse::<u16>().map_err(|_| bad())).collect::<Result<_, _>>()?
        };
        let v = Vertex::new(coords);
        if self.contains(&v) {
            Ok(v)
        } else {
            Err(bad())
        }
    }
}

impl fmt::Display for ProductGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

pub fn product(factors: Vec<Arc<FactorGraph>>) -> Result<ProductGraph, GraphError> {
    ProductGraph::new(factors)
}

/// `n`-fold product of `K_2`, named `Q<n>`.
pub fn hypercube(n: usize) -> Result<ProductGraph, GraphError> {
    if n == 0 {
        return Err(GraphError::NoFactors);
    }
    let k2 = Arc::new(path_graph(2)?);
    Ok(ProductGraph::new(vec![k2; n])?.with_name(format!("Q{n}")))
}

/// Single factor viewed as a one-coordinate product.
pub fn single(factor: FactorGraph) -> ProductGraph {
    ProductGraph::new(vec![Arc::new(factor)]).expect("one factor is never empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::random_tree;

    fn grid(m: usize, n: usize) -> ProductGraph {
        product(vec![Arc::new(path_graph(m).unwrap()), Arc::new(path_graph(n).unwrap())]).unwrap()
    }

    #[test]
    fn hypercube_basics() {
        let q1 = hypercube(1).unwrap();
        assert_eq!(q1.vertex_count(), Some(2));
        let q3 = hypercube(3).unwrap();
        assert_eq!(q3.vertex_count(), Some(8));
        for idx in 0..8 {
            assert_eq!(q3.degree(&q3.vertex_at(idx)), 3);
        }
        let a = q3.parse_vertex("000").unwrap();
        let b = q3.parse_vertex("111").unwrap();
        assert_eq!(q3.distance(&a, &b), 3);
        let q5 = hypercube(5).unwrap();
        let z = q5.parse_vertex("00000").unwrap();
        assert_eq!(q5.distance(&z, &z), 0);
        assert_eq!(q5.distance(&z, &q5.parse_vertex("10101").unwrap()), 3);
        let q11 = hypercube(11).unwrap();
        assert_eq!(q11.neighbors(&Vertex::new(vec![0; 11])).count(), 11);
        assert!(q11.explicit().is_some());
        assert!(hypercube(13).unwrap().explicit().is_none());
        assert_eq!(hypercube(64).unwrap().radius(), 64);
        assert_eq!(hypercube(0).unwrap_err(), GraphError::NoFactors);
    }

    #[test]
    fn products() {
        assert_eq!(product(vec![]).unwrap_err(), GraphError::NoFactors);
        let k = product(vec![Arc::new(path_graph(2).unwrap())]).unwrap();
        assert_eq!(k.explicit().unwrap(), path_graph(2).unwrap().explicit());
        let g = grid(3, 5);
        assert_eq!(g.vertex_count(), Some(15));
        assert_eq!(g.name(), "P3xP5");
        let g33 = grid(3, 3);
        let a = Vertex::new(vec![0, 0]);
        let b = Vertex::new(vec![2, 2]);
        assert_eq!(g33.distance(&a, &b), 4);
        assert_eq!(g33.center(), Vertex::new(vec![1, 1]));
    }

    #[test]
    fn vertex_text_round_trip() {
        let q4 = hypercube(4).unwrap();
        let v = q4.parse_vertex("0110").unwrap();
        assert_eq!(v.coords(), &[0, 1, 1, 0]);
        assert_eq!(q4.format_vertex(&v), "0110");
        assert_eq!(Vertex::from_bits(4, v.to_bits()), v);
        let g = grid(3, 5);
        assert_eq!(g.format_vertex(&Vertex::new(vec![2, 4])), "2.4");
        assert!(g.parse_vertex("3.0").is_err());
        assert!(q4.parse_vertex("012").is_err());
    }

    #[test]
    fn explicit_index_is_lexicographic() {
        let t = random_tree(4, 3).unwrap();
        let g = product(vec![Arc::new(t), Arc::new(path_graph(3).unwrap())]).unwrap();
        let mut prev: Option<Vertex> = None;
        for idx in 0..12 {
            let v = g.vertex_at(idx);
            assert_eq!(g.index_of(&v), Some(idx));
            if let Some(p) = prev {
                assert!(p < v);
            }
            prev = Some(v);
        }
    }

    #[test]
    fn farthest_vertex_is_antipode_on_cube() {
        let q5 = hypercube(5).unwrap();
        let v = q5.parse_vertex("01001").unwrap();
        assert_eq!(q5.format_vertex(&q5.farthest_from(&v)), "10110");
    }
}
