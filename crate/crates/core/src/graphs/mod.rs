//! Graphs the game is played on.
//!
//! Factors are small explicit graphs (paths, cycles, random trees) with
//! precomputed all-pairs distances. A [`ProductGraph`] never materializes
//! its vertex set unless it has at most [`EXPLICIT_CAP`] vertices; distance
//! is the sum of factor distances and a move changes exactly one coordinate.

mod explicit;
mod factor;
mod product;

use thiserror::Error;

pub use explicit::{ExplicitGraph, Metrics};
pub use factor::{cycle_graph, path_graph, prufer_decode, random_tree, star_graph, tree_step_toward, FactorGraph};
pub use product::{hypercube, product, single, ProductGraph, Vertex};

/// Products at or below this size also get an explicit adjacency form.
pub const EXPLICIT_CAP: usize = 4096;

/// Largest factor for which an all-pairs distance table is built.
pub const MAX_FACTOR_SIZE: usize = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("self-loop at vertex {0}; passing is implicit")]
    SelfLoop(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("factor has {0} vertices, above the {MAX_FACTOR_SIZE}-vertex limit")]
    FactorTooLarge(usize),
    #[error("a product needs at least one factor")]
    NoFactors,
    #[error("a cycle needs at least 3 vertices, got {0}")]
    CycleTooShort(usize),
    #[error("`{0}` is not a vertex of this graph")]
    InvalidVertex(String),
    #[error("cannot step from a vertex toward itself")]
    ZeroDistanceStep,
    #[error("bad parent list: {0}")]
    ParentList(String),
    #[error("factor `{0}` is not a tree")]
    NotATree(String),
}
