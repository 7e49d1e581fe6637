//! Cops and Robbers on Cartesian products of trees, with hypercubes as the
//! main case.
//!
//! * [`graphs`]: factor graphs and implicit products.
//! * [`engine`]: the referee, transcripts and seeded batch play.
//! * [`cops`] and [`robbers`]: every strategy the experiments use.
//! * [`solver`]: exact retrograde solver on explicit graphs.
//! * [`stochastic`]: coupon collector, the distance chain and survival runs.

pub mod cops;
pub mod engine;
pub mod graphs;
pub mod robbers;
pub mod solver;
pub mod stochastic;

/// `ceil(log2(n))`, with `0` for `n <= 1`.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}
