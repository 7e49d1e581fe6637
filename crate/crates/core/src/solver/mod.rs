//! Exact game values by retrograde analysis.
//!
//! A state is a sorted multiset of cop vertices, a robber vertex and the side
//! to move. Values count rounds until capture:
//!
//! * cop to move: `1 + min` over joint cop moves of the robber-to-move value,
//! * robber to move: `max` over robber moves (pass included) of the
//!   cop-to-move value, where stepping onto a cop is worth `0`,
//! * any state with a cop on the robber is worth `0`.
//!
//! Values are filled in increasing order from the capture states; whatever is
//! never reached is [`GameValue::Unbounded`] (the robber escapes forever).

mod strategy;

use std::io;

use thiserror::Error;

use crate::graphs::ExplicitGraph;

pub use strategy::{extract_cops, extract_robber, SolverCops, SolverRobber};

/// Refuse instances whose table would exceed this many states.
pub const STATE_BUDGET: u64 = 10_000_000;

const UNSET: u32 = u32::MAX;

/// Rounds to capture under optimal play. `Unbounded` sorts above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GameValue {
    Finite(u32),
    Unbounded,
}

impl GameValue {
    fn from_raw(v: u32) -> Self {
        if v == UNSET {
            GameValue::Unbounded
        } else {
            GameValue::Finite(v)
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            GameValue::Finite(v) => Some(v),
            GameValue::Unbounded => None,
        }
    }
}

impl std::fmt::Display for GameValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GameValue::Finite(v) => write!(f, "{v}"),
            GameValue::Unbounded => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Cops,
    Robber,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("at least one cop is required")]
    NoCops,
    #[error("graph must be connected")]
    Disconnected,
    #[error("{states} states exceed the solver budget of {budget}")]
    Budget { states: u128, budget: u64 },
    #[error("cop number exceeds {0}")]
    CopNumberExceeds(usize),
    #[error("graph is not explicit (more than the explicit-size cap)")]
    NotExplicit,
}

/// `C(v + k - 1, k) * v * 2`: both sides, every robber vertex, every cop multiset.
pub fn state_count(vertices: usize, k: usize) -> u128 {
    binomial((vertices + k - 1) as u128, k as u128).saturating_mul(vertices as u128 * 2)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Solved game for `k` cops on one explicit graph.
#[derive(Clone, Debug)]
pub struct SolverTable {
    graph: ExplicitGraph,
    closed: Vec<Vec<u32>>,
    k: usize,
    binom: Vec<Vec<u64>>,
    multisets: Vec<u32>,
    cop_value: Vec<u32>,
    robber_value: Vec<u32>,
}

impl SolverTable {
    pub fn graph(&self) -> &ExplicitGraph {
        &self.graph
    }

    pub fn cops(&self) -> usize {
        self.k
    }

    pub fn multiset_count(&self) -> usize {
        self.multisets.len() / self.k
    }

    pub fn multiset(&self, rank: usize) -> &[u32] {
        &self.multisets[rank * self.k..(rank + 1) * self.k]
    }

    /// Rank of a cop multiset; input in any order.
    pub fn rank(&self, cops: &[usize]) -> usize {
        let mut sorted: Vec<usize> = cops.to_vec();
        sorted.sort_unstable();
        self.rank_sorted(&sorted)
    }

    fn rank_sorted(&self, sorted: &[usize]) -> usize {
        sorted.iter().enumerate().map(|(i, &a)| self.binom[a + i][i + 1] as usize).sum()
    }

    fn index(&self, rank: usize, robber: usize) -> usize {
        rank * self.graph.vertex_count() + robber
    }

    pub fn value(&self, side: Side, cops: &[usize], robber: usize) -> GameValue {
        let idx = self.index(self.rank(cops), robber);
        match side {
            Side::Cops => GameValue::from_raw(self.cop_value[idx]),
            Side::Robber => GameValue::from_raw(self.robber_value[idx]),
        }
    }

    pub fn cop_value(&self, cops: &[usize], robber: usize) -> GameValue {
        self.value(Side::Cops, cops, robber)
    }

    pub fn robber_value(&self, cops: &[usize], robber: usize) -> GameValue {
        self.value(Side::Robber, cops, robber)
    }

    /// Worst case over robber placements for a given cop placement.
    pub fn placement_value(&self, cops: &[usize]) -> GameValue {
        let rank = self.rank(cops);
        (0..self.graph.vertex_count())
            .map(|r| GameValue::from_raw(self.cop_value[self.index(rank, r)]))
            .max()
            .unwrap_or(GameValue::Finite(0))
    }

    /// Lexicographically least cop placement minimizing [`Self::placement_value`].
    pub fn best_placement(&self) -> (Vec<usize>, GameValue) {
        let mut best: Option<(GameValue, Vec<usize>)> = None;
        for rank in 0..self.multiset_count() {
            let ms: Vec<usize> = self.multiset(rank).iter().map(|&x| x as usize).collect();
            let value = self.placement_value(&ms);
            let better = match &best {
                None => true,
                Some((bv, bm)) => value < *bv || (value == *bv && ms < *bm),
            };
            if better {
                best = Some((value, ms));
            }
        }
        let (value, ms) = best.expect("at least one multiset");
        (ms, value)
    }

    /// `capt_k` of the graph, `None` when `k` cops cannot guarantee capture.
    pub fn capture_time(&self) -> Option<u32> {
        self.best_placement().1.finite()
    }

    /// Robber placement maximizing the value against `cops`, lowest label on ties.
    pub fn best_robber_placement(&self, cops: &[usize]) -> usize {
        let rank = self.rank(cops);
        let mut best = (GameValue::Finite(0), 0usize);
        for r in 0..self.graph.vertex_count() {
            let v = GameValue::from_raw(self.cop_value[self.index(rank, r)]);
            if v > best.0 {
                best = (v, r);
            }
        }
        best.1
    }

    /// Value-minimizing joint move for cops listed in a fixed order. Among
    /// optimal moves the lexicographically least position vector wins.
    pub fn best_cop_move(&self, cops: &[usize], robber: usize) -> (Vec<usize>, GameValue) {
        let mut best: Option<(GameValue, Vec<usize>)> = None;
        let mut cur = vec![0usize; cops.len()];
        self.for_each_joint_move(cops, &mut cur, 0, &mut |next| {
            let idx = self.index(self.rank(next), robber);
            let v = GameValue::from_raw(self.robber_value[idx]);
            if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                best = Some((v, next.to_vec()));
            }
        });
        let (v, m) = best.expect("passing is always a move");
        (m, v)
    }

    /// Value-maximizing robber move, lowest label on ties.
    pub fn best_robber_move(&self, cops: &[usize], robber: usize) -> (usize, GameValue) {
        let rank = self.rank(cops);
        let mut best: Option<(GameValue, usize)> = None;
        for &r in &self.closed[robber] {
            let v = GameValue::from_raw(self.cop_value[self.index(rank, r as usize)]);
            if best.is_none_or(|(bv, _)| v > bv) {
                best = Some((v, r as usize));
            }
        }
        let (v, r) = best.expect("closed neighborhoods are nonempty");
        (r, v)
    }

    /// Every cop multiset reachable in one joint move (sorted, deduplicated).
    pub fn successor_cop_sets(&self, cops: &[usize]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = vec![0usize; cops.len()];
        self.for_each_joint_move(cops, &mut cur, 0, &mut |next| {
            let mut s = next.to_vec();
            s.sort_unstable();
            out.push(s);
        });
        out.sort();
        out.dedup();
        out
    }

    fn for_each_joint_move(&self, cops: &[usize], cur: &mut Vec<usize>, depth: usize, f: &mut dyn FnMut(&[usize])) {
        if depth == cops.len() {
            f(cur);
            return;
        }
        for &w in &self.closed[cops[depth]] {
            cur[depth] = w as usize;
            self.for_each_joint_move(cops, cur, depth + 1, f);
        }
    }

    /// CSV rows `cops,robber,side,value`; cops are space-separated sorted labels.
    pub fn write_csv<W: io::Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "cops,robber,side,value")?;
        let v = self.graph.vertex_count();
        for rank in 0..self.multiset_count() {
            let label: Vec<String> = self.multiset(rank).iter().map(u32::to_string).collect();
            let label = label.join(" ");
            for r in 0..v {
                let idx = self.index(rank, r);
                writeln!(out, "{label},{r},cops,{}", GameValue::from_raw(self.cop_value[idx]))?;
                writeln!(out, "{label},{r},robber,{}", GameValue::from_raw(self.robber_value[idx]))?;
            }
        }
        Ok(())
    }
}

/// Solves the `k`-cop game on `graph`.
pub fn solve(graph: &ExplicitGraph, k: usize) -> Result<SolverTable, SolverError> {
    if k == 0 {
        return Err(SolverError::NoCops);
    }
    if !graph.is_connected() {
        return Err(SolverError::Disconnected);
    }
    let v = graph.vertex_count();
    let states = state_count(v, k);
    if states > STATE_BUDGET as u128 {
        return Err(SolverError::Budget { states, budget: STATE_BUDGET });
    }

    let closed: Vec<Vec<u32>> = (0..v)
        .map(|x| {
            let mut c = vec![x as u32];
            c.extend_from_slice(graph.neighbors(x));
            c.sort_unstable();
            c
        })
        .collect();

    // binom[n][r] for n < v + k, r <= k
    let top = v + k;
    let mut binom = vec![vec![0u64; k + 1]; top];
    for n in 0..top {
        binom[n][0] = 1;
        for r in 1..=k.min(n) {
            binom[n][r] = binom[n - 1][r - 1] + if r < n { binom[n - 1][r] } else { 0 };
        }
    }
    let count = binom[v + k - 1][k] as usize;

    let mut table = SolverTable {
        graph: graph.clone(),
        closed,
        k,
        binom,
        multisets: vec![0; count * k],
        cop_value: vec![UNSET; count * v],
        robber_value: vec![UNSET; count * v],
    };
    let mut ms = vec![0usize; k];
    fill_multisets(&mut table, &mut ms, 0, 0);

    let mut counter: Vec<u16> = vec![0; count * v];
    let mut buckets: Vec<Vec<(Side, u32)>> = vec![Vec::new()];
    for rank in 0..count {
        let cops: Vec<u32> = table.multiset(rank).to_vec();
        for r in 0..v {
            let idx = table.index(rank, r);
            if cops.contains(&(r as u32)) {
                table.cop_value[idx] = 0;
                table.robber_value[idx] = 0;
                buckets[0].push((Side::Cops, idx as u32));
                buckets[0].push((Side::Robber, idx as u32));
            } else {
                counter[idx] = table.closed[r].len() as u16;
            }
        }
    }

    let mut level = 0usize;
    let mut preds: Vec<Vec<usize>> = Vec::new();
    while level < buckets.len() {
        let mut i = 0;
        while i < buckets[level].len() {
            let (side, idx) = buckets[level][i];
            i += 1;
            let idx = idx as usize;
            let (rank, r) = (idx / v, idx % v);
            match side {
                Side::Robber => {
                    // cop-to-move predecessors: same robber, cops one joint move away
                    let cops: Vec<usize> = table.multiset(rank).iter().map(|&x| x as usize).collect();
                    preds.clear();
                    preds.extend(table.successor_cop_sets(&cops));
                    for pred in &preds {
                        let pidx = table.index(table.rank_sorted(pred), r);
                        if table.cop_value[pidx] == UNSET {
                            table.cop_value[pidx] = level as u32 + 1;
                            if buckets.len() <= level + 1 {
                                buckets.push(Vec::new());
                            }
                            buckets[level + 1].push((Side::Cops, pidx as u32));
                        }
                    }
                }
                Side::Cops => {
                    // robber-to-move predecessors: same cops, robber one move away
                    for j in 0..table.closed[r].len() {
                        let pr = table.closed[r][j] as usize;
                        let pidx = table.index(rank, pr);
                        if table.robber_value[pidx] != UNSET {
                            continue;
                        }
                        counter[pidx] -= 1;
                        if counter[pidx] == 0 {
                            table.robber_value[pidx] = level as u32;
                            buckets[level].push((Side::Robber, pidx as u32));
                        }
                    }
                }
            }
        }
        level += 1;
    }
    Ok(table)
}

fn fill_multisets(table: &mut SolverTable, ms: &mut Vec<usize>, depth: usize, min: usize) {
    let k = table.k;
    if depth == k {
        let rank = table.rank_sorted(ms);
        for (i, &x) in ms.iter().enumerate() {
            table.multisets[rank * k + i] = x as u32;
        }
        return;
    }
    for x in min..table.graph.vertex_count() {
        ms[depth] = x;
        fill_multisets(table, ms, depth + 1, x);
    }
}

/// Least `k <= k_max` for which `k` cops have a winning strategy.
pub fn cop_number(graph: &ExplicitGraph, k_max: usize) -> Result<usize, SolverError> {
    for k in 1..=k_max {
        if solve(graph, k)?.capture_time().is_some() {
            return Ok(k);
        }
    }
    Err(SolverError::CopNumberExceeds(k_max))
}

/// `capt_k(graph)`; errors when `k` is below the cop number.
pub fn capture_time(graph: &ExplicitGraph, k: usize) -> Result<u32, SolverError> {
    solve(graph, k)?.capture_time().ok_or(SolverError::CopNumberExceeds(k))
}
