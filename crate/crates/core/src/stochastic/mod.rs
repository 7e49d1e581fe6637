//! Coupon collecting, the cop-robber distance chain on `Q_n`, and the
//! survival experiment for many parity-greedy cops against a random robber.

mod survival;

use rand::SeedableRng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use thiserror::Error;

use crate::engine::GameRng;

pub use survival::{survival_experiment, SurvivalError, SurvivalReport};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Float slack for probability comparisons.
pub const SLACK: f64 = 1e-12;

/// Longest horizon the chain table accepts.
pub const MAX_HORIZON: usize = 10_000;

#[derive(Debug, Error, PartialEq)]
pub enum StochasticError {
    #[error("need 1 <= m0 <= m, got m={m} m0={m0}")]
    CouponRange { m: usize, m0: usize },
    #[error("tail bound needs m >= 2, got {0}")]
    TooFewCoupons(usize),
    #[error("eps must be positive, got {0}")]
    Epsilon(f64),
    #[error("chain needs n >= 2 and 1 <= T <= {MAX_HORIZON}, got n={n} T={horizon}")]
    Chain { n: usize, horizon: usize },
    #[error("lower-bound parameters need n >= 3 and d > 0, got n={n} d={d}")]
    LowerBound { n: usize, d: f64 },
    #[error("need at least one trial")]
    NoTrials,
    #[error("KS test needs two nonempty samples")]
    EmptySample,
}

fn check_coupons(m: usize, m0: usize) -> Result<(), StochasticError> {
    if m0 == 0 || m0 > m {
        return Err(StochasticError::CouponRange { m, m0 });
    }
    Ok(())
}

/// `E[X] = sum_{i=1..m0} m / i`.
pub fn coupon_expectation(m: usize, m0: usize) -> Result<f64, StochasticError> {
    check_coupons(m, m0)?;
    Ok((1..=m0).map(|i| m as f64 / i as f64).sum())
}

/// `exp(-m^(eps - 1) m0)`, an upper bound on `P(X < (1 - eps)(m - 1) ln m)`.
pub fn coupon_tail_bound(m: usize, m0: usize, eps: f64) -> Result<f64, StochasticError> {
    if m < 2 {
        return Err(StochasticError::TooFewCoupons(m));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(StochasticError::Epsilon(eps));
    }
    check_coupons(m, m0)?;
    Ok((-(m as f64).powf(eps - 1.0) * m0 as f64).exp())
}

/// The threshold `(1 - eps)(m - 1) ln m` of the tail bound.
pub fn coupon_tail_threshold(m: usize, eps: f64) -> f64 {
    (1.0 - eps) * (m as f64 - 1.0) * (m as f64).ln()
}

/// One realization of `X`: rounds to collect the last `m0` of `m` coupons.
pub fn coupon_draw(m: usize, m0: usize, rng: &mut GameRng) -> u64 {
    (1..=m0)
        .map(|i| {
            let g = Geometric::new(i as f64 / m as f64).expect("0 < i/m <= 1");
            g.sample(rng) + 1
        })
        .sum()
}

fn trial_rng(seed: u64, trial: usize) -> GameRng {
    let mut rng = GameRng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// `trials` i.i.d. realizations of `X`, trial `t` on stream `t` of `seed`.
pub fn coupon_samples(m: usize, m0: usize, trials: usize, seed: u64) -> Result<Vec<u64>, StochasticError> {
    check_coupons(m, m0)?;
    if trials == 0 {
        return Err(StochasticError::NoTrials);
    }
    Ok((0..trials).into_par_iter().map(|t| coupon_draw(m, m0, &mut trial_rng(seed, t))).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CouponSummary {
    pub m: usize,
    pub m0: usize,
    pub trials: usize,
    pub mean: f64,
    pub threshold: f64,
    /// Fraction of samples strictly below `threshold`.
    pub tail: f64,
}

pub fn coupon_simulate(
    m: usize,
    m0: usize,
    trials: usize,
    seed: u64,
    threshold: f64,
) -> Result<CouponSummary, StochasticError> {
    let xs = coupon_samples(m, m0, trials, seed)?;
    let mean = xs.iter().sum::<u64>() as f64 / trials as f64;
    let below = xs.iter().filter(|&&x| (x as f64) < threshold).count();
    Ok(CouponSummary { m, m0, trials, mean, threshold, tail: below as f64 / trials as f64 })
}

/// Capture probabilities for one cop chasing a random robber on `Q_n`, by distance.
///
/// `p[d][t]`: the cop captures within `t` rounds when the robber is about to
/// move at distance `d` and the cop plays optimally on distances alone.
#[derive(Clone, Debug)]
pub struct DistanceChainTable {
    n: usize,
    horizon: usize,
    p: Vec<Vec<f64>>,
}

/// Cop distance changes considered after each robber move.
pub const ACTIONS: [i64; 3] = [0, -1, 1];

impl DistanceChainTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn p(&self, d: usize, t: usize) -> f64 {
        self.p[d][t]
    }

    fn after(&self, d: usize, a: i64) -> usize {
        (d as i64 + a).clamp(0, self.n as i64) as usize
    }

    /// Value of each entry of [`ACTIONS`] after the robber reached `d_prime`,
    /// with `t - 1` rounds left. `t >= 1`.
    pub fn action_values(&self, d_prime: usize, t: usize) -> [f64; 3] {
        ACTIONS.map(|a| self.p[self.after(d_prime, a)][t - 1])
    }

    /// Best distance change, preferring pass, then approach, on exact ties.
    pub fn best_action(&self, d_prime: usize, t: usize) -> i64 {
        let vals = self.action_values(d_prime, t);
        let mut best = 0;
        for i in 1..3 {
            if vals[i] > vals[best] {
                best = i;
            }
        }
        ACTIONS[best]
    }
}

pub fn distance_chain(n: usize, horizon: usize) -> Result<DistanceChainTable, StochasticError> {
    if n < 2 || horizon == 0 || horizon > MAX_HORIZON {
        return Err(StochasticError::Chain { n, horizon });
    }
    let nf = n as f64;
    let mut table = DistanceChainTable { n, horizon, p: vec![vec![0.0; horizon + 1]; n + 1] };
    table.p[0][0] = 1.0;
    for t in 1..=horizon {
        table.p[0][t] = 1.0;
        for d in 1..=n {
            let step = |dp: usize| -> f64 {
                if dp <= 1 {
                    1.0
                } else {
                    table.action_values(dp, t).into_iter().fold(0.0, f64::max)
                }
            };
            let toward = d as f64 / nf;
            let mut v = toward * step(d - 1);
            if d < n {
                v += (1.0 - toward) * step(d + 1);
            }
            table.p[d][t] = v;
        }
    }
    Ok(table)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Lemma2Part {
    /// `p[2k-2] >= p[2k]`
    CloserEven,
    /// `p[2k] >= p[2k-1]`
    EvenBeatsOdd,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma2Violation {
    pub part: Lemma2Part,
    pub k: usize,
    pub t: usize,
    pub lhs: f64,
    pub rhs: f64,
}

/// Every `(k, t)` with `1 <= k <= n/2`, `t <= T` where either monotonicity
/// inequality fails by more than [`SLACK`].
pub fn check_lemma2(n: usize, horizon: usize) -> Result<Vec<Lemma2Violation>, StochasticError> {
    let table = distance_chain(n, horizon)?;
    let mut out = Vec::new();
    for k in 1..=n / 2 {
        for t in 0..=horizon {
            let (a, b, c) = (table.p(2 * k - 2, t), table.p(2 * k, t), table.p(2 * k - 1, t));
            if a < b - SLACK {
                out.push(Lemma2Violation { part: Lemma2Part::CloserEven, k, t, lhs: a, rhs: b });
            }
            if b < c - SLACK {
                out.push(Lemma2Violation { part: Lemma2Part::EvenBeatsOdd, k, t, lhs: b, rhs: c });
            }
        }
    }
    Ok(out)
}

/// Constants of the survival argument for `n^d` cops on `Q_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundParams {
    pub n: usize,
    pub d: f64,
    /// `T = (n - 1) ln n / 2`
    pub t: f64,
    /// `ln((4d + 1) ln n) / ln n`
    pub eps: f64,
    /// `(1 - eps) T`
    pub threshold: f64,
    pub gamma: f64,
    /// Start distance the robber is promised, `n/4 + 1`.
    pub placement_distance: usize,
    /// Whether `n^(d+1) 1.85^n < 2^n` holds for this `(n, d)`.
    pub counting_ok: bool,
}

pub fn lower_bound_params(n: usize, d: f64) -> Result<LowerBoundParams, StochasticError> {
    if n < 3 || d.is_nan() || d <= 0.0 {
        return Err(StochasticError::LowerBound { n, d });
    }
    let nf = n as f64;
    let ln = nf.ln();
    let t = 0.5 * (nf - 1.0) * ln;
    let eps = ((4.0 * d + 1.0) * ln).ln() / ln;
    let counting_ok = (d + 1.0) * ln + nf * 1.85f64.ln() < nf * 2f64.ln();
    Ok(LowerBoundParams {
        n,
        d,
        t,
        eps,
        threshold: (1.0 - eps) * t,
        gamma: EULER_GAMMA,
        placement_distance: n / 4 + 1,
        counting_ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult, StochasticError> {
    if a.is_empty() || b.is_empty() {
        return Err(StochasticError::EmptySample);
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let en = (na * nb / (na + nb)).sqrt();
    let lambda = (en + 0.12 + 0.11 / en) * d;
    Ok(KsResult { statistic: d, p_value: kolmogorov_q(lambda) })
}

fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=200 {
        let term = sign * (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expectation_examples() {
        assert_eq!(coupon_expectation(2, 2).unwrap(), 3.0);
        assert!((coupon_expectation(20, 5).unwrap() - 45.666_666_666_666_67).abs() < 1e-9);
        assert!(coupon_expectation(5, 0).is_err());
        assert!(coupon_expectation(5, 6).is_err());
    }

    #[test]
    fn tail_bound_examples() {
        assert!((coupon_tail_bound(100, 50, 0.5).unwrap() - (-5f64).exp()).abs() < 1e-15);
        let near_zero = coupon_tail_bound(1000, 1000, 1e-12).unwrap();
        assert!((near_zero - (-1f64).exp()).abs() < 1e-9);
        assert!(coupon_tail_bound(1, 1, 0.5).is_err());
        assert!(coupon_tail_bound(10, 1, 0.0).is_err());
    }

    #[test]
    fn chain_small_values() {
        let t = distance_chain(10, 5).unwrap();
        assert_eq!(t.p(0, 3), 1.0);
        assert!((t.p(2, 1) - 0.2).abs() < 1e-15);
        assert_eq!(t.p(3, 0), 0.0);
        assert!(distance_chain(1, 5).is_err());
        assert!(distance_chain(4, 0).is_err());
    }

    #[test]
    fn monotonicity_small_cases() {
        assert!(check_lemma2(2, 1).unwrap().is_empty());
        assert!(check_lemma2(10, 50).unwrap().is_empty());
    }

    #[test]
    fn params_for_hundred() {
        let p = lower_bound_params(100, 1.0).unwrap();
        let ln = 100f64.ln();
        assert!((p.t - 49.5 * ln).abs() < 1e-9);
        assert!((p.eps - (5.0 * ln).ln() / ln).abs() < 1e-12);
        assert_eq!(p.placement_distance, 26);
        assert!(!p.counting_ok);
        assert!(lower_bound_params(2, 1.0).is_err());
    }

    #[test]
    fn ks_identical_and_shifted() {
        let a: Vec<f64> = (0..500).map(f64::from).collect();
        let same = ks_two_sample(&a, &a).unwrap();
        assert_eq!(same.statistic, 0.0);
        assert!(same.p_value > 0.99);
        let shifted: Vec<f64> = a.iter().map(|x| x + 100.0).collect();
        let r = ks_two_sample(&a, &shifted).unwrap();
        assert!((r.statistic - 0.2).abs() < 1e-12);
        assert!(r.p_value < 1e-6);
    }
}
