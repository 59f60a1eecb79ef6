//! Ground truth that does not go through any closed form: truncated Poisson
//! sums for the pivot gains and utilities, and seeded Monte Carlo elections.
//!
//! # Random streams
//!
//! Monte Carlo trials are split into fixed blocks of [`BLOCK_TRIALS`]. Block
//! `i` draws from `ChaCha8Rng::seed_from_u64(seed)` switched to stream `i`,
//! so results depend only on `(seed, trials)` and never on the number of
//! worker threads. Poisson and binomial variates come from `rand_distr`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::pivot::{ElectorateParams, StrategyPair};

/// Trials per independent random stream.
pub const BLOCK_TRIALS: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Upper-tail Poisson mass dropped per summation index.
    pub tail_eps: f64,
    /// Monte Carlo sample count.
    pub trials: u64,
    pub seed: u64,
    /// Largest truncation box (product of the four index ranges) accepted.
    pub cell_cap: u128,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            tail_eps: 1e-13,
            trials: 1_000_000,
            seed: 0x5eed_cafe,
            cell_cap: 1_000_000_000,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tail_eps > 0.0 && self.tail_eps < 1e-6) {
            return Err(Error::InvalidConfig(format!(
                "tail_eps must lie in (0, 1e-6), got {}",
                self.tail_eps
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be >= 1".into()));
        }
        Ok(())
    }
}

/// Tie rule: 1 if `m > n`, 1/2 on a tie, 0 otherwise.
pub fn tie_rule(m: u64, n: u64) -> f64 {
    match m.cmp(&n) {
        std::cmp::Ordering::Greater => 1.0,
        std::cmp::Ordering::Equal => 0.5,
        std::cmp::Ordering::Less => 0.0,
    }
}

/// Poisson means of the four vote counts a player perceives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonMeans {
    pub x_a: f64,
    pub x_b: f64,
    pub y_a: f64,
    pub y_b: f64,
}

impl PoissonMeans {
    pub fn new(x_a: f64, x_b: f64, y_a: f64, y_b: f64) -> Result<Self> {
        let m = PoissonMeans { x_a, x_b, y_a, y_b };
        for (name, v) in [("x_a", x_a), ("x_b", x_b), ("y_a", y_a), ("y_b", y_b)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::domain("PoissonMeans", name, v));
            }
        }
        Ok(m)
    }

    pub fn from_strategy(params: &ElectorateParams, s: &StrategyPair) -> Self {
        PoissonMeans {
            x_a: params.x_a(),
            x_b: params.x_b(),
            y_a: s.y_a(params),
            y_b: s.y_b(params),
        }
    }
}

/// A truncated sum and a bound on what the truncation dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BruteForce {
    pub value: f64,
    pub error_bound: f64,
    /// Number of terms kept per index `(a, b, r, s)`.
    pub box_dims: [usize; 4],
}

/// `P(X = 0..=K)` for `X ~ Poisson(mean)`, with `K` the smallest index whose
/// upper tail `P(X > K)` is below `tail_eps`.
pub(crate) fn truncated_pmf(mean: f64, tail_eps: f64) -> Vec<f64> {
    if mean == 0.0 {
        return vec![1.0];
    }
    let last = (mean + 15.0 * mean.sqrt() + 60.0).ceil() as usize;
    let mode = mean.floor() as usize;
    let mut pmf = vec![0.0; last + 1];
    pmf[mode] = (-mean + mode as f64 * mean.ln() - ln_gamma(mode as f64 + 1.0)).exp();
    for m in mode + 1..=last {
        pmf[m] = pmf[m - 1] * mean / m as f64;
    }
    for m in (0..mode).rev() {
        pmf[m] = pmf[m + 1] * (m + 1) as f64 / mean;
    }
    // tail[k] = P(X > k), summed from the far end
    let mut tail = 0.0;
    let mut cut = last;
    for k in (0..=last).rev() {
        if tail >= tail_eps {
            break;
        }
        cut = k;
        tail += pmf[k];
    }
    // `cut` is the smallest k with P(X > k) < tail_eps
    pmf.truncate(cut + 1);
    pmf
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &pa) in a.iter().enumerate() {
        for (j, &pb) in b.iter().enumerate() {
            out[i + j] += pa * pb;
        }
    }
    out
}

/// Truncated joint law of (A votes, B votes) as two independent marginals.
struct VoteTotals {
    a: Vec<f64>,
    b: Vec<f64>,
    dims: [usize; 4],
}

fn vote_totals(means: &PoissonMeans, cfg: &OracleConfig) -> Result<VoteTotals> {
    cfg.validate()?;
    PoissonMeans::new(means.x_a, means.x_b, means.y_a, means.y_b)?;
    let pa = truncated_pmf(means.x_a, cfg.tail_eps);
    let pb = truncated_pmf(means.x_b, cfg.tail_eps);
    let pr = truncated_pmf(means.y_a, cfg.tail_eps);
    let ps = truncated_pmf(means.y_b, cfg.tail_eps);
    let dims = [pa.len(), pb.len(), pr.len(), ps.len()];
    let cells: u128 = dims.iter().map(|&d| d as u128).product();
    if cells > cfg.cell_cap {
        return Err(Error::Resource {
            cells,
            cap: cfg.cell_cap,
        });
    }
    // Summing over a + r and b + s first visits exactly the same truncated
    // box as the quadruple loop.
    Ok(VoteTotals {
        a: convolve(&pa, &pr),
        b: convolve(&pb, &ps),
        dims,
    })
}

fn expect_over<F: Fn(u64, u64) -> f64>(totals: &VoteTotals, f: F) -> f64 {
    let mut sum = 0.0;
    for (m, &pm) in totals.a.iter().enumerate() {
        let mut row = 0.0;
        for (n, &pn) in totals.b.iter().enumerate() {
            row += pn * f(m as u64, n as u64);
        }
        sum += pm * row;
    }
    sum
}

/// Truncated quadruple sum of `P(a) P(b) P(r) P(s) [f(own + 1, other) - f(own, other)]`.
pub fn pivot_gain_bruteforce(
    means: &PoissonMeans,
    side: Side,
    cfg: &OracleConfig,
) -> Result<BruteForce> {
    let totals = vote_totals(means, cfg)?;
    let value = match side {
        Side::A => expect_over(&totals, |m, n| tie_rule(m + 1, n) - tie_rule(m, n)),
        Side::B => expect_over(&totals, |m, n| tie_rule(n + 1, m) - tie_rule(n, m)),
    };
    Ok(BruteForce {
        value,
        error_bound: 4.0 * cfg.tail_eps,
        box_dims: totals.dims,
    })
}

/// Perceived utility of a non-partisan supporter of `side` who votes
/// (`vote = true`) or abstains.
pub fn utility_bruteforce(
    side: Side,
    vote: bool,
    means: &PoissonMeans,
    c: f64,
    cfg: &OracleConfig,
) -> Result<BruteForce> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::domain("utility_bruteforce", "c", c));
    }
    let totals = vote_totals(means, cfg)?;
    let own = u64::from(vote);
    let gross = match side {
        Side::A => expect_over(&totals, |m, n| tie_rule(m + own, n)),
        Side::B => expect_over(&totals, |m, n| tie_rule(n + own, m)),
    };
    Ok(BruteForce {
        value: gross - if vote { c } else { 0.0 },
        error_bound: 4.0 * cfg.tail_eps,
        box_dims: totals.dims,
    })
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

/// Outcome frequencies of simulated elections.
///
/// `pivot_a` is the mean of `f(A + 1, B) - f(A, B)` over trials, i.e. half
/// the frequency of `A - B` in `{0, -1}`; `pivot_b` mirrors it. Both are
/// directly comparable to a voting cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinStats {
    pub p_a_wins: f64,
    pub p_tie: f64,
    pub p_b_wins: f64,
    pub se_a_wins: f64,
    /// Probability that A is chosen once ties are broken by a fair coin.
    pub p_a_elected: f64,
    pub se_a_elected: f64,
    pub pivot_a: f64,
    pub se_pivot_a: f64,
    pub pivot_b: f64,
    pub se_pivot_b: f64,
    pub a_wins_count: u64,
    pub tie_count: u64,
    pub b_wins_count: u64,
    pub trials_used: u64,
    /// Rounded sizes of the non-partisan A and B pools.
    pub nonpartisan_sizes: [u64; 2],
    /// Sample mean and variance of realized non-partisan turnout, A then B.
    pub turnout_mean: [f64; 2],
    pub turnout_var: [f64; 2],
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    a_wins: u64,
    ties: u64,
    b_wins: u64,
    pivot_a: u64,
    pivot_b: u64,
    turnout_sum: [u128; 2],
    turnout_sq: [u128; 2],
}

impl Tally {
    fn record(&mut self, a_votes: u64, b_votes: u64) {
        match a_votes.cmp(&b_votes) {
            std::cmp::Ordering::Greater => self.a_wins += 1,
            std::cmp::Ordering::Equal => self.ties += 1,
            std::cmp::Ordering::Less => self.b_wins += 1,
        }
        if a_votes == b_votes || a_votes + 1 == b_votes {
            self.pivot_a += 1;
        }
        if a_votes == b_votes || b_votes + 1 == a_votes {
            self.pivot_b += 1;
        }
    }

    fn merge(mut self, other: &Tally) -> Tally {
        self.a_wins += other.a_wins;
        self.ties += other.ties;
        self.b_wins += other.b_wins;
        self.pivot_a += other.pivot_a;
        self.pivot_b += other.pivot_b;
        for k in 0..2 {
            self.turnout_sum[k] += other.turnout_sum[k];
            self.turnout_sq[k] += other.turnout_sq[k];
        }
        self
    }
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Runs `trials` in deterministic blocks; `per_block` fills one tally.
fn run_blocks<F>(cfg: &OracleConfig, per_block: F) -> Tally
where
    F: Fn(&mut ChaCha8Rng, u64, &mut Tally) + Sync,
{
    let blocks = cfg.trials.div_ceil(BLOCK_TRIALS);
    let tallies: Vec<Tally> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(cfg.seed, b);
            let n = BLOCK_TRIALS.min(cfg.trials - b * BLOCK_TRIALS);
            let mut t = Tally::default();
            per_block(&mut rng, n, &mut t);
            t
        })
        .collect();
    tallies.iter().fold(Tally::default(), |acc, t| acc.merge(t))
}

/// Poisson sampler that tolerates a zero mean.
enum Counts {
    Zero,
    Poisson(Poisson<f64>),
}

impl Counts {
    fn new(mean: f64) -> Result<Self> {
        if mean == 0.0 {
            return Ok(Counts::Zero);
        }
        Poisson::new(mean)
            .map(Counts::Poisson)
            .map_err(|e| Error::InvalidParams(format!("Poisson({mean}): {e}")))
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> u64 {
        match self {
            Counts::Zero => 0,
            Counts::Poisson(d) => d.sample(rng) as u64,
        }
    }
}

fn proportion_se(count: u64, trials: u64, scale: f64) -> (f64, f64) {
    let q = count as f64 / trials as f64;
    (scale * q, scale * (q * (1.0 - q) / trials as f64).sqrt())
}

/// Simulates elections in a population of fixed composition.
///
/// Partisan counts are Poisson(`x_a`), Poisson(`x_b`); non-partisan turnout is
/// Binomial(`round(N (1-p) p_a)`, `alpha_a`) and
/// Binomial(`round(N (1-p) (1-p_a))`, `alpha_b`). Rounding the pool sizes is
/// this crate's convention for realizing non-integer class sizes.
pub fn simulate_election(
    params: &ElectorateParams,
    s: &StrategyPair,
    cfg: &OracleConfig,
) -> Result<WinStats> {
    params.validate()?;
    s.validate()?;
    cfg.validate()?;
    let pool_a = params.m_a().round() as u64;
    let pool_b = params.m_b().round() as u64;
    let part_a = Counts::new(params.x_a())?;
    let part_b = Counts::new(params.x_b())?;
    let bin_a =
        Binomial::new(pool_a, s.alpha_a).map_err(|e| Error::InvalidParams(e.to_string()))?;
    let bin_b =
        Binomial::new(pool_b, s.alpha_b).map_err(|e| Error::InvalidParams(e.to_string()))?;

    let tally = run_blocks(cfg, |rng, n, t| {
        for _ in 0..n {
            let za = bin_a.sample(rng);
            let zb = bin_b.sample(rng);
            let a = part_a.draw(rng) + za;
            let b = part_b.draw(rng) + zb;
            t.record(a, b);
            t.turnout_sum[0] += za as u128;
            t.turnout_sum[1] += zb as u128;
            t.turnout_sq[0] += (za as u128) * (za as u128);
            t.turnout_sq[1] += (zb as u128) * (zb as u128);
        }
    });

    let trials = cfg.trials;
    let tf = trials as f64;
    let (p_a_wins, se_a_wins) = proportion_se(tally.a_wins, trials, 1.0);
    let p_tie = tally.ties as f64 / tf;
    let p_b_wins = tally.b_wins as f64 / tf;
    let p_a_elected = p_a_wins + 0.5 * p_tie;
    let second_moment = p_a_wins + 0.25 * p_tie;
    let se_a_elected = ((second_moment - p_a_elected * p_a_elected).max(0.0) / tf).sqrt();
    let (pivot_a, se_pivot_a) = proportion_se(tally.pivot_a, trials, 0.5);
    let (pivot_b, se_pivot_b) = proportion_se(tally.pivot_b, trials, 0.5);
    let mut turnout_mean = [0.0; 2];
    let mut turnout_var = [0.0; 2];
    for k in 0..2 {
        let mean = tally.turnout_sum[k] as f64 / tf;
        turnout_mean[k] = mean;
        turnout_var[k] = (tally.turnout_sq[k] as f64 / tf - mean * mean).max(0.0);
    }

    Ok(WinStats {
        p_a_wins,
        p_tie,
        p_b_wins,
        se_a_wins,
        p_a_elected,
        se_a_elected,
        pivot_a,
        se_pivot_a,
        pivot_b,
        se_pivot_b,
        a_wins_count: tally.a_wins,
        tie_count: tally.ties,
        b_wins_count: tally.b_wins,
        trials_used: trials,
        nonpartisan_sizes: [pool_a, pool_b],
        turnout_mean,
        turnout_var,
    })
}

/// Monte Carlo pivot gain in the environment a player perceives: all four
/// counts independent Poisson.
pub fn poisson_environment_pivot_means(
    means: &PoissonMeans,
    side: Side,
    cfg: &OracleConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    PoissonMeans::new(means.x_a, means.x_b, means.y_a, means.y_b)?;
    let draws = [
        Counts::new(means.x_a)?,
        Counts::new(means.x_b)?,
        Counts::new(means.y_a)?,
        Counts::new(means.y_b)?,
    ];
    let tally = run_blocks(cfg, |rng, n, t| {
        for _ in 0..n {
            let a = draws[0].draw(rng) + draws[2].draw(rng);
            let b = draws[1].draw(rng) + draws[3].draw(rng);
            t.record(a, b);
        }
    });
    let count = match side {
        Side::A => tally.pivot_a,
        Side::B => tally.pivot_b,
    };
    let (mean, se) = proportion_se(count, cfg.trials, 0.5);
    Ok(Estimate { mean, se })
}

pub fn poisson_environment_pivot(
    params: &ElectorateParams,
    s: &StrategyPair,
    side: Side,
    cfg: &OracleConfig,
) -> Result<Estimate> {
    params.validate()?;
    s.validate()?;
    poisson_environment_pivot_means(&PoissonMeans::from_strategy(params, s), side, cfg)
}
