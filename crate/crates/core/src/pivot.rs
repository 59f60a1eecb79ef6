//! Closed-form pivot gains, the expected-winner predicate and the four cost
//! thresholds.
//!
//! With `u = x_a + y_a` (expected A votes) and `v = x_b + y_b` (expected B
//! votes), the A-side and B-side pivot gains are
//!
//! ```text
//! R1 = 1/2 (0F1(;1, uv) + v 0F1(;2, uv)) exp(-u - v) = h(v, u)
//! R2 = 1/2 (0F1(;1, uv) + u 0F1(;2, uv)) exp(-u - v) = h(u, v)
//! ```
//!
//! so every gain is an evaluation of [`special_fn`](crate::special_fn)'s `h`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::Side;
use crate::special_fn::EvalConfig;

/// Population size, partisan share and A-support share.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElectorateParams {
    /// Expected population size `N` (a Poisson mean, so real-valued).
    pub n: f64,
    /// Share of partisans, who always vote.
    pub p: f64,
    /// Share of A-supporters, `1/2 < p_a < 1`.
    pub p_a: f64,
}

impl ElectorateParams {
    pub fn new(n: f64, p: f64, p_a: f64) -> Result<Self> {
        let params = ElectorateParams { n, p, p_a };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n.is_finite() && self.n > 0.0) {
            return Err(Error::InvalidParams(format!(
                "N must be positive, got {}",
                self.n
            )));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::InvalidParams(format!(
                "p must lie in (0, 1), got {}",
                self.p
            )));
        }
        if !(self.p_a > 0.5 && self.p_a < 1.0) {
            return Err(Error::InvalidParams(format!(
                "p_a must lie in (1/2, 1), got {}",
                self.p_a
            )));
        }
        Ok(())
    }

    /// Expected A-partisans, `N p p_a`.
    pub fn x_a(&self) -> f64 {
        self.n * self.p * self.p_a
    }

    /// Expected B-partisans, `N p (1 - p_a)`.
    pub fn x_b(&self) -> f64 {
        self.n * self.p * (1.0 - self.p_a)
    }

    /// Expected non-partisan A-supporters, `N (1 - p) p_a`.
    pub fn m_a(&self) -> f64 {
        self.n * (1.0 - self.p) * self.p_a
    }

    /// Expected non-partisan B-supporters, `N (1 - p) (1 - p_a)`.
    pub fn m_b(&self) -> f64 {
        self.n * (1.0 - self.p) * (1.0 - self.p_a)
    }

    /// All A-supporters, `N p_a`.
    pub fn supporters_a(&self) -> f64 {
        self.n * self.p_a
    }

    /// All B-supporters, `N (1 - p_a)`.
    pub fn supporters_b(&self) -> f64 {
        self.n * (1.0 - self.p_a)
    }

    /// Whether a coin-toss equilibrium can exist at all: the A-partisans
    /// must not outnumber all B-supporters.
    pub fn ct_admissible(&self) -> bool {
        self.x_a() <= self.supporters_b()
    }
}

/// Turnout probabilities of non-partisan A- and B-supporters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyPair {
    pub alpha_a: f64,
    pub alpha_b: f64,
}

impl StrategyPair {
    pub fn new(alpha_a: f64, alpha_b: f64) -> Result<Self> {
        let s = StrategyPair { alpha_a, alpha_b };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha_a", self.alpha_a), ("alpha_b", self.alpha_b)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParams(format!(
                    "{name} must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn y_a(&self, params: &ElectorateParams) -> f64 {
        params.m_a() * self.alpha_a
    }

    pub fn y_b(&self, params: &ElectorateParams) -> f64 {
        params.m_b() * self.alpha_b
    }
}

/// Expected vote totals `(x_a + y_a, x_b + y_b)`.
pub fn expected_votes(params: &ElectorateParams, s: &StrategyPair) -> (f64, f64) {
    (params.x_a() + s.y_a(params), params.x_b() + s.y_b(params))
}

fn validated(params: &ElectorateParams, s: &StrategyPair) -> Result<(f64, f64)> {
    params.validate()?;
    s.validate()?;
    Ok(expected_votes(params, s))
}

/// A-side pivot gain from the four Poisson means.
pub fn r1_from_means(cfg: &EvalConfig, x_a: f64, x_b: f64, y_a: f64, y_b: f64) -> Result<f64> {
    cfg.h(x_b + y_b, x_a + y_a)
}

/// B-side pivot gain from the four Poisson means.
pub fn r2_from_means(cfg: &EvalConfig, x_a: f64, x_b: f64, y_a: f64, y_b: f64) -> Result<f64> {
    cfg.h(x_a + y_a, x_b + y_b)
}

/// Expected gain, for a non-partisan A-supporter, from casting a vote.
pub fn r1_closed(params: &ElectorateParams, s: &StrategyPair) -> Result<f64> {
    r1_closed_with(&EvalConfig::default(), params, s)
}

/// Expected gain, for a non-partisan B-supporter, from casting a vote.
pub fn r2_closed(params: &ElectorateParams, s: &StrategyPair) -> Result<f64> {
    r2_closed_with(&EvalConfig::default(), params, s)
}

pub fn r1_closed_with(
    cfg: &EvalConfig,
    params: &ElectorateParams,
    s: &StrategyPair,
) -> Result<f64> {
    let (u, v) = validated(params, s)?;
    cfg.h(v, u)
}

pub fn r2_closed_with(
    cfg: &EvalConfig,
    params: &ElectorateParams,
    s: &StrategyPair,
) -> Result<f64> {
    let (u, v) = validated(params, s)?;
    cfg.h(u, v)
}

pub fn pivot_closed(
    cfg: &EvalConfig,
    params: &ElectorateParams,
    s: &StrategyPair,
    side: Side,
) -> Result<f64> {
    match side {
        Side::A => r1_closed_with(cfg, params, s),
        Side::B => r2_closed_with(cfg, params, s),
    }
}

/// Expected A votes minus expected B votes,
/// `N p_a (p + (1-p) alpha_a) - N (1 - p_a) (p + (1-p) alpha_b)`.
pub fn expected_margin(params: &ElectorateParams, s: &StrategyPair) -> f64 {
    let a = params.n * params.p_a * (params.p + (1.0 - params.p) * s.alpha_a);
    let b = params.n * (1.0 - params.p_a) * (params.p + (1.0 - params.p) * s.alpha_b);
    a - b
}

/// A is the winner in expectation.
pub fn a_wins_expected(params: &ElectorateParams, s: &StrategyPair) -> bool {
    expected_margin(params, s) > 0.0
}

/// The four cost thresholds separating the five regimes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSet {
    /// `g(2 x_a) / 2`: upper end of the coin-toss interval.
    pub ct_upper: f64,
    /// `g(2 N (1 - p_a)) / 2`: lower end of the coin-toss interval.
    pub ct_lower: f64,
    /// `h(x_a, x_b)`: below it neither the no-queue nor any partial
    /// absenteeism equilibrium exists.
    pub pa_lower: f64,
    /// `h(N (1 - p_a), N p_a)`: below it only all-swipe remains.
    pub ps_lower: f64,
    pub ln_ct_upper: f64,
    pub ln_ct_lower: f64,
    pub ln_pa_lower: f64,
    pub ln_ps_lower: f64,
    /// `N p p_a <= N (1 - p_a)`.
    pub ct_admissible: bool,
}

impl ThresholdSet {
    /// `ct_upper > ct_lower > pa_lower > ps_lower`, compared in log space.
    pub fn strictly_ordered(&self) -> bool {
        self.ln_ct_upper > self.ln_ct_lower
            && self.ln_ct_lower > self.ln_pa_lower
            && self.ln_pa_lower > self.ln_ps_lower
    }

    /// Thresholds in descending regime order.
    pub fn as_array(&self) -> [f64; 4] {
        [self.ct_upper, self.ct_lower, self.pa_lower, self.ps_lower]
    }

    pub fn ln_array(&self) -> [f64; 4] {
        [
            self.ln_ct_upper,
            self.ln_ct_lower,
            self.ln_pa_lower,
            self.ln_ps_lower,
        ]
    }
}

pub fn thresholds(params: &ElectorateParams) -> Result<ThresholdSet> {
    thresholds_with(&EvalConfig::default(), params)
}

pub fn thresholds_with(cfg: &EvalConfig, params: &ElectorateParams) -> Result<ThresholdSet> {
    params.validate()?;
    let x_a = params.x_a();
    let x_b = params.x_b();
    let sup_a = params.supporters_a();
    let sup_b = params.supporters_b();
    let ln_half = 0.5f64.ln();
    let ln_ct_upper = ln_half + cfg.ln_g(2.0 * x_a)?;
    let ln_ct_lower = ln_half + cfg.ln_g(2.0 * sup_b)?;
    let ln_pa_lower = cfg.ln_h(x_a, x_b)?;
    let ln_ps_lower = cfg.ln_h(sup_b, sup_a)?;
    Ok(ThresholdSet {
        ct_upper: 0.5 * cfg.g(2.0 * x_a)?,
        ct_lower: 0.5 * cfg.g(2.0 * sup_b)?,
        pa_lower: cfg.h(x_a, x_b)?,
        ps_lower: cfg.h(sup_b, sup_a)?,
        ln_ct_upper,
        ln_ct_lower,
        ln_pa_lower,
        ln_ps_lower,
        ct_admissible: params.ct_admissible(),
    })
}
