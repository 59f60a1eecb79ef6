//! Solvers for the type-symmetric equilibria `(alpha_a, alpha_b)`.
//!
//! With `u`, `v` the expected A and B vote totals, an equilibrium needs
//! each class of non-partisans to best-respond to its own pivot gain. Since
//! `h(u, v) - h(v, u)` has the sign of `u - v`, the only possible profiles
//! are
//!
//! * coin-toss: both interior, `u = v`, gains equal to `c`;
//! * partial absenteeism: `alpha_a = 0`, `alpha_b` interior, B gain `= c`;
//! * no-queue `(0, 0)` and all-swipe `(1, 1)`;
//! * partial saturation: `alpha_a` interior, `alpha_b = 1`, A gain `= c`;
//! * the corner `(0, 1)`, possible only when A partisans outnumber all
//!   B-supporters. It is reported as partial absenteeism with `alpha_b = 1`.
//!
//! Cost comparisons use a relative slack `eps_cmp`: the thresholds involved
//! span hundreds of orders of magnitude, so an absolute slack would be
//! meaningless at one end of the range and vacuous at the other.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::Side;
use crate::pivot::{self, ElectorateParams, StrategyPair};
use crate::roots::{bisect, Root};
use crate::special_fn::EvalConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumKind {
    CoinToss,
    PartialAbsenteeism,
    NoQueue,
    PartialSaturation,
    AllSwipe,
}

impl EquilibriumKind {
    pub const ALL: [EquilibriumKind; 5] = [
        EquilibriumKind::CoinToss,
        EquilibriumKind::PartialAbsenteeism,
        EquilibriumKind::NoQueue,
        EquilibriumKind::PartialSaturation,
        EquilibriumKind::AllSwipe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EquilibriumKind::CoinToss => "coin_toss",
            EquilibriumKind::PartialAbsenteeism => "partial_absenteeism",
            EquilibriumKind::NoQueue => "no_queue",
            EquilibriumKind::PartialSaturation => "partial_saturation",
            EquilibriumKind::AllSwipe => "all_swipe",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// Who wins in expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    A,
    TieInExpectation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub kind: EquilibriumKind,
    pub strategies: StrategyPair,
    /// Solved aggregate: `2 (x_a + y_a)` for coin-toss, `x_b + y_b` for
    /// partial absenteeism, `x_a + y_a` for partial saturation.
    pub z_root: Option<f64>,
    /// Violation of the equilibrium conditions at the returned strategies:
    /// `|gain - c|` for each indifferent class, plus any amount by which a
    /// cornered class would rather deviate.
    pub residual: f64,
    pub winner: Winner,
    /// Bisection steps spent (0 for closed-form corners).
    pub iterations: usize,
    /// Other kinds that produced the same profile (interval endpoints).
    pub coincides_with: Vec<EquilibriumKind>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Relative bracket width at which bisection stops.
    pub z_rel_tol: f64,
    pub max_iter: usize,
    /// Relative slack for comparing a cost against a threshold.
    pub eps_cmp: f64,
    pub eval: EvalConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            z_rel_tol: 1e-12,
            max_iter: 200,
            eps_cmp: 1e-12,
            eval: EvalConfig::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.z_rel_tol > 0.0 && self.z_rel_tol < 1e-3) {
            return Err(Error::InvalidConfig(format!(
                "z_rel_tol must lie in (0, 1e-3), got {}",
                self.z_rel_tol
            )));
        }
        if self.max_iter < 50 {
            return Err(Error::InvalidConfig(format!(
                "max_iter must be >= 50, got {}",
                self.max_iter
            )));
        }
        if !(self.eps_cmp >= 0.0 && self.eps_cmp < 1e-3) {
            return Err(Error::InvalidConfig(format!(
                "eps_cmp must lie in [0, 1e-3), got {}",
                self.eps_cmp
            )));
        }
        self.eval.validate()
    }

    /// `a <= b` up to relative slack.
    pub(crate) fn le(&self, a: f64, b: f64) -> bool {
        a <= b + self.eps_cmp * a.abs().max(b.abs())
    }

    pub(crate) fn ge(&self, a: f64, b: f64) -> bool {
        self.le(b, a)
    }

    /// `a == b` up to relative slack.
    pub(crate) fn close(&self, a: f64, b: f64) -> bool {
        self.le(a, b) && self.le(b, a)
    }
}

fn check_cost(func: &'static str, c: f64) -> Result<()> {
    if c.is_finite() && c > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(func, "c", c))
    }
}

fn gains(cfg: &SolverConfig, params: &ElectorateParams, s: &StrategyPair) -> Result<(f64, f64)> {
    Ok((
        pivot::pivot_closed(&cfg.eval, params, s, Side::A)?,
        pivot::pivot_closed(&cfg.eval, params, s, Side::B)?,
    ))
}

/// Equilibrium-condition violation for a profile, given which classes are
/// indifferent and which are cornered.
fn residual(
    cfg: &SolverConfig,
    params: &ElectorateParams,
    s: &StrategyPair,
    c: f64,
) -> Result<f64> {
    let (r1, r2) = gains(cfg, params, s)?;
    let one = |r: f64, alpha: f64| {
        if alpha <= 0.0 {
            (r - c).max(0.0)
        } else if alpha >= 1.0 {
            (c - r).max(0.0)
        } else {
            (r - c).abs()
        }
    };
    Ok(one(r1, s.alpha_a).max(one(r2, s.alpha_b)))
}

fn build(
    cfg: &SolverConfig,
    params: &ElectorateParams,
    c: f64,
    kind: EquilibriumKind,
    strategies: StrategyPair,
    z_root: Option<f64>,
    iterations: usize,
) -> Result<Equilibrium> {
    strategies.validate()?;
    Ok(Equilibrium {
        kind,
        strategies,
        z_root,
        residual: residual(cfg, params, &strategies, c)?,
        winner: if kind == EquilibriumKind::CoinToss {
            Winner::TieInExpectation
        } else {
            Winner::A
        },
        iterations,
        coincides_with: Vec::new(),
    })
}

/// Root of an `ln`-space monotone difference on `[lo, hi]`, snapping to an
/// endpoint when it is within `eps_cmp` of the target.
fn monotone_root<F>(
    what: &'static str,
    cfg: &SolverConfig,
    mut f: F,
    lo: f64,
    hi: f64,
) -> Result<Option<Root>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo.abs() <= cfg.eps_cmp {
        return Ok(Some(Root {
            z: lo,
            iterations: 0,
        }));
    }
    if f_hi.abs() <= cfg.eps_cmp {
        return Ok(Some(Root {
            z: hi,
            iterations: 0,
        }));
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return Ok(None);
    }
    bisect(what, f, lo, hi, cfg.z_rel_tol, cfg.max_iter).map(Some)
}

/// The unique coin-toss equilibrium, if `ct_lower <= c <= ct_upper`.
pub fn solve_coin_toss(
    params: &ElectorateParams,
    c: f64,
    cfg: &SolverConfig,
) -> Result<Option<Equilibrium>> {
    params.validate()?;
    cfg.validate()?;
    if !(c.is_finite() && c > 0.0 && c < 0.5) {
        return Err(Error::domain("solve_coin_toss", "c", c));
    }
    if !params.ct_admissible() {
        return Ok(None);
    }
    let x_a = params.x_a();
    let z_lo = 2.0 * x_a;
    let z_hi = 2.0 * params.supporters_b();
    let ln_2c = (2.0 * c).ln();
    let root = monotone_root(
        "coin-toss bisection",
        cfg,
        |z| Ok(cfg.eval.ln_g(z)? - ln_2c),
        z_lo,
        z_hi,
    )?;
    let Some(root) = root else { return Ok(None) };
    let z = root.z;
    let (p, p_a) = (params.p, params.p_a);
    let alpha_a = ((z / 2.0 - x_a) / params.m_a()).clamp(0.0, 1.0);
    let alpha_b = ((p * (2.0 * p_a - 1.0) + p_a * (1.0 - p) * alpha_a) / ((1.0 - p) * (1.0 - p_a)))
        .clamp(0.0, 1.0);
    let s = StrategyPair { alpha_a, alpha_b };
    build(
        cfg,
        params,
        c,
        EquilibriumKind::CoinToss,
        s,
        Some(z),
        root.iterations,
    )
    .map(Some)
}

/// Maximiser of `z -> h(x_a, z)` on `[0, inf)`: 0 when `x_a <= sqrt 2`,
/// otherwise the single sign change of `i(z)` inside `(0, x_a)`.
pub fn find_h_peak(x_a: f64, cfg: &SolverConfig) -> Result<f64> {
    if !(x_a.is_finite() && x_a > 0.0) {
        return Err(Error::domain("find_h_peak", "x_a", x_a));
    }
    if x_a <= std::f64::consts::SQRT_2 {
        return Ok(0.0);
    }
    let sign = |z: f64| cfg.eval.i_sign_bracket(x_a, z);
    // i(0) = 0 and i > 0 just right of 0; find a positive left end.
    let mut lo = 0.5 * x_a;
    while sign(lo) <= 0.0 {
        lo *= 0.5;
        if lo < 1e-300 {
            return Ok(0.0);
        }
    }
    let root = bisect(
        "h peak bisection",
        |z| Ok(sign(z)),
        lo,
        x_a,
        cfg.z_rel_tol,
        cfg.max_iter,
    )?;
    Ok(root.z)
}

/// Partial-absenteeism equilibria `(0, alpha_b)`: every `z = x_b + y_b` in
/// `(x_b, min(x_a, N (1 - p_a))]` with `h(x_a, z) = c`, plus the `(0, 1)`
/// corner when A partisans outnumber all B-supporters.
pub fn solve_partial_absenteeism(
    params: &ElectorateParams,
    c: f64,
    cfg: &SolverConfig,
) -> Result<Vec<Equilibrium>> {
    params.validate()?;
    cfg.validate()?;
    check_cost("solve_partial_absenteeism", c)?;
    let x_a = params.x_a();
    let x_b = params.x_b();
    let sup_b = params.supporters_b();
    let corner = x_a > sup_b;
    let upper = x_a.min(sup_b);
    let ln_c = c.ln();
    let f = |z: f64| Ok(cfg.eval.ln_h(x_a, z)? - ln_c);
    let peak = find_h_peak(x_a, cfg)?;

    let mut roots: Vec<Root> = Vec::new();
    let branches = [(x_b, peak.min(upper)), (peak.max(x_b), upper)];
    for (lo, hi) in branches {
        if hi <= lo {
            continue;
        }
        if let Some(r) = monotone_root("partial-absenteeism bisection", cfg, f, lo, hi)? {
            let duplicate = roots
                .iter()
                .any(|q| (q.z - r.z).abs() <= cfg.z_rel_tol.sqrt() * r.z.max(1.0));
            let no_queue = (r.z - x_b).abs() <= cfg.eps_cmp * x_b.max(1e-300) || r.z <= x_b;
            let at_corner = corner && (r.z - upper).abs() <= cfg.eps_cmp * upper;
            if !duplicate && !no_queue && !at_corner {
                roots.push(r);
            }
        }
    }

    let mut out = Vec::new();
    for r in roots {
        let alpha_b = (r.z - x_b) / params.m_b();
        if !(0.0..=1.0 + 1e-12).contains(&alpha_b) {
            continue;
        }
        let s = StrategyPair {
            alpha_a: 0.0,
            alpha_b: alpha_b.min(1.0),
        };
        debug_assert!(
            s.alpha_b
                <= params.p * (2.0 * params.p_a - 1.0) / ((1.0 - params.p) * (1.0 - params.p_a))
                    + 1e-9
                || corner
        );
        out.push(build(
            cfg,
            params,
            c,
            EquilibriumKind::PartialAbsenteeism,
            s,
            Some(r.z),
            r.iterations,
        )?);
    }

    if corner {
        let r1 = cfg.eval.h(sup_b, x_a)?;
        let r2 = cfg.eval.h(x_a, sup_b)?;
        if cfg.le(r1, c) && cfg.le(c, r2) {
            let s = StrategyPair {
                alpha_a: 0.0,
                alpha_b: 1.0,
            };
            let mut e = build(
                cfg,
                params,
                c,
                EquilibriumKind::PartialAbsenteeism,
                s,
                Some(sup_b),
                0,
            )?;
            if cfg.close(c, r1) {
                e.coincides_with.push(EquilibriumKind::PartialSaturation);
            }
            out.push(e);
        }
    }
    out.sort_by(|a, b| a.strategies.alpha_b.total_cmp(&b.strategies.alpha_b));
    Ok(out)
}

/// `(0, 0)` is an equilibrium iff `c >= h(x_a, x_b)`.
pub fn no_queue_exists(params: &ElectorateParams, c: f64) -> Result<bool> {
    no_queue_exists_with(params, c, &SolverConfig::default())
}

pub fn no_queue_exists_with(params: &ElectorateParams, c: f64, cfg: &SolverConfig) -> Result<bool> {
    params.validate()?;
    check_cost("no_queue_exists", c)?;
    Ok(cfg.ge(c, cfg.eval.h(params.x_a(), params.x_b())?))
}

/// Partial-saturation equilibrium `(alpha_a, 1)`: `z = x_a + y_a` in
/// `[max(x_a, N (1 - p_a)), N p_a]` with `h(N (1 - p_a), z) = c`.
pub fn solve_partial_saturation(
    params: &ElectorateParams,
    c: f64,
    cfg: &SolverConfig,
) -> Result<Option<Equilibrium>> {
    params.validate()?;
    cfg.validate()?;
    check_cost("solve_partial_saturation", c)?;
    let x_a = params.x_a();
    let sup_b = params.supporters_b();
    let corner = x_a > sup_b;
    let lo = x_a.max(sup_b);
    let hi = params.supporters_a();
    let ln_c = c.ln();
    let root = monotone_root(
        "partial-saturation bisection",
        cfg,
        |z| Ok(cfg.eval.ln_h(sup_b, z)? - ln_c),
        lo,
        hi,
    )?;
    let Some(root) = root else { return Ok(None) };
    // the (0, 1) corner is reported by the partial-absenteeism solver
    if corner && root.z <= lo {
        return Ok(None);
    }
    let alpha_a = ((root.z - x_a) / params.m_a()).clamp(0.0, 1.0);
    let s = StrategyPair {
        alpha_a,
        alpha_b: 1.0,
    };
    build(
        cfg,
        params,
        c,
        EquilibriumKind::PartialSaturation,
        s,
        Some(root.z),
        root.iterations,
    )
    .map(Some)
}

/// `(1, 1)` is an equilibrium iff `c <= h(N (1 - p_a), N p_a)`.
pub fn all_swipe_exists(params: &ElectorateParams, c: f64) -> Result<bool> {
    all_swipe_exists_with(params, c, &SolverConfig::default())
}

pub fn all_swipe_exists_with(
    params: &ElectorateParams,
    c: f64,
    cfg: &SolverConfig,
) -> Result<bool> {
    params.validate()?;
    check_cost("all_swipe_exists", c)?;
    Ok(cfg.le(c, cfg.eval.h(params.supporters_b(), params.supporters_a())?))
}

/// Every type-symmetric equilibrium at cost `c`, sorted by kind then by
/// `alpha_b`. Profiles produced by two solvers (interval endpoints) are
/// reported once under the first kind, with the other in `coincides_with`.
pub fn enumerate_equilibria(
    params: &ElectorateParams,
    c: f64,
    cfg: &SolverConfig,
) -> Result<Vec<Equilibrium>> {
    params.validate()?;
    cfg.validate()?;
    check_cost("enumerate_equilibria", c)?;
    let mut all = Vec::new();
    if c < 0.5 {
        all.extend(solve_coin_toss(params, c, cfg)?);
    }
    all.extend(solve_partial_absenteeism(params, c, cfg)?);
    if no_queue_exists_with(params, c, cfg)? {
        let s = StrategyPair {
            alpha_a: 0.0,
            alpha_b: 0.0,
        };
        all.push(build(cfg, params, c, EquilibriumKind::NoQueue, s, None, 0)?);
    }
    all.extend(solve_partial_saturation(params, c, cfg)?);
    if all_swipe_exists_with(params, c, cfg)? {
        let s = StrategyPair {
            alpha_a: 1.0,
            alpha_b: 1.0,
        };
        all.push(build(
            cfg,
            params,
            c,
            EquilibriumKind::AllSwipe,
            s,
            None,
            0,
        )?);
    }
    all.sort_by(|a, b| {
        a.kind
            .cmp(&b.kind)
            .then(a.strategies.alpha_b.total_cmp(&b.strategies.alpha_b))
            .then(a.strategies.alpha_a.total_cmp(&b.strategies.alpha_a))
    });

    let same = |a: &StrategyPair, b: &StrategyPair| {
        (a.alpha_a - b.alpha_a).abs() <= 1e-9 && (a.alpha_b - b.alpha_b).abs() <= 1e-9
    };
    let mut out: Vec<Equilibrium> = Vec::new();
    for e in all {
        if let Some(kept) = out.iter_mut().find(|k| same(&k.strategies, &e.strategies)) {
            if kept.kind != e.kind && !kept.coincides_with.contains(&e.kind) {
                kept.coincides_with.push(e.kind);
            }
        } else {
            out.push(e);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: f64, p: f64, p_a: f64) -> ElectorateParams {
        ElectorateParams::new(n, p, p_a).unwrap()
    }

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    fn midway(pr: &ElectorateParams) -> f64 {
        let t = pivot::thresholds(pr).unwrap();
        0.5 * (t.ct_upper + t.ct_lower)
    }

    #[test]
    fn coin_toss_midway() {
        let pr = params(1000.0, 0.2, 0.6);
        let c = midway(&pr);
        let e = solve_coin_toss(&pr, c, &cfg()).unwrap().unwrap();
        let (r1, r2) = gains(&cfg(), &pr, &e.strategies).unwrap();
        assert!((r1 - c).abs() < 1e-8 && (r2 - c).abs() < 1e-8);
        assert!(pivot::expected_margin(&pr, &e.strategies).abs() < 1e-9 * pr.n);
        assert!(e.strategies.alpha_a > 0.0 && e.strategies.alpha_a < 1.0);
        assert!(e.strategies.alpha_b > 0.0 && e.strategies.alpha_b < 1.0);
        assert_eq!(e.winner, Winner::TieInExpectation);
    }

    #[test]
    fn coin_toss_absent_outside_interval() {
        let pr = params(1000.0, 0.2, 0.6);
        let t = pivot::thresholds(&pr).unwrap();
        assert!(solve_coin_toss(&pr, t.ct_upper * 1.01, &cfg())
            .unwrap()
            .is_none());
        assert!(solve_coin_toss(&pr, t.ct_lower * 0.99, &cfg())
            .unwrap()
            .is_none());
        assert!(solve_coin_toss(&pr, 0.5, &cfg()).is_err());
        assert!(solve_coin_toss(&pr, 0.0, &cfg()).is_err());
        let bad = params(1000.0, 0.9, 0.9);
        assert!(solve_coin_toss(&bad, 0.01, &cfg()).unwrap().is_none());
    }

    #[test]
    fn h_peak() {
        assert_eq!(find_h_peak(1.0, &cfg()).unwrap(), 0.0);
        let ev = EvalConfig::default();
        for x in [1.5, 3.0, 10.0, 120.0, 5000.0] {
            let z = find_h_peak(x, &cfg()).unwrap();
            assert!(z > 0.0 && z < x, "x={x} z={z}");
            let h0 = ev.h(x, z).unwrap();
            for d in [1e-3, 1e-2, 0.1] {
                let dz = d * z.max(1.0);
                assert!(ev.h(x, z + dz).unwrap() <= h0);
                if z > dz {
                    assert!(ev.h(x, z - dz).unwrap() <= h0);
                }
            }
        }
        // grid scan at x = 10
        let z = find_h_peak(10.0, &cfg()).unwrap();
        let best = (0..=10_000)
            .map(|k| k as f64 * 1e-3)
            .max_by(|a, b| ev.h(10.0, *a).unwrap().total_cmp(&ev.h(10.0, *b).unwrap()))
            .unwrap();
        assert!((best - z).abs() < 2e-3);
    }

    #[test]
    fn partial_absenteeism_single_root() {
        let pr = params(5000.0, 0.2, 0.6);
        let t = pivot::thresholds(&pr).unwrap();
        let c = (t.ln_pa_lower + 0.5 * (t.ct_upper.ln() - t.ln_pa_lower)).exp();
        let eqs = solve_partial_absenteeism(&pr, c, &cfg()).unwrap();
        assert_eq!(eqs.len(), 1);
        let e = &eqs[0];
        assert_eq!(e.strategies.alpha_a, 0.0);
        let (r1, r2) = gains(&cfg(), &pr, &e.strategies).unwrap();
        assert!((r2 - c).abs() < 1e-8 && r1 <= c + 1e-8);
    }

    #[test]
    fn partial_absenteeism_above_peak_is_empty() {
        let pr = params(5000.0, 0.2, 0.6);
        let peak = find_h_peak(pr.x_a(), &cfg()).unwrap();
        let top = cfg().eval.h(pr.x_a(), peak).unwrap();
        assert!(solve_partial_absenteeism(&pr, top * 1.001, &cfg())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn partial_saturation() {
        let pr = params(2000.0, 0.2, 0.6);
        let t = pivot::thresholds(&pr).unwrap();
        let c = (0.5 * (t.ln_ps_lower + t.ln_ct_lower)).exp();
        let e = solve_partial_saturation(&pr, c, &cfg()).unwrap().unwrap();
        assert_eq!(e.strategies.alpha_b, 1.0);
        let (r1, r2) = gains(&cfg(), &pr, &e.strategies).unwrap();
        assert!(((r1 - c) / c).abs() < 1e-8 && r2 >= c * (1.0 - 1e-8));
        assert!(solve_partial_saturation(&pr, t.ct_lower * 1.01, &cfg())
            .unwrap()
            .is_none());
        // upper endpoint meets the coin-toss boundary
        let e = solve_partial_saturation(&pr, t.ct_lower, &cfg())
            .unwrap()
            .unwrap();
        let want = (pr.supporters_b() - pr.x_a()) / pr.m_a();
        assert!((e.strategies.alpha_a - want).abs() < 1e-9);
    }

    #[test]
    fn corner_tests() {
        let pr = params(5000.0, 0.2, 0.6);
        let t = pivot::thresholds(&pr).unwrap();
        assert!(no_queue_exists(&pr, 0.5).unwrap());
        assert!(!no_queue_exists(&pr, t.pa_lower * 0.999).unwrap());
        assert!(no_queue_exists(&pr, t.pa_lower).unwrap());
        assert!(all_swipe_exists(&pr, 1e-300).unwrap());
        assert!(!all_swipe_exists(&pr, 0.5).unwrap());
        assert!(all_swipe_exists(&pr, t.ps_lower).unwrap());
        assert!(!all_swipe_exists(&pr, t.ps_lower * 1.001).unwrap());
    }

    #[test]
    fn enumerate_case_two_and_five() {
        let pr = params(1000.0, 0.2, 0.6);
        let kinds = |c| {
            enumerate_equilibria(&pr, c, &cfg())
                .unwrap()
                .iter()
                .map(|e| e.kind)
                .collect::<Vec<_>>()
        };
        assert_eq!(
            kinds(midway(&pr)),
            vec![
                EquilibriumKind::CoinToss,
                EquilibriumKind::PartialAbsenteeism,
                EquilibriumKind::NoQueue
            ]
        );
        let t = pivot::thresholds(&pr).unwrap();
        assert_eq!(kinds(t.ps_lower * 0.5), vec![EquilibriumKind::AllSwipe]);
    }

    #[test]
    fn endpoint_coincidence_is_merged() {
        let pr = params(1000.0, 0.2, 0.6);
        let t = pivot::thresholds(&pr).unwrap();
        let eqs = enumerate_equilibria(&pr, t.ct_lower, &cfg()).unwrap();
        let ct = eqs
            .iter()
            .find(|e| e.kind == EquilibriumKind::CoinToss)
            .unwrap();
        assert!(ct
            .coincides_with
            .contains(&EquilibriumKind::PartialSaturation));
        assert!(!eqs
            .iter()
            .any(|e| e.kind == EquilibriumKind::PartialSaturation));
    }

    #[test]
    fn non_admissible_corner() {
        // N p p_a = 81 > N (1 - p_a) = 10
        let pr = params(100.0, 0.9, 0.9);
        let ev = EvalConfig::default();
        let lo = ev.h(pr.supporters_b(), pr.x_a()).unwrap();
        let hi = ev.h(pr.x_a(), pr.supporters_b()).unwrap();
        assert!(lo < hi);
        let c = (0.5 * (lo.ln() + hi.ln())).exp();
        let eqs = enumerate_equilibria(&pr, c, &cfg()).unwrap();
        let corner = eqs
            .iter()
            .find(|e| e.strategies.alpha_a == 0.0 && e.strategies.alpha_b == 1.0)
            .expect("corner present");
        assert_eq!(corner.kind, EquilibriumKind::PartialAbsenteeism);
        assert_eq!(corner.residual, 0.0);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig {
            max_iter: 10,
            ..cfg()
        }
        .validate()
        .is_err());
        assert!(SolverConfig {
            z_rel_tol: 0.0,
            ..cfg()
        }
        .validate()
        .is_err());
        assert!(EquilibriumKind::from_name("coin_toss") == Some(EquilibriumKind::CoinToss));
    }
}
