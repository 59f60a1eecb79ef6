//! Cost regimes, the coin-toss interval, cost recommendation and threshold
//! sweeps over the population size.
//!
//! For large `N` the four thresholds satisfy
//! `ct_upper > ct_lower > pa_lower > ps_lower`, and the cost falls in one of
//! five regimes:
//!
//! | case | cost range                      | equilibria                          |
//! |------|---------------------------------|-------------------------------------|
//! | 1    | `c > ct_upper`                  | no-queue, 0 to 2 partial absenteeism |
//! | 2    | `ct_lower <= c <= ct_upper`     | coin-toss, partial absenteeism, no-queue |
//! | 3    | `pa_lower <= c < ct_lower`      | partial absenteeism, partial saturation, no-queue |
//! | 4    | `ps_lower <= c < pa_lower`      | partial saturation                  |
//! | 5    | `c < ps_lower`                  | all-swipe                           |
//!
//! Case 0 marks a pre-asymptotic point where that ordering, or the shape of
//! `h` it relies on, does not hold yet; only the enumerated list is reported.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibria::{enumerate_equilibria, Equilibrium, EquilibriumKind, SolverConfig};
use crate::error::{Error, Result};
use crate::pivot::{self, ElectorateParams, ThresholdSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub c: f64,
    /// Regime 1..=5, or 0 when pre-asymptotic.
    pub case_index: u8,
    /// `c` is within `eps_cmp` of a threshold; the lower-numbered case won.
    pub on_boundary: bool,
    pub thresholds: ThresholdSet,
    pub equilibria: Vec<Equilibrium>,
    /// A coin-toss equilibrium exists at this cost.
    pub avoid: bool,
    /// Kinds the case predicts (absent for case 0). Case 1 lists
    /// partial absenteeism as possible, not required.
    pub predicted: Option<Vec<EquilibriumKind>>,
    /// Enumerated kinds agree with the prediction.
    pub consistent: bool,
    pub notes: Vec<String>,
}

impl RegimeReport {
    /// Distinct kinds among the enumerated equilibria.
    pub fn realized_kinds(&self) -> Vec<EquilibriumKind> {
        let mut k: Vec<_> = self.equilibria.iter().map(|e| e.kind).collect();
        k.dedup();
        k
    }
}

/// Kinds predicted for each case, in kind order.
pub fn predicted_kinds(case_index: u8) -> Option<Vec<EquilibriumKind>> {
    use EquilibriumKind::*;
    match case_index {
        1 => Some(vec![PartialAbsenteeism, NoQueue]),
        2 => Some(vec![CoinToss, PartialAbsenteeism, NoQueue]),
        3 => Some(vec![PartialAbsenteeism, NoQueue, PartialSaturation]),
        4 => Some(vec![PartialSaturation]),
        5 => Some(vec![AllSwipe]),
        _ => None,
    }
}

/// The summary ordering and the interior peak of `h(x_a, .)` both hold.
pub fn is_asymptotic(params: &ElectorateParams, t: &ThresholdSet) -> bool {
    t.ct_admissible && params.x_a() > std::f64::consts::SQRT_2 && t.strictly_ordered()
}

fn case_of(c: f64, t: &ThresholdSet, cfg: &SolverConfig) -> (u8, bool) {
    let ln_c = c.ln();
    let eps = cfg.eps_cmp;
    let near = |ln_b: f64| (ln_c - ln_b).abs() <= eps;
    let on_boundary = t.ln_array().iter().any(|&b| near(b));
    let case = if ln_c >= t.ln_ct_upper - eps {
        1
    } else if ln_c >= t.ln_ct_lower - eps {
        2
    } else if ln_c >= t.ln_pa_lower - eps {
        3
    } else if ln_c >= t.ln_ps_lower - eps {
        4
    } else {
        5
    };
    (case, on_boundary)
}

/// Places `c` among the thresholds, enumerates the equilibria and checks
/// the two against each other. Mismatches are reported, never repaired.
pub fn classify(params: &ElectorateParams, c: f64, cfg: &SolverConfig) -> Result<RegimeReport> {
    params.validate()?;
    cfg.validate()?;
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::domain("classify", "c", c));
    }
    let thresholds = pivot::thresholds_with(&cfg.eval, params)?;
    let equilibria = enumerate_equilibria(params, c, cfg)?;
    let avoid = equilibria
        .iter()
        .any(|e| e.kind == EquilibriumKind::CoinToss);
    let mut notes = Vec::new();

    let mut report = RegimeReport {
        c,
        case_index: 0,
        on_boundary: false,
        thresholds,
        equilibria,
        avoid,
        predicted: None,
        consistent: true,
        notes: Vec::new(),
    };

    if !is_asymptotic(params, &thresholds) {
        if !thresholds.ct_admissible {
            notes.push("A partisans outnumber all B-supporters: no coin-toss interval".to_string());
        }
        if params.x_a() <= std::f64::consts::SQRT_2 {
            notes.push("x_a <= sqrt(2): h(x_a, .) is decreasing".to_string());
        }
        if !thresholds.strictly_ordered() {
            notes.push("thresholds not strictly ordered at this N".to_string());
        }
        notes.push(
            "pre-asymptotic point: equilibria enumerated without a regime prediction".to_string(),
        );
        report.notes = notes;
        return Ok(report);
    }

    let (case, on_boundary) = case_of(c, &thresholds, cfg);
    report.case_index = case;
    report.on_boundary = on_boundary;
    if on_boundary {
        notes.push(format!(
            "cost within eps_cmp of a threshold; assigned to case {case}"
        ));
    }
    let predicted = predicted_kinds(case).expect("case in 1..=5");
    let realized = report.realized_kinds();
    let consistent = if case == 1 {
        let pa = report
            .equilibria
            .iter()
            .filter(|e| e.kind == EquilibriumKind::PartialAbsenteeism)
            .count();
        notes.push(format!("{pa} partial absenteeism equilibria"));
        realized.contains(&EquilibriumKind::NoQueue)
            && realized.iter().all(|k| predicted.contains(k))
            && pa <= 2
    } else {
        realized == predicted
    };
    if !consistent {
        notes.push(format!(
            "mismatch: case {case} predicts {:?}, enumeration found {:?}",
            predicted, realized
        ));
    }
    if avoid != (case == 2) {
        notes.push(format!(
            "coin-toss presence ({avoid}) disagrees with case {case}"
        ));
    }
    for e in &report.equilibria {
        if !e.coincides_with.is_empty() {
            notes.push(format!(
                "{:?} profile also produced by {:?}",
                e.kind, e.coincides_with
            ));
        }
    }
    report.predicted = Some(predicted);
    report.consistent = consistent;
    report.notes = notes;
    Ok(report)
}

/// `(ct_lower, ct_upper)`, or `None` when A partisans outnumber all
/// B-supporters.
pub fn coin_toss_interval(params: &ElectorateParams) -> Result<Option<(f64, f64)>> {
    let t = pivot::thresholds(params)?;
    Ok(t.ct_admissible.then_some((t.ct_lower, t.ct_upper)))
}

/// Smallest cost at least `c_min` that admits no coin-toss equilibrium.
pub fn recommend_cost(params: &ElectorateParams, c_min: f64, cfg: &SolverConfig) -> Result<f64> {
    if !(c_min.is_finite() && c_min > 0.0) {
        return Err(Error::domain("recommend_cost", "c_min", c_min));
    }
    Ok(match coin_toss_interval(params)? {
        Some((lo, hi)) if cfg.ge(c_min, lo) && cfg.le(c_min, hi) => hi + cfg.eps_cmp,
        _ => c_min,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdKind {
    CtUpper,
    CtLower,
    PaLower,
    PsLower,
}

impl ThresholdKind {
    pub const ALL: [ThresholdKind; 4] = [
        ThresholdKind::CtUpper,
        ThresholdKind::CtLower,
        ThresholdKind::PaLower,
        ThresholdKind::PsLower,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ThresholdKind::CtUpper => "ct_upper",
            ThresholdKind::CtLower => "ct_lower",
            ThresholdKind::PaLower => "pa_lower",
            ThresholdKind::PsLower => "ps_lower",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub p: f64,
    pub p_a: f64,
    pub n_grid: Vec<f64>,
    pub quantities: Vec<ThresholdKind>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            return Err(Error::InvalidParams("n_grid is empty".into()));
        }
        if self.quantities.is_empty() {
            return Err(Error::InvalidParams("no quantities requested".into()));
        }
        if self.n_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParams(
                "n_grid must be strictly increasing".into(),
            ));
        }
        for &n in &self.n_grid {
            ElectorateParams::new(n, self.p, self.p_a)?;
        }
        Ok(())
    }
}

/// `points` values from `n_min` to `n_max`, evenly spaced in `ln N`.
pub fn geometric_grid(n_min: f64, n_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(n_min > 0.0 && n_max > n_min && n_max.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "need 0 < n_min < n_max, got {n_min}, {n_max}"
        )));
    }
    if points < 2 {
        return Err(Error::InvalidParams("points must be >= 2".into()));
    }
    let (a, b) = (n_min.ln(), n_max.ln());
    let step = (b - a) / (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points).map(|i| (a + step * i as f64).exp()).collect();
    grid[0] = n_min;
    grid[points - 1] = n_max;
    Ok(grid)
}

/// Threshold values on an `N` grid, one column per requested quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub p: f64,
    pub p_a: f64,
    pub n: Vec<f64>,
    pub quantities: Vec<ThresholdKind>,
    /// `values[q][row]`; may underflow to 0 for the lower thresholds.
    pub values: Vec<Vec<f64>>,
    /// Natural logarithms, finite everywhere.
    pub ln_values: Vec<Vec<f64>>,
    /// First row from which each column is strictly decreasing (in log
    /// space) through the end of the grid.
    pub onset: Vec<usize>,
    pub ct_admissible: Vec<bool>,
}

impl SweepTable {
    pub fn column(&self, kind: ThresholdKind) -> Option<&[f64]> {
        let i = self.quantities.iter().position(|&k| k == kind)?;
        Some(&self.values[i])
    }

    pub fn ln_column(&self, kind: ThresholdKind) -> Option<&[f64]> {
        let i = self.quantities.iter().position(|&k| k == kind)?;
        Some(&self.ln_values[i])
    }
}

fn decreasing_onset(col: &[f64]) -> usize {
    let mut onset = col.len().saturating_sub(1);
    while onset > 0 && col[onset] < col[onset - 1] {
        onset -= 1;
    }
    onset
}

pub fn sweep_bounds(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let rows: Vec<ThresholdSet> = spec
        .n_grid
        .par_iter()
        .map(|&n| pivot::thresholds(&ElectorateParams::new(n, spec.p, spec.p_a)?))
        .collect::<Result<_>>()?;
    let mut values = Vec::new();
    let mut ln_values = Vec::new();
    let mut onset = Vec::new();
    for q in &spec.quantities {
        let col: Vec<f64> = rows.iter().map(|t| t.as_array()[q.index()]).collect();
        let ln_col: Vec<f64> = rows.iter().map(|t| t.ln_array()[q.index()]).collect();
        onset.push(decreasing_onset(&ln_col));
        values.push(col);
        ln_values.push(ln_col);
    }
    Ok(SweepTable {
        p: spec.p,
        p_a: spec.p_a,
        n: spec.n_grid.clone(),
        quantities: spec.quantities.clone(),
        values,
        ln_values,
        onset,
        ct_admissible: rows.iter().map(|t| t.ct_admissible).collect(),
    })
}

/// Smallest `N` on a fine geometric grid over `[1, 1e9]` from which every
/// larger grid point is asymptotic (strict ordering, `x_a > sqrt 2`,
/// coin-toss admissible). `None` if the top of the grid is not.
pub fn ordering_onset(p: f64, p_a: f64) -> Result<Option<f64>> {
    let grid = geometric_grid(1.0, 1e9, 721)?;
    let ok: Vec<bool> = grid
        .par_iter()
        .map(|&n| {
            let params = ElectorateParams::new(n, p, p_a)?;
            Ok(is_asymptotic(&params, &pivot::thresholds(&params)?))
        })
        .collect::<Result<_>>()?;
    if !ok[ok.len() - 1] {
        return Ok(None);
    }
    let mut i = ok.len() - 1;
    while i > 0 && ok[i - 1] {
        i -= 1;
    }
    Ok(Some(grid[i]))
}
