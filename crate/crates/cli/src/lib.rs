//! Argument parsing, verb dispatch and serialization for the `midcost` binary.
//!
//! Every verb produces a [`Report`] that renders either as one JSON object
//! `{command, params, results, diagnostics, version}` or as CSV with a fixed
//! header per verb (see [`csv_header`]).

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use midcost::equilibria::{enumerate_equilibria, Equilibrium, EquilibriumKind, SolverConfig};
use midcost::oracle::{
    pivot_gain_bruteforce, simulate_election, OracleConfig, PoissonMeans, Side, WinStats,
};
use midcost::pivot::{pivot_closed, thresholds_with, ElectorateParams, StrategyPair, ThresholdSet};
use midcost::regime::{
    classify, geometric_grid, sweep_bounds, RegimeReport, SweepSpec, SweepTable, ThresholdKind,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "midcost",
    version,
    about = "Equilibria and voting-cost regimes of the costly-voting Poisson game"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The four cost thresholds at one parameter point.
    Thresholds {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Every type-symmetric equilibrium at cost `c`.
    Solve {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Regime of cost `c`, with the equilibria present.
    Classify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Thresholds over a geometric grid of population sizes.
    Sweep(SweepArgs),
    /// Closed-form pivot gains against the truncated-sum oracle.
    Verify(VerifyArgs),
    /// Monte Carlo elections at given turnout rates or at a solved equilibrium.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ModelArgs {
    /// Expected population size.
    #[arg(long, allow_negative_numbers = true)]
    pub n: f64,
    /// Share of partisans.
    #[arg(long, allow_negative_numbers = true)]
    pub p: f64,
    /// Share of A-supporters.
    #[arg(long, allow_negative_numbers = true)]
    pub pa: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    #[default]
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write results here (atomically) instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1e-12)]
    pub z_rel_tol: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub eps_cmp: f64,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            z_rel_tol: self.z_rel_tol,
            max_iter: self.max_iter,
            eps_cmp: self.eps_cmp,
            ..SolverConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    #[value(name = "ct_upper")]
    CtUpper,
    #[value(name = "ct_lower")]
    CtLower,
    #[value(name = "pa_lower")]
    PaLower,
    #[value(name = "ps_lower")]
    PsLower,
}

impl From<Quantity> for ThresholdKind {
    fn from(q: Quantity) -> Self {
        match q {
            Quantity::CtUpper => ThresholdKind::CtUpper,
            Quantity::CtLower => ThresholdKind::CtLower,
            Quantity::PaLower => ThresholdKind::PaLower,
            Quantity::PsLower => ThresholdKind::PsLower,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Share of partisans.
    #[arg(long, allow_negative_numbers = true)]
    pub p: f64,
    /// Share of A-supporters.
    #[arg(long, allow_negative_numbers = true)]
    pub pa: f64,
    #[arg(long, default_value_t = 100.0, allow_negative_numbers = true)]
    pub n_min: f64,
    #[arg(long, default_value_t = 100_000.0)]
    pub n_max: f64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Comma-separated subset of the four thresholds.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Quantity::CtUpper, Quantity::CtLower, Quantity::PaLower, Quantity::PsLower])]
    pub quantities: Vec<Quantity>,
    /// Emit natural logarithms (`ln_<name>` columns); the lower thresholds
    /// underflow at large N otherwise.
    #[arg(long)]
    pub log: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Largest accepted |closed form - oracle|.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-13)]
    pub tail_eps: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    #[value(name = "coin_toss")]
    CoinToss,
    #[value(name = "partial_absenteeism")]
    PartialAbsenteeism,
    #[value(name = "no_queue")]
    NoQueue,
    #[value(name = "partial_saturation")]
    PartialSaturation,
    #[value(name = "all_swipe")]
    AllSwipe,
}

impl From<KindArg> for EquilibriumKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::CoinToss => EquilibriumKind::CoinToss,
            KindArg::PartialAbsenteeism => EquilibriumKind::PartialAbsenteeism,
            KindArg::NoQueue => EquilibriumKind::NoQueue,
            KindArg::PartialSaturation => EquilibriumKind::PartialSaturation,
            KindArg::AllSwipe => EquilibriumKind::AllSwipe,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(
        long,
        requires = "alpha_b",
        conflicts_with = "equilibrium",
        allow_negative_numbers = true
    )]
    pub alpha_a: Option<f64>,
    #[arg(long, requires = "alpha_a", allow_negative_numbers = true)]
    pub alpha_b: Option<f64>,
    /// Simulate at the first solved equilibrium of this kind (needs --c).
    #[arg(long, value_enum, requires = "c")]
    pub equilibrium: Option<KindArg>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0x5eed_cafe)]
    pub seed: u64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] midcost::Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(midcost::Error::NonConvergence { .. }) => 3,
            CliError::Core(_) | CliError::Usage(_) => 2,
            CliError::Io { .. } => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(midcost::Error::NonConvergence { .. }) => "non_convergence",
            CliError::Core(midcost::Error::Resource { .. }) => "resource",
            CliError::Core(_) | CliError::Usage(_) => "validation",
            CliError::Io { .. } => "io",
        }
    }
}

/// Output of one verb, ready to render.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub results: Value,
    pub diagnostics: Vec<String>,
    pub csv_header: Vec<String>,
    pub csv_rows: Vec<Vec<String>>,
    /// 0, or 4 when a verification tolerance was breached.
    pub status: u8,
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    params: &'a Value,
    results: &'a Value,
    diagnostics: &'a [String],
    version: &'a str,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let env = Envelope {
                    command: self.command,
                    params: &self.params,
                    results: &self.results,
                    diagnostics: &self.diagnostics,
                    version: VERSION,
                };
                let mut s = serde_json::to_string_pretty(&env).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = self.csv_header.join(",");
                s.push('\n');
                for row in &self.csv_rows {
                    s.push_str(&row.join(","));
                    s.push('\n');
                }
                s
            }
        }
    }
}

/// Error object for JSON mode.
pub fn render_error(command: &str, err: &CliError) -> String {
    let v = json!({
        "command": command,
        "error": { "kind": err.kind(), "exit_code": err.exit_code(), "message": err.to_string() },
        "version": VERSION,
    });
    format!(
        "{}\n",
        serde_json::to_string_pretty(&v).expect("JSON values serialize")
    )
}

/// 17 significant digits, no locale.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Documented CSV columns for each verb (sweep's depend on its flags).
pub fn csv_header(command: &str) -> &'static [&'static str] {
    match command {
        "thresholds" => &[
            "N",
            "p",
            "p_a",
            "ct_upper",
            "ct_lower",
            "pa_lower",
            "ps_lower",
            "ln_ct_upper",
            "ln_ct_lower",
            "ln_pa_lower",
            "ln_ps_lower",
            "ct_admissible",
        ],
        "solve" => &[
            "kind",
            "alpha_a",
            "alpha_b",
            "z_root",
            "residual",
            "winner",
            "iterations",
            "coincides_with",
        ],
        "classify" => &[
            "c",
            "case_index",
            "on_boundary",
            "avoid",
            "consistent",
            "ct_upper",
            "ct_lower",
            "pa_lower",
            "ps_lower",
            "equilibria",
        ],
        "verify" => &[
            "N",
            "p",
            "p_a",
            "alpha_a",
            "alpha_b",
            "side",
            "closed",
            "bruteforce",
            "abs_diff",
        ],
        "simulate" => &[
            "alpha_a",
            "alpha_b",
            "trials",
            "p_a_wins",
            "p_tie",
            "p_b_wins",
            "se_a_wins",
            "p_a_elected",
            "se_a_elected",
            "pivot_a",
            "se_pivot_a",
            "pivot_b",
            "se_pivot_b",
            "pool_a",
            "pool_b",
        ],
        _ => &[],
    }
}

fn header(command: &str) -> Vec<String> {
    csv_header(command).iter().map(|s| s.to_string()).collect()
}

fn model(m: &ModelArgs) -> Result<ElectorateParams, CliError> {
    Ok(ElectorateParams::new(m.n, m.p, m.pa)?)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn model_params(m: &ModelArgs) -> Value {
    json!({ "n": m.n, "p": m.p, "p_a": m.pa })
}

fn kind_list(kinds: &[EquilibriumKind]) -> String {
    kinds.iter().map(|k| k.name()).collect::<Vec<_>>().join(";")
}

pub fn thresholds_report(m: &ModelArgs) -> Result<Report, CliError> {
    let pr = model(m)?;
    let t: ThresholdSet = thresholds_with(&Default::default(), &pr)?;
    let mut row = vec![fmt_f64(pr.n), fmt_f64(pr.p), fmt_f64(pr.p_a)];
    row.extend(
        t.as_array()
            .iter()
            .chain(t.ln_array().iter())
            .map(|&v| fmt_f64(v)),
    );
    row.push(t.ct_admissible.to_string());
    let mut diagnostics = Vec::new();
    if !t.ct_admissible {
        diagnostics.push("A partisans outnumber all B-supporters: no coin-toss interval".into());
    }
    if !t.strictly_ordered() {
        diagnostics.push("thresholds are not strictly ordered at this N".into());
    }
    Ok(Report {
        command: "thresholds",
        params: model_params(m),
        results: to_value(&t),
        diagnostics,
        csv_header: header("thresholds"),
        csv_rows: vec![row],
        status: 0,
    })
}

fn equilibrium_row(e: &Equilibrium) -> Vec<String> {
    vec![
        e.kind.name().to_string(),
        fmt_f64(e.strategies.alpha_a),
        fmt_f64(e.strategies.alpha_b),
        fmt_opt(e.z_root),
        fmt_f64(e.residual),
        match e.winner {
            midcost::Winner::A => "a".into(),
            midcost::Winner::TieInExpectation => "tie_in_expectation".into(),
        },
        e.iterations.to_string(),
        kind_list(&e.coincides_with),
    ]
}

pub fn solve_report(m: &ModelArgs, c: f64, solver: &SolverArgs) -> Result<Report, CliError> {
    let pr = model(m)?;
    let eqs = enumerate_equilibria(&pr, c, &solver.config())?;
    let diagnostics = eqs
        .iter()
        .filter(|e| !e.coincides_with.is_empty())
        .map(|e| {
            format!(
                "{} profile also produced by {}",
                e.kind.name(),
                kind_list(&e.coincides_with)
            )
        })
        .collect();
    let mut params = model_params(m);
    params["c"] = json!(c);
    Ok(Report {
        command: "solve",
        params,
        results: to_value(&eqs),
        diagnostics,
        csv_header: header("solve"),
        csv_rows: eqs.iter().map(equilibrium_row).collect(),
        status: 0,
    })
}

pub fn classify_report(m: &ModelArgs, c: f64, solver: &SolverArgs) -> Result<Report, CliError> {
    let pr = model(m)?;
    let r: RegimeReport = classify(&pr, c, &solver.config())?;
    let t = r.thresholds;
    let row = vec![
        fmt_f64(c),
        r.case_index.to_string(),
        r.on_boundary.to_string(),
        r.avoid.to_string(),
        r.consistent.to_string(),
        fmt_f64(t.ct_upper),
        fmt_f64(t.ct_lower),
        fmt_f64(t.pa_lower),
        fmt_f64(t.ps_lower),
        kind_list(&r.equilibria.iter().map(|e| e.kind).collect::<Vec<_>>()),
    ];
    let mut params = model_params(m);
    params["c"] = json!(c);
    Ok(Report {
        command: "classify",
        params,
        results: to_value(&r),
        diagnostics: r.notes.clone(),
        csv_header: header("classify"),
        csv_rows: vec![row],
        status: 0,
    })
}

pub fn sweep_report(a: &SweepArgs) -> Result<Report, CliError> {
    let spec = SweepSpec {
        p: a.p,
        p_a: a.pa,
        n_grid: geometric_grid(a.n_min, a.n_max, a.points)?,
        quantities: a.quantities.iter().map(|&q| q.into()).collect(),
    };
    let tab: SweepTable = sweep_bounds(&spec)?;
    let prefix = if a.log { "ln_" } else { "" };
    let mut csv_header = vec!["N".to_string()];
    csv_header.extend(
        tab.quantities
            .iter()
            .map(|q| format!("{prefix}{}", q.name())),
    );
    let cols = if a.log { &tab.ln_values } else { &tab.values };
    let csv_rows = tab
        .n
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            std::iter::once(fmt_f64(n))
                .chain(cols.iter().map(|c| fmt_f64(c[i])))
                .collect()
        })
        .collect();
    let mut diagnostics = Vec::new();
    for (q, &onset) in tab.quantities.iter().zip(&tab.onset) {
        diagnostics.push(format!(
            "{} strictly decreasing from N = {}",
            q.name(),
            fmt_f64(tab.n[onset])
        ));
        if !a.log && tab.values[q_index(&tab, *q)].contains(&0.0) {
            diagnostics.push(format!(
                "{} underflows to 0 on part of the grid; use --log",
                q.name()
            ));
        }
    }
    if tab.ct_admissible.iter().any(|&ok| !ok) {
        diagnostics
            .push("coin-toss interval absent (A partisans outnumber all B-supporters)".into());
    }
    Ok(Report {
        command: "sweep",
        params: json!({
            "p": a.p, "p_a": a.pa, "n_min": a.n_min, "n_max": a.n_max, "points": a.points,
            "quantities": tab.quantities.iter().map(|q| q.name()).collect::<Vec<_>>(), "log": a.log,
        }),
        results: to_value(&tab),
        diagnostics,
        csv_header,
        csv_rows,
        status: 0,
    })
}

fn q_index(tab: &SweepTable, q: ThresholdKind) -> usize {
    tab.quantities
        .iter()
        .position(|&k| k == q)
        .expect("quantity present")
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct VerifyRow {
    pub n: f64,
    pub p: f64,
    pub p_a: f64,
    pub alpha_a: f64,
    pub alpha_b: f64,
    pub side: Side,
    pub closed: f64,
    pub bruteforce: f64,
    pub abs_diff: f64,
}

/// The standard verification grid: N in {5, 10, 20, 40}, p in
/// {0.1, 0.3, 0.5}, p_a in {0.55, 0.7, 0.9}, both alphas in quarter steps.
pub fn verify_report(a: &VerifyArgs) -> Result<Report, CliError> {
    if a.tol.is_nan() || a.tol <= 0.0 {
        return Err(CliError::Usage(format!(
            "--tol must be positive, got {}",
            a.tol
        )));
    }
    let oc = OracleConfig {
        tail_eps: a.tail_eps,
        ..OracleConfig::default()
    };
    let ev = midcost::EvalConfig::default();
    let alphas = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut rows = Vec::new();
    for n in [5.0, 10.0, 20.0, 40.0] {
        for p in [0.1, 0.3, 0.5] {
            for p_a in [0.55, 0.7, 0.9] {
                let pr = ElectorateParams::new(n, p, p_a)?;
                for &alpha_a in &alphas {
                    for &alpha_b in &alphas {
                        let s = StrategyPair::new(alpha_a, alpha_b)?;
                        let means = PoissonMeans::from_strategy(&pr, &s);
                        for side in [Side::A, Side::B] {
                            let closed = pivot_closed(&ev, &pr, &s, side)?;
                            let brute = pivot_gain_bruteforce(&means, side, &oc)?.value;
                            rows.push(VerifyRow {
                                n,
                                p,
                                p_a,
                                alpha_a,
                                alpha_b,
                                side,
                                closed,
                                bruteforce: brute,
                                abs_diff: (closed - brute).abs(),
                            });
                        }
                    }
                }
            }
        }
    }
    let worst = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    let pass = worst < a.tol;
    let csv_rows = rows
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r.n),
                fmt_f64(r.p),
                fmt_f64(r.p_a),
                fmt_f64(r.alpha_a),
                fmt_f64(r.alpha_b),
                format!("{:?}", r.side),
                fmt_f64(r.closed),
                fmt_f64(r.bruteforce),
                fmt_f64(r.abs_diff),
            ]
        })
        .collect();
    Ok(Report {
        command: "verify",
        params: json!({ "tol": a.tol, "tail_eps": a.tail_eps }),
        results: json!({ "max_abs_diff": worst, "pass": pass, "rows": to_value(&rows) }),
        diagnostics: vec![format!(
            "{} comparisons, max |closed - oracle| = {}, tolerance {}: {}",
            rows.len(),
            fmt_f64(worst),
            fmt_f64(a.tol),
            if pass { "pass" } else { "FAIL" }
        )],
        csv_header: header("verify"),
        csv_rows,
        status: if pass { 0 } else { 4 },
    })
}

pub fn simulate_report(a: &SimulateArgs) -> Result<Report, CliError> {
    let pr = model(&a.model)?;
    let mut diagnostics = Vec::new();
    let (s, source) = match (a.alpha_a, a.alpha_b, a.equilibrium) {
        (Some(aa), Some(ab), None) => (StrategyPair::new(aa, ab)?, Value::Null),
        (None, None, Some(kind)) => {
            let c =
                a.c.ok_or_else(|| CliError::Usage("--equilibrium needs --c".into()))?;
            let kind: EquilibriumKind = kind.into();
            let eqs = enumerate_equilibria(&pr, c, &a.solver.config())?;
            let e = eqs
                .into_iter()
                .find(|e| e.kind == kind || e.coincides_with.contains(&kind))
                .ok_or_else(|| {
                    CliError::Usage(format!("no {} equilibrium at c = {c}", kind.name()))
                })?;
            diagnostics.push(format!(
                "simulating the {} equilibrium at c = {}",
                kind.name(),
                fmt_f64(c)
            ));
            (e.strategies, to_value(&e))
        }
        _ => {
            return Err(CliError::Usage(
                "give either --alpha-a and --alpha-b, or --equilibrium with --c".into(),
            ))
        }
    };
    let oc = OracleConfig {
        trials: a.trials,
        seed: a.seed,
        ..OracleConfig::default()
    };
    let w: WinStats = simulate_election(&pr, &s, &oc)?;
    diagnostics.push(format!(
        "non-partisan pools rounded to {} (A) and {} (B)",
        w.nonpartisan_sizes[0], w.nonpartisan_sizes[1]
    ));
    let row = vec![
        fmt_f64(s.alpha_a),
        fmt_f64(s.alpha_b),
        w.trials_used.to_string(),
        fmt_f64(w.p_a_wins),
        fmt_f64(w.p_tie),
        fmt_f64(w.p_b_wins),
        fmt_f64(w.se_a_wins),
        fmt_f64(w.p_a_elected),
        fmt_f64(w.se_a_elected),
        fmt_f64(w.pivot_a),
        fmt_f64(w.se_pivot_a),
        fmt_f64(w.pivot_b),
        fmt_f64(w.se_pivot_b),
        w.nonpartisan_sizes[0].to_string(),
        w.nonpartisan_sizes[1].to_string(),
    ];
    let mut params = model_params(&a.model);
    params["alpha_a"] = json!(s.alpha_a);
    params["alpha_b"] = json!(s.alpha_b);
    params["trials"] = json!(a.trials);
    params["seed"] = json!(a.seed);
    if let Some(c) = a.c {
        params["c"] = json!(c);
    }
    Ok(Report {
        command: "simulate",
        params,
        results: json!({ "stats": to_value(&w), "equilibrium": source }),
        diagnostics,
        csv_header: header("simulate"),
        csv_rows: vec![row],
        status: 0,
    })
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Thresholds { .. } => "thresholds",
            Command::Solve { .. } => "solve",
            Command::Classify { .. } => "classify",
            Command::Sweep(_) => "sweep",
            Command::Verify(_) => "verify",
            Command::Simulate(_) => "simulate",
        }
    }

    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Thresholds { output, .. }
            | Command::Solve { output, .. }
            | Command::Classify { output, .. } => output,
            Command::Sweep(a) => &a.output,
            Command::Verify(a) => &a.output,
            Command::Simulate(a) => &a.output,
        }
    }
}

pub fn run(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Thresholds { model, .. } => thresholds_report(model),
        Command::Solve {
            model, c, solver, ..
        } => solve_report(model, *c, solver),
        Command::Classify {
            model, c, solver, ..
        } => classify_report(model, *c, solver),
        Command::Sweep(a) => sweep_report(a),
        Command::Verify(a) => verify_report(a),
        Command::Simulate(a) => simulate_report(a),
    }
}

/// Writes `contents` to `path` through a sibling temp file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Usage(format!("not a file path: {}", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    let _ = write!(DisplayTmp(&mut tmp_name), ".{}.tmp", std::process::id());
    let tmp = dir.join(tmp_name);
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(io)
}

struct DisplayTmp<'a>(&'a mut std::ffi::OsString);

impl std::fmt::Write for DisplayTmp<'_> {
    fn write_str(&mut self, s: &str) -> std::fmt::Result {
        self.0.push(s);
        Ok(())
    }
}
