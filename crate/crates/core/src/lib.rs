//! Type-symmetric equilibria of the costly-voting Poisson game.
//!
//! Two alternatives `A` (the ex-ante favourite, `p_a > 1/2`) and `B` compete.
//! A share `p` of an electorate of expected size `N` are partisans who always
//! vote; the rest vote only if their pivot gain covers the voting cost `c`.
//! The crate evaluates the pivot gains in closed form, solves for every
//! type-symmetric equilibrium, classifies the cost into one of five regimes
//! and checks all of it against brute-force sums and Monte Carlo simulation.
//!
//! * [`special_fn`] - `0F1`, scaled modified Bessel functions, and the
//!   threshold functions `g` and `h`.
//! * [`pivot`] - closed-form pivot gains, the expected-winner predicate and
//!   the four cost thresholds.
//! * [`oracle`] - truncated Poisson sums and seeded Monte Carlo.
//! * [`equilibria`] - root-finding solvers for the five equilibrium kinds.
//! * [`regime`] - cost-regime classification, the coin-toss interval to
//!   avoid, and threshold sweeps over `N`.

pub mod equilibria;
pub mod error;
pub mod oracle;
pub mod pivot;
pub mod regime;
mod roots;
pub mod special_fn;

pub use equilibria::{enumerate_equilibria, Equilibrium, EquilibriumKind, SolverConfig, Winner};
pub use error::{Error, Result};
pub use oracle::{OracleConfig, Side, WinStats};
pub use pivot::{ElectorateParams, StrategyPair, ThresholdSet};
pub use regime::{classify, RegimeReport, SweepSpec, SweepTable, ThresholdKind};
pub use special_fn::EvalConfig;
