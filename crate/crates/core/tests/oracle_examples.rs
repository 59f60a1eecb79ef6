use midcost::equilibria::{solve_coin_toss, SolverConfig};
use midcost::oracle::{
    poisson_environment_pivot, poisson_environment_pivot_means, simulate_election,
    utility_bruteforce, OracleConfig, PoissonMeans, Side,
};
use midcost::pivot::{self, ElectorateParams, StrategyPair};

fn cfg(trials: u64, seed: u64) -> OracleConfig {
    OracleConfig {
        trials,
        seed,
        ..OracleConfig::default()
    }
}

fn poisson_pmf(mean: f64, len: usize) -> Vec<f64> {
    let mut out = vec![(-mean).exp(); len];
    for k in 1..len {
        out[k] = out[k - 1] * mean / k as f64;
    }
    out
}

fn binomial_pmf(n: u64, q: f64) -> Vec<f64> {
    let mut out = vec![0.0; n as usize + 1];
    if q <= 0.0 {
        out[0] = 1.0;
        return out;
    }
    if q >= 1.0 {
        out[n as usize] = 1.0;
        return out;
    }
    out[0] = (n as f64 * (1.0 - q).ln()).exp();
    for k in 1..=n as usize {
        out[k] = out[k - 1] * (n as f64 - k as f64 + 1.0) / k as f64 * q / (1.0 - q);
    }
    out
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact A-side pivot gain when non-partisan turnout is binomial on rounded
/// pools: `1/2 P(A - B in {0, -1})`.
fn binomial_pivot_a(pr: &ElectorateParams, s: &StrategyPair) -> f64 {
    let len = 400;
    let a = convolve(
        &poisson_pmf(pr.x_a(), len),
        &binomial_pmf(pr.m_a().round() as u64, s.alpha_a),
    );
    let b = convolve(
        &poisson_pmf(pr.x_b(), len),
        &binomial_pmf(pr.m_b().round() as u64, s.alpha_b),
    );
    let mut q = 0.0;
    for (m, pa) in a.iter().enumerate() {
        q += pa * b.get(m).copied().unwrap_or(0.0);
        q += pa * b.get(m + 1).copied().unwrap_or(0.0);
    }
    0.5 * q
}

#[test]
fn closed_form_example_matches_bruteforce_utility() {
    let pr = ElectorateParams::new(10.0, 0.3, 0.6).unwrap();
    let s = StrategyPair::new(0.5, 0.5).unwrap();
    let m = PoissonMeans::from_strategy(&pr, &s);
    let c = 0.037;
    let oc = OracleConfig::default();
    let d = utility_bruteforce(Side::A, true, &m, c, &oc).unwrap().value
        - utility_bruteforce(Side::A, false, &m, c, &oc)
            .unwrap()
            .value;
    assert!((d - (pivot::r1_closed(&pr, &s).unwrap() - c)).abs() < 1e-9);
}

#[test]
fn poisson_environment_matches_closed_form() {
    let pr = ElectorateParams::new(50.0, 0.2, 0.6).unwrap();
    let s = StrategyPair::new(0.3, 0.8).unwrap();
    let est = poisson_environment_pivot(&pr, &s, Side::A, &cfg(1_000_000, 11)).unwrap();
    let r1 = pivot::r1_closed(&pr, &s).unwrap();
    assert!((est.mean - r1).abs() < 3.0 * est.se, "{} vs {r1}", est.mean);

    let m = PoissonMeans::new(2.0, 1.0, 1.0, 2.0).unwrap();
    let est = poisson_environment_pivot_means(&m, Side::B, &cfg(1_000_000, 12)).unwrap();
    let r2 = pivot::r2_from_means(&Default::default(), 2.0, 1.0, 1.0, 2.0).unwrap();
    assert!((est.mean - r2).abs() < 3.0 * est.se);
}

#[test]
fn coin_toss_pivots_match_cost_in_perceived_environment() {
    let pr = ElectorateParams::new(200.0, 0.2, 0.6).unwrap();
    let t = pivot::thresholds(&pr).unwrap();
    let c = 0.5 * (t.ct_lower + t.ct_upper);
    let e = solve_coin_toss(&pr, c, &SolverConfig::default())
        .unwrap()
        .unwrap();
    for side in [Side::A, Side::B] {
        let est = poisson_environment_pivot(&pr, &e.strategies, side, &cfg(1_000_000, 13)).unwrap();
        assert!(
            (est.mean - c).abs() < 3.0 * est.se,
            "{side:?}: {} vs {c}",
            est.mean
        );
    }
}

#[test]
fn fixed_population_pivot_matches_binomial_oracle() {
    // Under binomial turnout the pivot gain differs from the Poisson game's
    // value; it must still agree with its own exact convolution.
    let pr = ElectorateParams::new(200.0, 0.2, 0.6).unwrap();
    let t = pivot::thresholds(&pr).unwrap();
    let c = 0.5 * (t.ct_lower + t.ct_upper);
    let e = solve_coin_toss(&pr, c, &SolverConfig::default())
        .unwrap()
        .unwrap();
    let w = simulate_election(&pr, &e.strategies, &cfg(1_000_000, 14)).unwrap();
    let exact = binomial_pivot_a(&pr, &e.strategies);
    assert!(
        (w.pivot_a - exact).abs() < 3.0 * w.se_pivot_a,
        "{} vs {exact}",
        w.pivot_a
    );
    assert!(
        (exact - c).abs() > 3.0 * w.se_pivot_a,
        "binomial and Poisson pivots should differ here"
    );

    let pools = [pr.m_a().round(), pr.m_b().round()];
    let alphas = [e.strategies.alpha_a, e.strategies.alpha_b];
    for k in 0..2 {
        let mean = pools[k] * alphas[k];
        let var = mean * (1.0 - alphas[k]);
        assert!((w.turnout_mean[k] - mean).abs() < 4.0 * (var / 1e6).sqrt());
        assert!((w.turnout_var[k] / var - 1.0).abs() < 0.02);
    }
}

#[test]
fn all_swipe_turnout_is_deterministic() {
    let pr = ElectorateParams::new(2000.0, 0.2, 0.6).unwrap();
    let s = StrategyPair::new(1.0, 1.0).unwrap();
    let w = simulate_election(&pr, &s, &cfg(100_000, 15)).unwrap();
    assert_eq!(w.turnout_var, [0.0, 0.0]);
    assert_eq!(w.nonpartisan_sizes, [960, 640]);
    assert_eq!(w.p_a_wins, 1.0);
}
