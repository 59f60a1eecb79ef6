use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use midcost::equilibria::{
    enumerate_equilibria, solve_partial_absenteeism, Equilibrium, EquilibriumKind, SolverConfig,
    Winner,
};
use midcost::oracle::{utility_bruteforce, OracleConfig, PoissonMeans, Side};
use midcost::pivot::{self, ElectorateParams};
use midcost::regime::classify;

fn gains(pr: &ElectorateParams, e: &Equilibrium) -> (f64, f64) {
    (
        pivot::r1_closed(pr, &e.strategies).unwrap(),
        pivot::r2_closed(pr, &e.strategies).unwrap(),
    )
}

/// Indifference and border conditions, relative to `c`.
fn check(pr: &ElectorateParams, c: f64, e: &Equilibrium) {
    let (r1, r2) = gains(pr, e);
    let tol = 1e-8 * c;
    let s = e.strategies;
    match e.kind {
        EquilibriumKind::CoinToss => {
            assert!((r1 - c).abs() < tol && (r2 - c).abs() < tol);
            assert_eq!(e.winner, Winner::TieInExpectation);
            let (u, v) = pivot::expected_votes(pr, &s);
            assert!((u - v).abs() <= 1e-9 * u.max(v));
        }
        EquilibriumKind::PartialAbsenteeism => {
            assert_eq!(s.alpha_a, 0.0);
            if s.alpha_b < 1.0 {
                assert!((r2 - c).abs() < tol, "r2={r2} c={c}");
            } else {
                assert!(r2 >= c - tol);
            }
            assert!(r1 <= c + tol);
        }
        EquilibriumKind::PartialSaturation => {
            assert_eq!(s.alpha_b, 1.0);
            assert!((r1 - c).abs() < tol, "r1={r1} c={c}");
            assert!(r2 >= c - tol);
        }
        EquilibriumKind::NoQueue => assert!(r1.max(r2) <= c + tol),
        EquilibriumKind::AllSwipe => assert!(r1.min(r2) >= c - tol),
    }
    if e.kind != EquilibriumKind::CoinToss {
        assert_eq!(e.winner, Winner::A);
        assert!(pivot::expected_margin(pr, &s) > 0.0);
    }
    assert!(e.residual <= tol, "{:?} residual {}", e.kind, e.residual);
}

#[test]
fn random_equilibria_satisfy_conditions() {
    let cfg = SolverConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut seen = [0usize; 5];
    for _ in 0..600 {
        let n = rng.random_range(2f64.ln()..1e5f64.ln()).exp();
        let p = rng.random_range(0.02..0.95);
        let p_a = rng.random_range(0.51..0.97);
        let pr = ElectorateParams::new(n, p, p_a).unwrap();
        let c = rng.random_range(-30f64..0.5f64.ln()).exp();
        let eqs = enumerate_equilibria(&pr, c, &cfg).unwrap();
        assert!(!eqs.is_empty(), "no equilibrium at {pr:?} c={c}");
        let ct = eqs
            .iter()
            .filter(|e| e.kind == EquilibriumKind::CoinToss)
            .count();
        let pa = solve_partial_absenteeism(&pr, c, &cfg).unwrap().len();
        assert!(ct <= 1 && pa <= 2, "ct={ct} pa={pa}");
        for e in &eqs {
            check(&pr, c, e);
            seen[e.kind as usize] += 1;
        }
    }
    assert!(seen.iter().all(|&k| k > 0), "{seen:?}");
}

#[test]
fn best_responses_at_desk_scale() {
    let cfg = SolverConfig::default();
    let oc = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..40 {
        let n = rng.random_range(5.0..200.0);
        let p = rng.random_range(0.05..0.6);
        let p_a = rng.random_range(0.52..0.9);
        let pr = ElectorateParams::new(n, p, p_a).unwrap();
        let c = rng.random_range(-12f64..0.45f64.ln()).exp();
        for e in enumerate_equilibria(&pr, c, &cfg).unwrap() {
            let s = e.strategies;
            let m = PoissonMeans::from_strategy(&pr, &s);
            for (side, alpha) in [(Side::A, s.alpha_a), (Side::B, s.alpha_b)] {
                let gain = utility_bruteforce(side, true, &m, c, &oc).unwrap().value
                    - utility_bruteforce(side, false, &m, c, &oc).unwrap().value;
                let dev = if alpha <= 0.0 {
                    gain
                } else if alpha >= 1.0 {
                    -gain
                } else {
                    gain.abs()
                };
                assert!(dev <= 1e-8, "{:?} {side:?} at {pr:?} c={c}: {dev}", e.kind);
            }
        }
    }
}

#[test]
fn classify_threshold_ordering_points() {
    for n in [2000.0, 5000.0, 1e4] {
        let pr = ElectorateParams::new(n, 0.2, 0.6).unwrap();
        let t = pivot::thresholds(&pr).unwrap();
        assert!(t.ct_upper > t.ct_lower && t.ct_lower > t.pa_lower && t.pa_lower > t.ps_lower);
        let r = classify(
            &pr,
            0.5 * (t.ct_upper + t.ct_lower),
            &SolverConfig::default(),
        )
        .unwrap();
        assert!(r.avoid && r.case_index == 2);
    }
}
