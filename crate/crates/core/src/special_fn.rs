//! Hypergeometric and modified Bessel functions, and the threshold
//! functions `g` and `h` built from them.
//!
//! Everything that carries a factor `exp(-u - v)` against `I_k(2 sqrt(u v))`
//! is evaluated in the factorised form
//!
//! ```text
//! exp(-u - v) I_k(2 sqrt(uv)) = exp(-(sqrt(u) - sqrt(v))^2) * [exp(-t) I_k(t)],  t = 2 sqrt(uv)
//! ```
//!
//! so that no intermediate leaves the representable range, whatever the
//! population size. The `ln_*` variants return natural logarithms and stay
//! finite even where the linear value underflows.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Evaluation knobs shared by every function in this module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Relative truncation tolerance for power series.
    pub series_rel_tol: f64,
    /// Bessel argument above which the asymptotic expansion replaces the series.
    pub scaled_switch: f64,
    /// Cap on the number of asymptotic-series terms.
    pub asym_max_terms: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            series_rel_tol: 1e-15,
            scaled_switch: 30.0,
            asym_max_terms: 20,
        }
    }
}

const MAX_SERIES_TERMS: usize = 1_000_000;

fn check_nonneg(func: &'static str, arg: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(func, arg, value))
    }
}

fn check_pos(func: &'static str, arg: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(func, arg, value))
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.series_rel_tol > 0.0 && self.series_rel_tol < 1e-6) {
            return Err(Error::InvalidConfig(format!(
                "series_rel_tol must lie in (0, 1e-6), got {}",
                self.series_rel_tol
            )));
        }
        if !(self.scaled_switch > 0.0 && self.scaled_switch.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "scaled_switch must be positive, got {}",
                self.scaled_switch
            )));
        }
        if self.asym_max_terms == 0 {
            return Err(Error::InvalidConfig("asym_max_terms must be >= 1".into()));
        }
        Ok(())
    }

    /// `sum_k z^k / (k! (a)_k)` for `a` in {1, 2}.
    ///
    /// Stops once three consecutive terms fall below `series_rel_tol` times
    /// the running sum.
    fn series_0f1(&self, a: f64, z: f64) -> f64 {
        let mut sum = 1.0;
        let mut term = 1.0;
        let mut small_run = 0;
        for k in 1..MAX_SERIES_TERMS {
            let k = k as f64;
            term *= z / (k * (a + k - 1.0));
            sum += term;
            if term <= self.series_rel_tol * sum {
                small_run += 1;
                if small_run >= 3 {
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        sum
    }

    /// Large-argument expansion of `exp(-t) I_nu(t)` for `nu` in {0, 1},
    /// truncated at the smallest term.
    fn asymptotic_scaled(&self, nu: f64, t: f64) -> f64 {
        let mu = 4.0 * nu * nu;
        let mut term: f64 = 1.0;
        let mut sum = 1.0;
        for k in 1..=self.asym_max_terms {
            let odd = (2 * k - 1) as f64;
            let next = -term * (mu - odd * odd) / (8.0 * k as f64 * t);
            if next.abs() >= term.abs() {
                break;
            }
            term = next;
            sum += term;
        }
        sum / (2.0 * PI * t).sqrt()
    }

    fn scaled_i0_unchecked(&self, t: f64) -> f64 {
        if t <= self.scaled_switch {
            self.series_0f1(1.0, 0.25 * t * t) * (-t).exp()
        } else {
            self.asymptotic_scaled(0.0, t)
        }
    }

    fn scaled_i1_unchecked(&self, t: f64) -> f64 {
        if t <= self.scaled_switch {
            0.5 * t * self.series_0f1(2.0, 0.25 * t * t) * (-t).exp()
        } else {
            self.asymptotic_scaled(1.0, t)
        }
    }

    /// `exp(-t) 0F1(;2, t^2/4)`, finite at `t = 0`.
    fn scaled_f2_unchecked(&self, t: f64) -> f64 {
        if t <= self.scaled_switch {
            self.series_0f1(2.0, 0.25 * t * t) * (-t).exp()
        } else {
            2.0 * self.asymptotic_scaled(1.0, t) / t
        }
    }

    /// `0F1(;1, z) = sum z^k / (k!)^2`.
    pub fn hyp0f1_1(&self, z: f64) -> Result<f64> {
        check_nonneg("hyp0f1_1", "z", z)?;
        let t = 2.0 * z.sqrt();
        if t <= self.scaled_switch {
            Ok(self.series_0f1(1.0, z))
        } else {
            Ok(t.exp() * self.asymptotic_scaled(0.0, t))
        }
    }

    /// `0F1(;2, z) = sum z^k / (k! (k+1)!)`.
    pub fn hyp0f1_2(&self, z: f64) -> Result<f64> {
        check_nonneg("hyp0f1_2", "z", z)?;
        let t = 2.0 * z.sqrt();
        if t <= self.scaled_switch {
            Ok(self.series_0f1(2.0, z))
        } else {
            Ok(t.exp() * 2.0 * self.asymptotic_scaled(1.0, t) / t)
        }
    }

    pub fn bessel_i0(&self, t: f64) -> Result<f64> {
        check_nonneg("bessel_i0", "t", t)?;
        self.hyp0f1_1(0.25 * t * t)
    }

    pub fn bessel_i1(&self, t: f64) -> Result<f64> {
        check_nonneg("bessel_i1", "t", t)?;
        Ok(0.5 * t * self.hyp0f1_2(0.25 * t * t)?)
    }

    /// `exp(-t) I_0(t)`.
    pub fn scaled_i0(&self, t: f64) -> Result<f64> {
        check_nonneg("scaled_i0", "t", t)?;
        Ok(self.scaled_i0_unchecked(t))
    }

    /// `exp(-t) I_1(t)`.
    pub fn scaled_i1(&self, t: f64) -> Result<f64> {
        check_nonneg("scaled_i1", "t", t)?;
        Ok(self.scaled_i1_unchecked(t))
    }

    /// `g(z) = (I_0(z) + I_1(z)) exp(-z)`: equals 1 at the origin and
    /// decreases strictly to 0.
    pub fn g(&self, z: f64) -> Result<f64> {
        check_nonneg("g", "z", z)?;
        Ok(self.scaled_i0_unchecked(z) + self.scaled_i1_unchecked(z))
    }

    pub fn ln_g(&self, z: f64) -> Result<f64> {
        Ok(self.g(z)?.ln())
    }

    /// Returns `(-(sqrt(x) - sqrt(z))^2, t)` with `t = 2 sqrt(xz)`.
    fn split_exponent(x: f64, z: f64) -> (f64, f64) {
        let sx = x.sqrt();
        let sz = z.sqrt();
        let gap = if sx + sz > 0.0 {
            (x - z) / (sx + sz)
        } else {
            0.0
        };
        (-gap * gap, 2.0 * sx * sz)
    }

    /// `(exponent, bracket)` with `h = 0.5 * exp(exponent) * bracket`.
    fn h_parts(&self, x: f64, z: f64) -> (f64, f64) {
        let (expo, t) = Self::split_exponent(x, z);
        let bracket = self.scaled_i0_unchecked(t) + x * self.scaled_f2_unchecked(t);
        (expo, bracket)
    }

    /// `h(x, z) = 1/2 (0F1(;1, xz) + x 0F1(;2, xz)) exp(-x - z)`.
    ///
    /// The B-side pivot gain when A-supporters abstain equals `h(x_a, x_b + y_b)`;
    /// the A-side gain when every B-supporter votes equals `h(N(1-p_a), x_a + y_a)`.
    pub fn h(&self, x: f64, z: f64) -> Result<f64> {
        check_nonneg("h", "x_a", x)?;
        check_nonneg("h", "z", z)?;
        let (expo, bracket) = self.h_parts(x, z);
        Ok(0.5 * expo.exp() * bracket)
    }

    /// Natural logarithm of [`h`](Self::h), finite where `h` underflows.
    pub fn ln_h(&self, x: f64, z: f64) -> Result<f64> {
        check_nonneg("ln_h", "x_a", x)?;
        check_nonneg("ln_h", "z", z)?;
        let (expo, bracket) = self.h_parts(x, z);
        Ok(expo + (0.5 * bracket).ln())
    }

    /// `exp(x + z) * exp(-(sqrt x - sqrt z)^2)`-free part of `i(z)`; same sign
    /// as `i(z)`, never overflows or underflows to a wrong sign.
    pub(crate) fn i_sign_bracket(&self, x: f64, z: f64) -> f64 {
        let w = x * z;
        let t = 2.0 * w.sqrt();
        if w < 0.5 {
            // i(z) = sum_{k>=1} -k (k^2 + k - x^2) / (k! (k+1)!) * w^(k-1) * z
            let mut sum = 0.0;
            let mut base = z / 2.0; // w^(k-1) z / (k! (k+1)!) at k = 1
            for k in 1..60 {
                let kf = k as f64;
                let term = -kf * (kf * kf + kf - x * x) * base;
                sum += term;
                if term.abs() <= 1e-18 * sum.abs() && k > 3 {
                    break;
                }
                base *= w / ((kf + 1.0) * (kf + 2.0));
            }
            sum * (-t).exp()
        } else {
            (x - z) * self.scaled_i0_unchecked(t) - x * self.scaled_f2_unchecked(t)
        }
    }

    /// `i(z) exp(-x - z)` where `i(z) = (x - z) 0F1(;1, xz) - x 0F1'(;1, xz)`.
    ///
    /// `z * dh/dz = i(z) exp(-x - z) / 2`, so the sign of the returned value
    /// is the sign of `dh/dz` for `z > 0`. Only the sign and the zero are
    /// meaningful; the magnitude may underflow when `x` and `z` are far apart.
    pub fn i_sign(&self, x: f64, z: f64) -> Result<f64> {
        check_pos("i_sign", "x_a", x)?;
        check_nonneg("i_sign", "z", z)?;
        let (expo, _) = Self::split_exponent(x, z);
        Ok(expo.exp() * self.i_sign_bracket(x, z))
    }
}

/// `k`-th coefficient of `i(z)` as a power series in `x z`:
/// `-k (k^2 + k - x^2) / (x k! (k+1)!)`.
///
/// Positive for `k < (sqrt(1 + 4x^2) - 1)/2`, negative beyond. For
/// `x <= sqrt 2` every coefficient is non-positive.
pub fn i_coefficient(x_a: f64, k: u32) -> f64 {
    let kf = k as f64;
    let mut denom = x_a;
    for j in 1..=k {
        denom *= (j * (j + 1)) as f64;
    }
    // k! (k+1)! = prod_{j=1..k} j (j+1)
    -kf * (kf * kf + kf - x_a * x_a) / denom
}

/// Leading term `sqrt(2 / (pi z))` of `g` at infinity.
pub fn g_leading(z: f64) -> Result<f64> {
    check_pos("g_leading", "z", z)?;
    Ok((2.0 / (PI * z)).sqrt())
}

/// Leading term of `h(x, q x)` as `x` grows along a ray.
///
/// For `q < 1` this is `(sqrt q + 1) / (4 sqrt(pi x) q^(3/4)) exp(-(q + 1 - 2 sqrt q) x)`.
/// For `q > 1` the same expression holds, since it equals
/// `cosh(ln(q)/4) / (2 sqrt(pi x)) exp(...)` after rescaling.
pub fn h_ray_leading(x_a: f64, q: f64) -> Result<f64> {
    check_pos("h_ray_leading", "x_a", x_a)?;
    check_pos("h_ray_leading", "q", q)?;
    let sq = q.sqrt();
    let prefactor = (sq + 1.0) / (4.0 * (PI * x_a).sqrt() * q.powf(0.75));
    Ok(prefactor * (-(q + 1.0 - 2.0 * sq) * x_a).exp())
}

macro_rules! default_fn {
    ($(#[$doc:meta])* $name:ident($($arg:ident),+)) => {
        $(#[$doc])*
        pub fn $name($($arg: f64),+) -> Result<f64> {
            EvalConfig::default().$name($($arg),+)
        }
    };
}

default_fn!(
    /// [`EvalConfig::hyp0f1_1`] with default settings.
    hyp0f1_1(z)
);
default_fn!(
    /// [`EvalConfig::hyp0f1_2`] with default settings.
    hyp0f1_2(z)
);
default_fn!(bessel_i0(t));
default_fn!(bessel_i1(t));
default_fn!(scaled_i0(t));
default_fn!(scaled_i1(t));
default_fn!(g(z));
default_fn!(ln_g(z));
default_fn!(h(x_a, z));
default_fn!(ln_h(x_a, z));
default_fn!(i_sign(x_a, z));

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    /// Plain term-by-term summation, independent of the production paths.
    fn series_oracle(a: f64, z: f64) -> f64 {
        let mut sum = 0.0;
        let mut term = 1.0;
        let mut k = 0.0;
        while term > 1e-300 && k < 10_000.0 {
            sum += term;
            k += 1.0;
            term *= z / (k * (a + k - 1.0));
        }
        sum
    }

    /// `exp(-t) I_nu(t)` by log-sum-exp over the power series.
    fn log_rescaled_oracle(nu: u32, t: f64) -> f64 {
        let half = (0.5 * t).ln();
        let mut logs = Vec::new();
        let mut ln_fact_k = 0.0;
        let mut ln_fact_knu: f64 = (1..=nu).map(|j| (j as f64).ln()).sum();
        for k in 0..20_000u32 {
            if k > 0 {
                ln_fact_k += (k as f64).ln();
                ln_fact_knu += ((k + nu) as f64).ln();
            }
            logs.push((2 * k + nu) as f64 * half - ln_fact_k - ln_fact_knu - t);
        }
        let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        max.exp() * logs.iter().map(|l| (l - max).exp()).sum::<f64>()
    }

    #[test]
    fn hyp0f1_values() {
        assert_eq!(hyp0f1_1(0.0).unwrap(), 1.0);
        assert_eq!(hyp0f1_2(0.0).unwrap(), 1.0);
        for z in [1.0, 4.0, 30.0, 200.0] {
            assert!(
                rel(hyp0f1_1(z).unwrap(), series_oracle(1.0, z)) < 1e-14,
                "z={z}"
            );
            assert!(
                rel(hyp0f1_2(z).unwrap(), series_oracle(2.0, z)) < 1e-14,
                "z={z}"
            );
        }
        assert!((hyp0f1_1(1.0).unwrap() - 2.279_585_302_336_067).abs() < 1e-14);
        assert!((hyp0f1_1(4.0).unwrap() - 11.301_921_952_136_33).abs() < 1e-12);
        assert!((hyp0f1_2(1.0).unwrap() - 1.590_636_854_637_329).abs() < 1e-14);
        assert!((hyp0f1_2(4.0).unwrap() - 4.879_732_576_852_225).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(hyp0f1_1(-1.0).is_err());
        assert!(hyp0f1_2(f64::NAN).is_err());
        assert!(hyp0f1_1(f64::INFINITY).is_err());
        assert!(bessel_i0(-0.1).is_err());
        assert!(scaled_i1(-2.0).is_err());
        assert!(g(-1e-9).is_err());
        assert!(h(-1.0, 1.0).is_err());
        assert!(h(1.0, -1.0).is_err());
        assert!(i_sign(0.0, 1.0).is_err());
        assert!(g_leading(0.0).is_err());
        assert!(h_ray_leading(1.0, 0.0).is_err());
    }

    #[test]
    fn bessel_values() {
        assert_eq!(bessel_i0(0.0).unwrap(), 1.0);
        assert_eq!(bessel_i1(0.0).unwrap(), 0.0);
        assert_eq!(scaled_i0(0.0).unwrap(), 1.0);
        assert!(rel(bessel_i0(2.0).unwrap(), series_oracle(1.0, 1.0)) < 1e-15);
        let s = scaled_i1(2.0).unwrap();
        assert!(rel(s, 1.590_636_854_637_329 * (-2.0f64).exp()) < 1e-14);
        assert!((s - 0.215_269_289_248_937_6).abs() < 1e-12);
    }

    #[test]
    fn scaled_matches_log_rescaled_series() {
        for t in [1000.0, 250.0] {
            assert!(rel(scaled_i0(t).unwrap(), log_rescaled_oracle(0, t)) < 1e-9);
            assert!(rel(scaled_i1(t).unwrap(), log_rescaled_oracle(1, t)) < 1e-9);
        }
        // Both sides of the series/asymptotic switch.
        for t in [25.0, 29.0, 30.0, 31.0, 35.0] {
            assert!(
                rel(scaled_i0(t).unwrap(), log_rescaled_oracle(0, t)) < 1e-12,
                "t={t}"
            );
            assert!(
                rel(scaled_i1(t).unwrap(), log_rescaled_oracle(1, t)) < 1e-12,
                "t={t}"
            );
        }
    }

    #[test]
    fn scaled_unscaled_consistency() {
        let mut t = 0.01;
        while t <= 25.0 {
            let a = scaled_i0(t).unwrap() * t.exp();
            assert!(rel(a, bessel_i0(t).unwrap()) < 1e-12, "t={t}");
            let b = scaled_i1(t).unwrap() * t.exp();
            assert!(rel(b, bessel_i1(t).unwrap()) < 1e-12, "t={t}");
            t *= 1.3;
        }
    }

    #[test]
    fn g_values() {
        assert_eq!(g(0.0).unwrap(), 1.0);
        let expected = (series_oracle(1.0, 1.0) + series_oracle(2.0, 1.0)) * (-2.0f64).exp();
        assert!(rel(g(2.0).unwrap(), expected) < 1e-14);
        assert!((g(2.0).unwrap() - 0.523_77).abs() < 1e-5);
        let z = 1e4;
        let two_term = (2.0 / (PI * z)).sqrt() * (1.0 - 1.0 / (8.0 * z));
        assert!(rel(g(z).unwrap(), two_term) < 2e-4);
    }

    #[test]
    fn g_strictly_decreasing() {
        let n = 2000;
        let mut prev = g(0.0).unwrap();
        for i in 1..=n {
            let z = 1e5 * (i as f64 / n as f64).powi(3);
            let v = g(z).unwrap();
            assert!(v < prev, "z={z}");
            prev = v;
        }
        assert!(g(1e12).unwrap() < 1e-6);
    }

    #[test]
    fn h_boundary_and_diagonal() {
        assert!((h(2.0, 0.0).unwrap() - 1.5 * (-2.0f64).exp()).abs() < 1e-15);
        assert!((h(2.0, 0.0).unwrap() - 0.203_003).abs() < 1e-6);
        for x in [0.5, 1.0, 5.0, 20.0, 50.0, 200.0] {
            assert!(
                rel(h(x, x).unwrap(), 0.5 * g(2.0 * x).unwrap()) < 1e-12,
                "x={x}"
            );
        }
        assert!(h(5.0, 2.0).unwrap() >= h(2.0, 5.0).unwrap());
    }

    #[test]
    fn h_against_direct_product() {
        let x: f64 = 3.0;
        let z: f64 = 7.0;
        let w = x * z;
        let direct = 0.5 * (series_oracle(1.0, w) + x * series_oracle(2.0, w)) * (-x - z).exp();
        assert!(rel(h(x, z).unwrap(), direct) < 1e-13);
    }

    #[test]
    fn ln_h_survives_underflow() {
        let v = ln_h(1e6, 3e6).unwrap();
        assert!(v.is_finite() && v < -1e5);
        assert_eq!(h(1e6, 3e6).unwrap(), 0.0);
        let x: f64 = 40.0;
        assert!((ln_h(x, 11.0).unwrap() - h(x, 11.0).unwrap().ln()).abs() < 1e-12);
    }

    #[test]
    fn i_sign_examples() {
        for x in [2.0, 10.0] {
            assert!(i_sign(x, x).unwrap() < 0.0);
        }
        assert!(i_sign(2.0, 0.01).unwrap() > 0.0);
        for z in [0.5, 1.0, 2.0] {
            assert!(i_sign(1.0, z).unwrap() < 0.0);
        }
        // finite-difference sign of h(2, .) near the origin
        let d = h(2.0, 0.011).unwrap() - h(2.0, 0.009).unwrap();
        assert!(d > 0.0);
    }

    #[test]
    fn i_sign_tracks_dh_dz() {
        let cfg = EvalConfig::default();
        for &x in &[0.7, 1.5, 3.0, 12.0, 80.0] {
            for k in 1..40 {
                let z = x * k as f64 / 20.0;
                let step = 1e-5 * z;
                let fd = cfg.h(x, z + step).unwrap() - cfg.h(x, z - step).unwrap();
                let s = cfg.i_sign(x, z).unwrap();
                if fd.abs() > 1e-12 * cfg.h(x, z).unwrap() {
                    assert_eq!(fd > 0.0, s > 0.0, "x={x} z={z}");
                }
            }
        }
    }

    #[test]
    fn i_bracket_branches_agree() {
        let cfg = EvalConfig::default();
        for (x, z) in [(2.0, 0.24), (3.0, 0.16), (0.9, 0.5)] {
            let series = cfg.i_sign_bracket(x, z);
            let t = 2.0 * (x * z).sqrt();
            let direct = (x - z) * cfg.scaled_i0_unchecked(t) - x * cfg.scaled_f2_unchecked(t);
            assert!((series - direct).abs() < 1e-13 * x, "x={x} z={z}");
        }
    }

    #[test]
    fn i_coefficients_change_sign_once() {
        // largest double not above sqrt 2 (the rounded SQRT_2 lies just above it)
        let below_sqrt2 = f64::from_bits(std::f64::consts::SQRT_2.to_bits() - 1);
        for x in [0.5, 1.0, below_sqrt2] {
            assert!((1..60).all(|k| i_coefficient(x, k) <= 0.0), "x={x}");
        }
        for x in [1.5, 4.0, 25.0] {
            let signs: Vec<bool> = (1..120).map(|k| i_coefficient(x, k) > 0.0).collect();
            let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
            assert_eq!(changes, 1, "x={x}");
            assert!(signs[0]);
            let root = ((1.0 + 4.0 * x * x).sqrt() - 1.0) / 2.0;
            let last_pos = signs.iter().rposition(|&s| s).unwrap() + 1;
            assert!((last_pos as f64) < root && root <= (last_pos + 1) as f64);
        }
    }

    #[test]
    fn leading_terms() {
        assert!((g_leading(1e4).unwrap() - 7.9788e-3).abs() < 1e-7);
        let x: f64 = 200.0;
        let q = 0.5;
        let exact = h(x, q * x).unwrap();
        assert!(((exact - h_ray_leading(x, q).unwrap()) / exact).abs() < 0.1);
        // q = 1: exponent vanishes and the prefactor is the g asymptote
        assert!(
            rel(
                h_ray_leading(x, 1.0).unwrap(),
                0.5 * g_leading(2.0 * x).unwrap()
            ) < 1e-14
        );
    }

    #[test]
    fn invalid_config() {
        let mut cfg = EvalConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.series_rel_tol = 1e-3;
        assert!(cfg.validate().is_err());
        cfg = EvalConfig {
            scaled_switch: 0.0,
            ..EvalConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
