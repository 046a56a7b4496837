//! The two-parameter geometric distribution `Geo(r, θ)`.
//!
//! `P(X = x) = (1-θ)·θ^(x-r)` for `x = r, r+1, r+2, ...` with `0 < θ < 1`
//! and warranty offset `r ∈ {0, 1, 2, ...}`. The mission reliability is
//! `R(t) = P(X ≥ t) = θ^(t-r)`, extended with `R(t) = 1` for `t < r` so that
//! estimator contracts compose cleanly below the observed support.

use crate::error::{Error, Result};
use crate::stream::RandomStream;

/// Parameters of `Geo(r, θ)`: warranty offset `r` and survival probability `θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoParams {
    r: u32,
    theta: f64,
}

impl GeoParams {
    /// Requires `0 < θ < 1`; any nonnegative `r` is accepted.
    pub fn new(r: u32, theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::invalid(
                "theta",
                format!("must lie in the open interval (0, 1), got {theta}"),
            ));
        }
        Ok(GeoParams { r, theta })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Population mean `r + θ/(1-θ)`.
    pub fn population_mean(&self) -> f64 {
        self.r as f64 + self.theta / (1.0 - self.theta)
    }

    /// Probability mass at `x`: `(1-θ)·θ^(x-r)` for `x ≥ r`, zero below.
    pub fn pmf(&self, x: i64) -> f64 {
        let d = x - self.r as i64;
        if d < 0 {
            return 0.0;
        }
        (1.0 - self.theta) * geom_pow(self.theta, d)
    }

    /// Mission reliability `R(t) = θ^(t-r)` for `t ≥ r`, and 1 for `t < r`.
    pub fn reliability(&self, t: i64) -> f64 {
        let d = t - self.r as i64;
        if d <= 0 {
            return 1.0;
        }
        geom_pow(self.theta, d)
    }

    /// Draw `n` i.i.d. lifetimes by inverse transform,
    /// `x = r + floor(ln u / ln θ)` with `u` uniform on `(0, 1)`.
    pub fn sample(&self, n: usize, stream: &mut RandomStream) -> Result<Vec<i64>> {
        if n == 0 {
            return Err(Error::invalid("n", "sample size must be at least 1"));
        }
        let ln_theta = self.theta.ln();
        Ok((0..n)
            .map(|_| {
                let u = stream.next_open01();
                self.r as i64 + (u.ln() / ln_theta).floor() as i64
            })
            .collect())
    }
}

/// `θ^d` for `d ≥ 0`, switching to log space where direct exponentiation
/// would underflow; returns 0 only below the smallest positive normal f64.
pub(crate) fn geom_pow(theta: f64, d: i64) -> f64 {
    debug_assert!(d >= 0);
    if d == 0 {
        return 1.0;
    }
    let log_val = d as f64 * theta.ln();
    if log_val < f64::MIN_POSITIVE.ln() {
        return 0.0;
    }
    if d <= i32::MAX as i64 && log_val > -700.0 {
        theta.powi(d as i32)
    } else {
        log_val.exp()
    }
}

/// A k-out-of-m system: `m` identical components, working iff at least `k`
/// components work. `k = m` is a series system, `k = 1` parallel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemSpec {
    k: u32,
    m: u32,
}

impl SystemSpec {
    /// Requires `1 ≤ k ≤ m`.
    pub fn new(k: u32, m: u32) -> Result<Self> {
        if k < 1 || k > m {
            return Err(Error::invalid(
                "system",
                format!("need 1 <= k <= m, got k={k}, m={m}"),
            ));
        }
        Ok(SystemSpec { k, m })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// System reliability `Σ_{i=k}^{m} C(m,i)·p^i·(1-p)^(m-i)` for component
    /// reliability `p`.
    pub fn system_reliability(&self, component_r: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&component_r) {
            return Err(Error::invalid(
                "componentR",
                format!("must lie in [0, 1], got {component_r}"),
            ));
        }
        let m = self.m;
        let p = component_r;
        let q = 1.0 - p;
        // Running C(m, i) in f64; exact to rounding for the moderate m used
        // in system specs.
        let mut coeff = 1.0;
        let mut total = 0.0;
        for i in 0..=m {
            if i >= self.k {
                total += coeff * p.powi(i as i32) * q.powi((m - i) as i32);
            }
            if i < m {
                coeff = coeff * (m - i) as f64 / (i + 1) as f64;
            }
        }
        Ok(total.clamp(0.0, 1.0))
    }
}

/// Independent stress `X ~ Geo(r₁, θ₁)` and strength `Y ~ Geo(r₂, θ₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StressStrengthParams {
    pub stress: GeoParams,
    pub strength: GeoParams,
}

impl StressStrengthParams {
    pub fn new(stress: GeoParams, strength: GeoParams) -> Self {
        StressStrengthParams { stress, strength }
    }

    /// Stress-strength reliability `R = P(X ≤ Y)`.
    ///
    /// With `ρ = (1-θ₁)/(1-θ₁θ₂)` and `δ = r₁-r₂`:
    /// `R = ρ·θ₂^δ` for `δ > 0`, `R = 1-(1-ρ)·θ₁^(-δ)` for `δ < 0`, and
    /// `R = ρ` at `δ = 0` (the common limit of both branches).
    pub fn reliability(&self) -> f64 {
        let t1 = self.stress.theta();
        let t2 = self.strength.theta();
        let rho = (1.0 - t1) / (1.0 - t1 * t2);
        let delta = self.stress.r() as i64 - self.strength.r() as i64;
        if delta > 0 {
            rho * geom_pow(t2, delta)
        } else if delta < 0 {
            1.0 - (1.0 - rho) * geom_pow(t1, -delta)
        } else {
            rho
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::Role;

    fn geo(r: u32, theta: f64) -> GeoParams {
        GeoParams::new(r, theta).unwrap()
    }

    #[test]
    fn rejects_bad_theta() {
        assert!(GeoParams::new(0, 0.0).is_err());
        assert!(GeoParams::new(0, 1.0).is_err());
        assert!(GeoParams::new(0, -0.2).is_err());
        assert!(GeoParams::new(0, f64::NAN).is_err());
    }

    #[test]
    fn pmf_values() {
        assert_eq!(geo(0, 0.5).pmf(0), 0.5);
        assert_eq!(geo(15, 0.8).pmf(14), 0.0);
        assert!((geo(15, 0.8).pmf(17) - 0.128).abs() < 1e-15); // 0.2 * 0.8^2
    }

    #[test]
    fn reliability_values() {
        let p = geo(15, 0.8);
        assert!((p.reliability(25) - 0.10737).abs() < 1e-5);
        assert!((p.reliability(16) - 0.8).abs() < 1e-15);
        assert_eq!(p.reliability(15), 1.0);
        assert_eq!(p.reliability(3), 1.0);
    }

    #[test]
    fn reliability_is_tail_sum_of_pmf() {
        let p = geo(3, 0.7);
        for t in 3..40 {
            let tail: f64 = (t..t + 400).map(|x| p.pmf(x)).sum::<f64>() + p.reliability(t + 400);
            assert!((p.reliability(t) - tail).abs() < 1e-12);
        }
    }

    #[test]
    fn deep_tail_underflows_to_zero_only_below_normal_range() {
        let p = geo(0, 0.5);
        // 0.5^1000 ~ 1e-302 is still a normal f64.
        assert!(p.reliability(1000) > 0.0);
        assert_eq!(p.reliability(1_100), 0.0);
    }

    #[test]
    fn system_reliability_special_cases() {
        let spec = SystemSpec::new(2, 8).unwrap();
        let r25 = geo(15, 0.8).reliability(25);
        assert!((spec.system_reliability(r25).unwrap() - 0.20909).abs() < 1e-5);
        assert!((spec.system_reliability(0.8).unwrap() - 0.99992).abs() < 1e-5);

        let single = SystemSpec::new(1, 1).unwrap();
        assert!((single.system_reliability(0.37).unwrap() - 0.37).abs() < 1e-15);

        // series and parallel reductions
        let series = SystemSpec::new(3, 3).unwrap();
        assert!((series.system_reliability(0.9).unwrap() - 0.9f64.powi(3)).abs() < 1e-12);
        let parallel = SystemSpec::new(1, 3).unwrap();
        assert!((parallel.system_reliability(0.9).unwrap() - (1.0 - 0.1f64.powi(3))).abs() < 1e-12);
    }

    #[test]
    fn system_spec_validation() {
        assert!(SystemSpec::new(0, 5).is_err());
        assert!(SystemSpec::new(6, 5).is_err());
        assert!(SystemSpec::new(1, 0).is_err());
        let spec = SystemSpec::new(2, 8).unwrap();
        assert!(spec.system_reliability(1.2).is_err());
        assert!(spec.system_reliability(-0.1).is_err());
    }

    #[test]
    fn stress_strength_table_values() {
        // equal parameters: R = ρ
        let same = StressStrengthParams::new(geo(5, 0.1), geo(5, 0.1));
        assert!((same.reliability() - 0.909091).abs() < 1e-5);

        let weak = StressStrengthParams::new(geo(10, 0.5), geo(5, 0.5));
        assert!((weak.reliability() - 0.020833).abs() < 1e-5);

        let strong = StressStrengthParams::new(geo(5, 0.5), geo(10, 0.5));
        assert!((strong.reliability() - 0.989583).abs() < 1e-5);
    }

    #[test]
    fn stress_strength_branches_agree_at_delta_zero() {
        for (t1, t2) in [(0.3, 0.7), (0.8, 0.8), (0.05, 0.9)] {
            let p = StressStrengthParams::new(geo(4, t1), geo(4, t2));
            let rho = (1.0 - t1) / (1.0 - t1 * t2);
            // both branch formulas evaluated at δ = 0
            assert_eq!(p.reliability(), rho);
            assert!((rho * geom_pow(t2, 0) - p.reliability()).abs() < 1e-15);
            assert!((1.0 - (1.0 - rho) * geom_pow(t1, 0) - p.reliability()).abs() < 1e-15);
        }
    }

    #[test]
    fn stress_strength_matches_brute_force_double_sum() {
        let theta_pairs = [(0.1, 0.1), (0.5, 0.5), (0.8, 0.2), (0.9, 0.9), (0.2, 0.8)];
        let rs = [5u32, 10, 15, 20];
        for &(t1, t2) in &theta_pairs {
            for &r1 in &rs {
                for &r2 in &rs {
                    let p = StressStrengthParams::new(geo(r1, t1), geo(r2, t2));
                    // Σ_x pmf₁(x)·P(Y ≥ x), truncated once the stress tail
                    // is below 1e-12.
                    let stress = p.stress;
                    let strength = p.strength;
                    let mut brute = 0.0;
                    let mut x = r1 as i64;
                    while stress.reliability(x) > 1e-12 {
                        brute += stress.pmf(x) * strength.reliability(x);
                        x += 1;
                    }
                    assert!(
                        (p.reliability() - brute).abs() < 1e-9,
                        "mismatch at θ=({t1},{t2}), r=({r1},{r2}): {} vs {brute}",
                        p.reliability()
                    );
                }
            }
        }
    }

    #[test]
    fn population_mean_values() {
        assert!((geo(0, 0.5).population_mean() - 1.0).abs() < 1e-15);
        assert!((geo(15, 0.8).population_mean() - 19.0).abs() < 1e-12);
        assert!((geo(7, 0.0001).population_mean() - 7.0001).abs() < 1e-7);
    }

    #[test]
    fn sampler_respects_support_and_mean() {
        let p = geo(15, 0.8);
        let mut stream = RandomStream::new(7, 0, Role::Sample);
        let draws = p.sample(100_000, &mut stream).unwrap();
        assert!(draws.iter().all(|&x| x >= 15));
        let mean = draws.iter().map(|&x| x as f64).sum::<f64>() / draws.len() as f64;
        // population sd = sqrt(θ)/(1-θ) ≈ 4.47; 3 standard errors of the mean
        let se = (0.8f64.sqrt() / 0.2) / (draws.len() as f64).sqrt();
        assert!((mean - 19.0).abs() < 3.0 * se, "mean {mean} off from 19.0");
    }

    #[test]
    fn sampler_is_deterministic() {
        let p = geo(3, 0.6);
        let mut a = RandomStream::new(99, 4, Role::Sample);
        let mut b = RandomStream::new(99, 4, Role::Sample);
        assert_eq!(p.sample(50, &mut a).unwrap(), p.sample(50, &mut b).unwrap());
        assert!(p.sample(0, &mut a).is_err());
    }

    #[test]
    fn sampler_matches_pmf_frequencies() {
        let p = geo(0, 0.5);
        let mut stream = RandomStream::new(11, 2, Role::Sample);
        let draws = p.sample(200_000, &mut stream).unwrap();
        for x in 0..4 {
            let freq = draws.iter().filter(|&&v| v == x).count() as f64 / draws.len() as f64;
            let prob = p.pmf(x);
            let se = (prob * (1.0 - prob) / draws.len() as f64).sqrt();
            assert!((freq - prob).abs() < 4.0 * se, "x={x}: {freq} vs {prob}");
        }
    }
}
