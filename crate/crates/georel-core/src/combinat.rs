//! Exact combinatorics for the conditional distribution of one observation
//! given the sufficient statistic `(X₍₁₎, S)` of a `Geo(r, θ)` sample.
//!
//! Given `X₍₁₎ = u` and `S = Σ(Xᵢ - X₍₁₎) = s`, every admissible sample
//! tuple is equally likely (each has probability `(1-θ)ⁿ θ^(s + n(u-r))`),
//! so conditional probabilities are ratios of tuple counts and carry no
//! dependence on `(r, θ)`. Writing `d = x - u`, the count of tuples with
//! first coordinate `x` is
//!
//! ```text
//! num(d) = C(s-d+n-2, n-2) - [d > 0] · C(s-d-1, n-2)
//! ```
//!
//! (compositions of the remaining deviation `s-d` into `n-1` cells, minus
//! those in which no other cell is empty — the minimum must stay at `u`),
//! and the total count is `C(s+n-1, n-1) - C(s-1, n-1)`. All ratios are
//! computed with arbitrary-precision integers and reduced before conversion
//! to floating point; a log-gamma fallback engages only for very large
//! `n + s` where exact arithmetic stops paying its way.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geomdist::GeoParams;

/// Sufficient summary of a complete sample: observed minimum `X₍₁₎`,
/// deviation sum `S = Σ(Xᵢ - X₍₁₎)` and sample size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuffStats {
    xmin: i64,
    s: u64,
    n: u32,
}

impl SuffStats {
    /// Requires `n ≥ 1`, and `s = 0` whenever `n = 1`.
    pub fn new(xmin: i64, s: u64, n: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::invalid("n", "sample size must be at least 1"));
        }
        if n == 1 && s != 0 {
            return Err(Error::invalid(
                "s",
                format!("a single observation has deviation sum 0, got {s}"),
            ));
        }
        Ok(SuffStats { xmin, s, n })
    }

    pub fn xmin(&self) -> i64 {
        self.xmin
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Largest support point of the conditional distribution, `X₍₁₎ + S`.
    pub fn upper(&self) -> i64 {
        self.xmin + self.s as i64
    }
}

/// Binomial coefficient `C(a, b)` in exact arithmetic; 0 when `b < 0` or
/// `b > a`.
pub fn binom(a: u64, b: i64) -> BigUint {
    if b < 0 || b as u64 > a {
        return BigUint::zero();
    }
    let b = (b as u64).min(a - b as u64);
    let mut res = BigUint::one();
    for i in 0..b {
        res = res * BigUint::from(a - i) / BigUint::from(i + 1);
    }
    res
}

/// `C(a, b)` accepting negative `a` (always 0 there); internal shorthand for
/// index arithmetic that can underflow.
fn binom_i(a: i64, b: i64) -> BigUint {
    if a < 0 {
        BigUint::zero()
    } else {
        binom(a as u64, b)
    }
}

/// Exact ratio → f64 without overflowing either side; both operands are
/// reduced to ~96 significant bits before the division.
fn big_ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    debug_assert!(!den.is_zero());
    let n_shift = num.bits().saturating_sub(96);
    let d_shift = den.bits().saturating_sub(96);
    let n_red = (num >> n_shift).to_f64().expect("<=96-bit value fits f64");
    let d_red = (den >> d_shift).to_f64().expect("<=96-bit value fits f64");
    (n_red / d_red) * (n_shift as f64 - d_shift as f64).exp2()
}

/// Tuple count with first-coordinate deviation `d`, for `n ≥ 2`.
fn numerator(n: u32, s: u64, d: u64) -> BigUint {
    debug_assert!(n >= 2 && d <= s);
    let m = (s - d) as i64;
    let k = n as i64 - 2;
    let head = binom_i(m + k, k);
    if d > 0 {
        head - binom_i(m - 1, k)
    } else {
        head
    }
}

/// Total tuple count `C(s+n-1, n-1) - C(s-1, n-1)`, for `n ≥ 2`.
fn denominator(n: u32, s: u64) -> BigUint {
    let k = n as i64 - 1;
    binom_i(s as i64 + k, k) - binom_i(s as i64 - 1, k)
}

/// Exact conditional probability `P(X = x | X₍₁₎, S)` as a reduced rational.
pub fn conditional_pmf_exact(stats: &SuffStats, x: i64) -> BigRational {
    let d = x - stats.xmin;
    if d < 0 || d as u64 > stats.s {
        return BigRational::zero();
    }
    if stats.n == 1 {
        return BigRational::one();
    }
    let num = numerator(stats.n, stats.s, d as u64);
    let den = denominator(stats.n, stats.s);
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

/// `P(X = x | X₍₁₎, S)` as f64 (exact big-integer ratio, then converted).
pub fn conditional_pmf(stats: &SuffStats, x: i64) -> f64 {
    let d = x - stats.xmin;
    if d < 0 || d as u64 > stats.s {
        return 0.0;
    }
    if stats.n == 1 {
        return 1.0;
    }
    let num = numerator(stats.n, stats.s, d as u64);
    let den = denominator(stats.n, stats.s);
    big_ratio_to_f64(&num, &den)
}

/// Size above which [`conditional_survival`] switches from exact big-integer
/// arithmetic to the log-gamma evaluation (`n + s` compared against this).
pub const EXACT_ARITHMETIC_LIMIT: u64 = 5000;

/// Exact conditional survival `P(X ≥ t | X₍₁₎, S)` as a reduced rational.
///
/// Both the tail count and the total collapse by the hockey-stick identity:
/// with `M = s - (t - xmin)`, the tail count is `C(M+n-1, n-1) - C(M, n-1)`.
pub fn conditional_survival_exact(stats: &SuffStats, t: i64) -> BigRational {
    if t <= stats.xmin {
        return BigRational::one();
    }
    if t > stats.upper() || stats.n == 1 {
        return BigRational::zero();
    }
    let m = (stats.s - (t - stats.xmin) as u64) as i64;
    let k = stats.n as i64 - 1;
    let num = binom_i(m + k, k) - binom_i(m, k);
    let den = denominator(stats.n, stats.s);
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

/// `P(X ≥ t | X₍₁₎, S)` as f64: 1 for `t ≤ X₍₁₎`, 0 beyond `X₍₁₎ + S`,
/// exact in between (log-gamma above [`EXACT_ARITHMETIC_LIMIT`]).
pub fn conditional_survival(stats: &SuffStats, t: i64) -> f64 {
    conditional_survival_with_threshold(stats, t, EXACT_ARITHMETIC_LIMIT)
}

/// As [`conditional_survival`], with an explicit exact-arithmetic size limit.
/// The log-gamma path targets 1e-10 relative accuracy.
pub fn conditional_survival_with_threshold(stats: &SuffStats, t: i64, exact_limit: u64) -> f64 {
    if t <= stats.xmin {
        return 1.0;
    }
    if t > stats.upper() || stats.n == 1 {
        return 0.0;
    }
    let m = (stats.s - (t - stats.xmin) as u64) as i64;
    let k = stats.n as i64 - 1;
    if stats.n as u64 + stats.s <= exact_limit {
        let num = binom_i(m + k, k) - binom_i(m, k);
        let den = denominator(stats.n, stats.s);
        big_ratio_to_f64(&num, &den)
    } else {
        let num = ln_binom_diff(m + k, m, k);
        let den = ln_binom_diff(stats.s as i64 + k, stats.s as i64 - 1, k);
        (num - den).exp()
    }
}

/// `ln(C(a, k) - C(b, k))` for `a > b`, via log-gamma.
fn ln_binom_diff(a: i64, b: i64, k: i64) -> f64 {
    debug_assert!(a > b && a >= k && k >= 1);
    let ln_a = ln_binom(a, k);
    if b < k {
        return ln_a; // C(b, k) = 0
    }
    let ln_b = ln_binom(b, k);
    ln_a + (-(ln_b - ln_a).exp()).ln_1p()
}

fn ln_binom(a: i64, k: i64) -> f64 {
    ln_gamma((a + 1) as f64) - ln_gamma((k + 1) as f64) - ln_gamma((a - k + 1) as f64)
}

/// Lanczos g=7 log-gamma for positive arguments.
#[allow(clippy::excessive_precision)]
fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    debug_assert!(x > 0.0);
    let z = x - 1.0;
    let mut acc = 0.99999999999980993;
    for (i, c) in COEF.iter().enumerate() {
        acc += c / (z + (i + 1) as f64);
    }
    let t = z + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Tabulated conditional distribution for one `(X₍₁₎, S, n)`, for callers
/// that need many evaluations (stress-strength conditional expectations,
/// jackknife loops). Built in one exact pass over the support.
#[derive(Debug, Clone)]
pub struct ConditionalTable {
    xmin: i64,
    /// `pmf[d] = P(X = xmin + d | ...)` for `d = 0..=s`.
    pmf: Vec<f64>,
    /// `survival[d] = P(X ≥ xmin + d | ...)` for `d = 0..=s+1`.
    survival: Vec<f64>,
}

impl ConditionalTable {
    pub fn new(stats: &SuffStats) -> Self {
        let s = stats.s as usize;
        if stats.n == 1 {
            return ConditionalTable {
                xmin: stats.xmin,
                pmf: vec![1.0],
                survival: vec![1.0, 0.0],
            };
        }
        let den = denominator(stats.n, stats.s);
        // exact numerators num(d), built incrementally over m = s - d:
        //   A(m) = C(m+n-2, n-2):  A(0) = 1,  A(m) = A(m-1)·(m+n-2)/m
        //   B(m) = C(m-1, n-2):    zero below m = n-1, then B(m) = B(m-1)·(m-1)/(m-n+1)
        let n = stats.n as u64;
        let mut a = BigUint::one();
        let mut b = BigUint::zero();
        let mut nums: Vec<BigUint> = Vec::with_capacity(s + 1);
        for m in 0..=(s as u64) {
            if m > 0 {
                a = a * BigUint::from(m + n - 2) / BigUint::from(m);
                if m == n - 1 {
                    b = BigUint::one();
                } else if m > n - 1 {
                    b = b * BigUint::from(m - 1) / BigUint::from(m - n + 1);
                }
            }
            let d_is_zero = m == stats.s;
            nums.push(if d_is_zero { a.clone() } else { &a - &b });
        }
        nums.reverse(); // now indexed by d
        let pmf: Vec<f64> = nums.iter().map(|v| big_ratio_to_f64(v, &den)).collect();
        let mut survival = vec![0.0; s + 2];
        let mut tail = BigUint::zero();
        for d in (1..=s).rev() {
            tail += &nums[d];
            survival[d] = big_ratio_to_f64(&tail, &den);
        }
        survival[0] = 1.0;
        ConditionalTable {
            xmin: stats.xmin,
            pmf,
            survival,
        }
    }

    /// `P(X = x | X₍₁₎, S)`.
    pub fn pmf(&self, x: i64) -> f64 {
        let d = x - self.xmin;
        if d < 0 || d as usize >= self.pmf.len() {
            return 0.0;
        }
        self.pmf[d as usize]
    }

    /// `P(X ≥ t | X₍₁₎, S)`.
    pub fn survival(&self, t: i64) -> f64 {
        let d = t - self.xmin;
        if d <= 0 {
            return 1.0;
        }
        if d as usize >= self.survival.len() {
            return 0.0;
        }
        self.survival[d as usize]
    }

    /// Inclusive support `[xmin, xmin + s]`.
    pub fn support(&self) -> (i64, i64) {
        (self.xmin, self.xmin + self.pmf.len() as i64 - 1)
    }
}

/// The alternative product expression for the conditional tail when `n ≥ 3`
/// and `S < n`; must agree with [`conditional_survival`] on its domain
/// `X₍₁₎ < t ≤ X₍₁₎ + S`.
///
/// The conditional distribution is a translation family in `X₍₁₎`, so the
/// product runs over the deviation `d = x - X₍₁₎`; spelling it with
/// `X₍₁₎ + S` in place of `S` is only equivalent when `X₍₁₎ = 0`.
pub fn conditional_survival_product_form(stats: &SuffStats, t: i64) -> Result<f64> {
    if stats.n < 3 || stats.s >= stats.n as u64 {
        return Err(Error::invalid(
            "stats",
            format!(
                "product form needs n >= 3 and S < n, got n={}, S={}",
                stats.n, stats.s
            ),
        ));
    }
    if t <= stats.xmin || t > stats.upper() {
        return Err(Error::invalid(
            "t",
            format!(
                "product form is defined for X(1) < t <= X(1)+S, got t={t} with X(1)={}, S={}",
                stats.xmin, stats.s
            ),
        ));
    }
    let s = stats.s as i64;
    let n = stats.n as i64;
    let mut total = 0.0;
    for d in (t - stats.xmin)..=s {
        let mut term = (n - 1) as f64 / (s + n - 1) as f64;
        for j in 1..=(n - 2) {
            term *= (s + n - d - 1 - j) as f64 / (s + n - 1 - j) as f64;
        }
        total += term;
    }
    Ok(total)
}

/// Upper bound on the number of tuples the enumeration oracles will visit.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// Brute-force oracle for the conditional distribution: enumerates every
/// `n`-tuple with minimum `xmin` and deviation sum `s`, all equally likely,
/// and tallies the first coordinate. Exact rational output.
pub fn brute_conditional_exact(n: u32, xmin: i64, s: u64) -> Result<BTreeMap<i64, BigRational>> {
    SuffStats::new(xmin, s, n)?;
    let compositions = binom(s + n as u64 - 1, n as i64 - 1);
    if compositions > BigUint::from(ENUMERATION_LIMIT) {
        return Err(Error::EnumerationTooLarge {
            detail: format!("{compositions} deviation tuples for n={n}, s={s}"),
            limit: ENUMERATION_LIMIT,
        });
    }

    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    let mut total: u64 = 0;
    let mut parts = vec![0u64; n as usize];
    visit_compositions(&mut parts, 0, s, &mut |tuple| {
        if tuple.contains(&0) {
            total += 1;
            *counts.entry(xmin + tuple[0] as i64).or_insert(0) += 1;
        }
    });

    debug_assert!(total > 0);
    Ok(counts
        .into_iter()
        .map(|(x, c)| (x, Ratio::new(BigInt::from(c), BigInt::from(total))))
        .collect())
}

/// f64 view of [`brute_conditional_exact`].
pub fn brute_conditional(n: u32, xmin: i64, s: u64) -> Result<BTreeMap<i64, f64>> {
    Ok(brute_conditional_exact(n, xmin, s)?
        .into_iter()
        .map(|(x, p)| (x, p.to_f64().expect("small rational")))
        .collect())
}

fn visit_compositions<F: FnMut(&[u64])>(parts: &mut [u64], idx: usize, remaining: u64, f: &mut F) {
    if idx == parts.len() - 1 {
        parts[idx] = remaining;
        f(parts);
        return;
    }
    for v in 0..=remaining {
        parts[idx] = v;
        visit_compositions(parts, idx + 1, remaining - v, f);
    }
}

/// Joint distribution of `(X₍₁₎, S)` from exhaustive enumeration over
/// `{r, ..., cap}ⁿ`, with the un-enumerated tail mass reported separately
/// rather than renormalized away.
#[derive(Debug, Clone)]
pub struct JointDistribution {
    pub masses: BTreeMap<(i64, u64), f64>,
    pub tail_mass: f64,
}

/// Enumerate the exact joint distribution of `(X₍₁₎, S)` for a sample of
/// size `n`, truncating each coordinate at `cap`.
pub fn enumerate_joint(n: u32, params: GeoParams, cap: i64) -> Result<JointDistribution> {
    if n < 1 {
        return Err(Error::invalid("n", "sample size must be at least 1"));
    }
    let r = params.r() as i64;
    if cap < r {
        return Err(Error::invalid("cap", format!("cap {cap} below support {r}")));
    }
    let width = (cap - r + 1) as u64;
    let tuples = width.checked_pow(n).filter(|&t| t <= ENUMERATION_LIMIT);
    let Some(_) = tuples else {
        return Err(Error::EnumerationTooLarge {
            detail: format!("{width}^{n} tuples over {{{r}, ..., {cap}}}"),
            limit: ENUMERATION_LIMIT,
        });
    };

    let mut masses: BTreeMap<(i64, u64), f64> = BTreeMap::new();
    let mut covered = 0.0;
    let mut tuple = vec![r; n as usize];
    loop {
        let xmin = *tuple.iter().min().expect("nonempty");
        let dev_sum: u64 = tuple.iter().map(|&x| (x - xmin) as u64).sum();
        let exponent: i64 = tuple.iter().map(|&x| x - r).sum();
        let p = (1.0 - params.theta()).powi(n as i32) * params.theta().powi(exponent as i32);
        *masses.entry((xmin, dev_sum)).or_insert(0.0) += p;
        covered += p;

        // odometer
        let mut pos = 0;
        loop {
            if pos == tuple.len() {
                return Ok(JointDistribution {
                    masses,
                    tail_mass: 1.0 - covered,
                });
            }
            if tuple[pos] < cap {
                tuple[pos] += 1;
                break;
            }
            tuple[pos] = r;
            pos += 1;
        }
    }
}

/// Exact expectation of the two-point statistic that witnesses
/// non-completeness of `(X₍₁₎, S)`: `g = +1` at `(r+2, 0)`, `-1` at
/// `(r+1, n)`, 0 elsewhere.
#[derive(Debug, Clone, Copy)]
pub struct CompletenessDiagnostic {
    /// `E[g]`, from exhaustive enumeration.
    pub expectation: f64,
    /// `P(X₍₁₎ = r+2, S = 0)` — a single tuple.
    pub mass_at_plus: f64,
    /// `P(X₍₁₎ = r+1, S = n)` — several tuples, each of the same probability.
    pub mass_at_minus: f64,
    /// Probability of one tuple in either event, `(1-θ)ⁿ θ^(2n)`.
    pub single_tuple_mass: f64,
    /// Mass beyond the enumeration cap (both events lie well inside it).
    pub tail_mass: f64,
}

/// Evaluate the non-completeness diagnostic by exact enumeration. The two
/// events sit at deviations ≤ `2 + n` above `r`, so any `cap ≥ r + n + 2`
/// captures them exactly.
pub fn completeness_diagnostic(
    n: u32,
    params: GeoParams,
    cap: i64,
) -> Result<CompletenessDiagnostic> {
    let r = params.r() as i64;
    if cap < r + n as i64 + 2 {
        return Err(Error::invalid(
            "cap",
            format!("cap {cap} too small to cover both events (need >= r+n+2)"),
        ));
    }
    let joint = enumerate_joint(n, params, cap)?;
    let plus = joint.masses.get(&(r + 2, 0)).copied().unwrap_or(0.0);
    let minus = joint.masses.get(&(r + 1, n as u64)).copied().unwrap_or(0.0);
    Ok(CompletenessDiagnostic {
        expectation: plus - minus,
        mass_at_plus: plus,
        mass_at_minus: minus,
        single_tuple_mass: (1.0 - params.theta()).powi(n as i32)
            * params.theta().powi(2 * n as i32),
        tail_mass: joint.tail_mass,
    })
}
