//! Point estimators of `R(t)`, `R_s(t)` and the stress-strength reliability
//! `R`, for complete and type-I censored samples.
//!
//! The MLE of `(r, θ)` from a complete sample is `(X₍₁₎, S/(n+S))`; under
//! type-I censoring at cycle `c` with `p ≥ 1` observed failures it is
//! `(X₍₁₎, S*/(p+S*))` with
//! `S* = Σ(X₍ᵢ₎ - X₍₁₎) + (n-p)·((c+1) - X₍₁₎)`. Unbiased estimators come
//! from Rao-Blackwellizing indicator estimators against the sufficient
//! statistic `(X₍₁₎, S)`; the conditional distributions live in
//! [`crate::combinat`].

use serde::Serialize;

use crate::combinat::{self, SuffStats};
use crate::error::{Error, Result};
use crate::geomdist::SystemSpec;

/// A complete sample of lifetimes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteSample {
    values: Vec<i64>,
}

impl CompleteSample {
    /// Requires a nonempty, nonnegative sample (support checks against a
    /// declared `r` happen at estimation time, not construction).
    pub fn new(values: Vec<i64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("sample"));
        }
        if let Some(bad) = values.iter().find(|&&v| v < 0) {
            return Err(Error::invalid(
                "sample",
                format!("lifetimes are nonnegative cycle counts, got {bad}"),
            ));
        }
        Ok(CompleteSample { values })
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sufficient summary `(X₍₁₎, S, n)`.
    pub fn suff_stats(&self) -> SuffStats {
        let xmin = *self.values.iter().min().expect("nonempty");
        let s: u64 = self.values.iter().map(|&v| (v - xmin) as u64).sum();
        SuffStats::new(xmin, s, self.values.len() as u32).expect("valid by construction")
    }

    /// Type-I censored view of this sample: failures at or before `c` are
    /// observed, the rest only survive past `c`.
    pub fn censor_at(&self, c: i64) -> CensoredSample {
        let observed: Vec<i64> = self.values.iter().copied().filter(|&v| v <= c).collect();
        CensoredSample {
            c,
            observed,
            n: self.values.len() as u32,
        }
    }
}

/// A type-I censored sample: `n` units on test, observation stops at cycle
/// `c`, only failures at or before `c` record a value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensoredSample {
    c: i64,
    observed: Vec<i64>,
    n: u32,
}

impl CensoredSample {
    pub fn new(c: i64, observed: Vec<i64>, n: u32) -> Result<Self> {
        if observed.len() as u32 > n {
            return Err(Error::invalid(
                "observed",
                format!("{} failures recorded but only {n} units on test", observed.len()),
            ));
        }
        if let Some(bad) = observed.iter().find(|&&v| v > c) {
            return Err(Error::invalid(
                "observed",
                format!("observed failure {bad} exceeds censoring cycle {c}"),
            ));
        }
        if let Some(bad) = observed.iter().find(|&&v| v < 0) {
            return Err(Error::invalid(
                "observed",
                format!("lifetimes are nonnegative cycle counts, got {bad}"),
            ));
        }
        Ok(CensoredSample { c, observed, n })
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn observed(&self) -> &[i64] {
        &self.observed
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of observed failures `p`.
    pub fn p(&self) -> u32 {
        self.observed.len() as u32
    }

    /// Censored sufficient summary `(X₍₁₎, p, S*)`; fails when no failures
    /// were observed (the MLE of `r` is then undefined).
    pub fn stats(&self) -> Result<CensoredStats> {
        if self.observed.is_empty() {
            return Err(Error::EstimatorDomain(
                "no failures observed before the censoring cycle".into(),
            ));
        }
        let xmin = *self.observed.iter().min().expect("nonempty");
        let s_star: u64 = self
            .observed
            .iter()
            .map(|&v| (v - xmin) as u64)
            .sum::<u64>()
            + (self.n - self.p()) as u64 * ((self.c + 1 - xmin) as u64);
        Ok(CensoredStats {
            xmin,
            p: self.p(),
            s_star,
        })
    }
}

/// Censored sufficient summary: minimum observed failure, failure count `p`
/// and the censored deviation sum `S*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensoredStats {
    xmin: i64,
    p: u32,
    s_star: u64,
}

impl CensoredStats {
    /// Requires `p ≥ 1`.
    pub fn new(xmin: i64, p: u32, s_star: u64) -> Result<Self> {
        if p < 1 {
            return Err(Error::EstimatorDomain(
                "censored statistics need at least one observed failure".into(),
            ));
        }
        Ok(CensoredStats { xmin, p, s_star })
    }

    pub fn xmin(&self) -> i64 {
        self.xmin
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s_star(&self) -> u64 {
        self.s_star
    }
}

/// Estimation method tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Mle,
    MleCensored,
    Ue,
    Naive,
    AsPublished,
    ExactRb,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Mle => "mle",
            Method::MleCensored => "mle-censored",
            Method::Ue => "ue",
            Method::Naive => "naive",
            Method::AsPublished => "as-published",
            Method::ExactRb => "exact-rb",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mle" => Ok(Method::Mle),
            "mle-censored" => Ok(Method::MleCensored),
            "ue" => Ok(Method::Ue),
            "naive" => Ok(Method::Naive),
            "as-published" => Ok(Method::AsPublished),
            "exact-rb" => Ok(Method::ExactRb),
            other => Err(Error::invalid("method", format!("unknown method `{other}`"))),
        }
    }
}

/// What an estimate targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// Component mission reliability `R(t)`.
    ComponentReliability,
    /// k-out-of-m system mission reliability `R_s(t)`.
    SystemReliability,
    /// Stress-strength reliability `R = P(X ≤ Y)`.
    StressStrength,
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Target::ComponentReliability => "R(t)",
            Target::SystemReliability => "Rs(t)",
            Target::StressStrength => "R",
        })
    }
}

/// One estimator output: method, target, value, and the statistics it was
/// computed from, so studies can recompute without resampling.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateRecord {
    pub method: Method,
    pub target: Target,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<RecordMeta>,
}

/// Optional estimate metadata: a variance estimate, an interval, and the
/// sample summaries used (so studies can recompute without resampling).
/// Stress-strength estimates carry the strength-side summary too.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RecordMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<(f64, f64)>,
    /// `(xmin, s, n)` of the (stress) sample.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suff_stats: Option<(i64, u64, u32)>,
    /// `(xmin, s, n)` of the strength sample.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strength_suff_stats: Option<(i64, u64, u32)>,
    /// `(xmin, p, s_star)` of the censored (stress) sample.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub censored_stats: Option<(i64, u32, u64)>,
    /// `(xmin, p, s_star)` of the censored strength sample.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strength_censored_stats: Option<(i64, u32, u64)>,
}

impl RecordMeta {
    pub fn for_stats(stats: &SuffStats) -> Self {
        RecordMeta {
            suff_stats: Some((stats.xmin(), stats.s(), stats.n())),
            ..Default::default()
        }
    }

    pub fn for_censored(cstats: &CensoredStats) -> Self {
        RecordMeta {
            censored_stats: Some((cstats.xmin(), cstats.p(), cstats.s_star())),
            ..Default::default()
        }
    }
}

/// MLE of `(r, θ)`: `r̂ = X₍₁₎`, `θ̂ = S/(n+S)`.
pub fn mle_params(stats: &SuffStats) -> (i64, f64) {
    let theta_hat = stats.s() as f64 / (stats.n() as u64 + stats.s()) as f64;
    (stats.xmin(), theta_hat)
}

/// MLE of `R(t)`: 1 for `t ≤ X₍₁₎`, else `[S/(n+S)]^(t-X₍₁₎)`.
pub fn mle_reliability(stats: &SuffStats, t: i64) -> f64 {
    let d = t - stats.xmin();
    if d <= 0 {
        return 1.0;
    }
    let (_, theta_hat) = mle_params(stats);
    plug_in_power(theta_hat, d)
}

/// MLE of `R_s(t)`: 1 for `t ≤ X₍₁₎`, else the k-out-of-m binomial sum over
/// the component MLE.
pub fn mle_system_reliability(stats: &SuffStats, t: i64, spec: &SystemSpec) -> Result<f64> {
    if t <= stats.xmin() {
        return Ok(1.0);
    }
    spec.system_reliability(mle_reliability(stats, t))
}

/// Censored-sample MLE of `R(t)`: 1 for `t ≤ X₍₁₎`, else
/// `[S*/(p+S*)]^(t-X₍₁₎)`.
pub fn mle_reliability_censored(cstats: &CensoredStats, t: i64) -> f64 {
    let d = t - cstats.xmin();
    if d <= 0 {
        return 1.0;
    }
    let theta_hat = cstats.s_star() as f64 / (cstats.p() as u64 + cstats.s_star()) as f64;
    plug_in_power(theta_hat, d)
}

/// Censored-sample MLE of `R_s(t)`.
pub fn mle_system_reliability_censored(
    cstats: &CensoredStats,
    t: i64,
    spec: &SystemSpec,
) -> Result<f64> {
    if t <= cstats.xmin() {
        return Ok(1.0);
    }
    spec.system_reliability(mle_reliability_censored(cstats, t))
}

fn plug_in_power(theta_hat: f64, d: i64) -> f64 {
    if theta_hat == 0.0 {
        return 0.0;
    }
    crate::geomdist::geom_pow(theta_hat, d)
}

/// Rao-Blackwell unbiased estimator of `R(t)`: 1 for `t ≤ X₍₁₎`, 0 beyond
/// `X₍₁₎ + S`, and the conditional survival of one observation given
/// `(X₍₁₎, S)` in between.
pub fn ue_reliability(stats: &SuffStats, t: i64) -> f64 {
    combinat::conditional_survival(stats, t)
}

/// Unbiased estimator of `R_s(t)` for `2 ≤ m < n`: the k-out-of-m binomial
/// sum over the component UE between `X₍₁₎` and `X₍₁₎ + S`.
pub fn ue_system_reliability(stats: &SuffStats, t: i64, spec: &SystemSpec) -> Result<f64> {
    if spec.m() < 2 || spec.m() >= stats.n() {
        return Err(Error::EstimatorDomain(format!(
            "system-reliability UE needs 2 <= m < n, got m={}, n={}",
            spec.m(),
            stats.n()
        )));
    }
    if t <= stats.xmin() {
        return Ok(1.0);
    }
    if t > stats.upper() {
        return Ok(0.0);
    }
    spec.system_reliability(ue_reliability(stats, t))
}

/// Naive unbiased estimator of `R(t)`: the fraction of sample values ≥ `t`.
pub fn naive_unbiased_reliability(sample: &CompleteSample, t: i64) -> f64 {
    let hits = sample.values().iter().filter(|&&x| x >= t).count();
    hits as f64 / sample.len() as f64
}

/// Shared shape of the stress-strength MLE: `ρ̂` from the two deviation
/// sums, `δ̂` from the two minima, then the branch structure of the exact
/// reliability formula with plug-in `θ̂`s.
fn stress_strength_mle_from_parts(
    xmin_x: i64,
    size_x: u64,
    s_x: u64,
    xmin_y: i64,
    size_y: u64,
    s_y: u64,
) -> f64 {
    let n1 = size_x as f64;
    let n2 = size_y as f64;
    let s1 = s_x as f64;
    let s2 = s_y as f64;
    let rho_hat = (n1 * n2 + n1 * s2) / (n1 * n2 + n1 * s2 + n2 * s1);
    let delta_hat = xmin_x - xmin_y;
    if delta_hat > 0 {
        rho_hat * plug_in_power(s2 / (n2 + s2), delta_hat)
    } else if delta_hat < 0 {
        1.0 - (1.0 - rho_hat) * plug_in_power(s1 / (n1 + s1), -delta_hat)
    } else {
        rho_hat
    }
}

/// MLE of the stress-strength reliability `R = P(X ≤ Y)` from complete
/// samples; `δ̂ = 0` returns `ρ̂`, the common limit of both branches.
pub fn mle_stress_strength(stats_x: &SuffStats, stats_y: &SuffStats) -> f64 {
    stress_strength_mle_from_parts(
        stats_x.xmin(),
        stats_x.n() as u64,
        stats_x.s(),
        stats_y.xmin(),
        stats_y.n() as u64,
        stats_y.s(),
    )
}

/// Censored-sample MLE of `R`: same branch structure with `(p, S*)` in place
/// of `(n, S)` on each side.
pub fn mle_stress_strength_censored(cstats_x: &CensoredStats, cstats_y: &CensoredStats) -> f64 {
    stress_strength_mle_from_parts(
        cstats_x.xmin(),
        cstats_x.p() as u64,
        cstats_x.s_star(),
        cstats_y.xmin(),
        cstats_y.p() as u64,
        cstats_y.s_star(),
    )
}

/// Which unbiased stress-strength estimator to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UeVariant {
    /// The three-case display as printed in the source derivation, leading
    /// `1/n₁` terms and overlapping summation ranges included. Can leave
    /// `[0, 1]`; kept so its bias can be quantified.
    AsPublished,
    /// The exact conditional expectation of `I(X₁ ≤ Y₁)` given both
    /// sufficient statistics; unbiased by construction. Default.
    ExactRb,
}

impl std::str::FromStr for UeVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-published" => Ok(UeVariant::AsPublished),
            "exact-rb" => Ok(UeVariant::ExactRb),
            other => Err(Error::invalid(
                "variant",
                format!("unknown stress-strength UE variant `{other}`"),
            )),
        }
    }
}

/// Unbiased estimator of `R = P(X ≤ Y)` given both sufficient statistics.
pub fn ue_stress_strength(stats_x: &SuffStats, stats_y: &SuffStats, variant: UeVariant) -> f64 {
    match variant {
        UeVariant::ExactRb => exact_rb_stress_strength(stats_x, stats_y),
        UeVariant::AsPublished => as_published_stress_strength(stats_x, stats_y),
    }
}

/// `Σ_x f(x | X₍₁₎, S₁) · P(Y ≥ x | Y₍₁₎, S₂)`.
fn exact_rb_stress_strength(stats_x: &SuffStats, stats_y: &SuffStats) -> f64 {
    let fx_table = combinat::ConditionalTable::new(stats_x);
    let g_table = combinat::ConditionalTable::new(stats_y);
    let mut total = 0.0;
    for x in stats_x.xmin()..=stats_x.upper() {
        let fx = fx_table.pmf(x);
        if fx == 0.0 {
            continue;
        }
        total += fx * g_table.survival(x);
    }
    total
}

/// The printed three-case display with `W₁ = X₍₁₎+S₁`, `W₂ = Y₍₁₎+S₂`,
/// evaluated verbatim.
fn as_published_stress_strength(stats_x: &SuffStats, stats_y: &SuffStats) -> f64 {
    let fx_table = combinat::ConditionalTable::new(stats_x);
    let g_table = combinat::ConditionalTable::new(stats_y);
    let f = |x: i64| fx_table.pmf(x);
    let g = |y: i64| g_table.pmf(y);
    let w1 = stats_x.upper();
    let w2 = stats_y.upper();
    let xm = stats_x.xmin();
    let ym = stats_y.xmin();
    let n1 = stats_x.n() as f64;

    let double_sum = |x_lo: i64, x_hi: i64| -> f64 {
        let mut acc = 0.0;
        for x in x_lo..=x_hi {
            let fx = f(x);
            if fx == 0.0 {
                continue;
            }
            let mut inner = 0.0;
            for y in x..=w2 {
                inner += g(y);
            }
            acc += fx * inner;
        }
        acc
    };

    match xm.cmp(&ym) {
        std::cmp::Ordering::Less => {
            let mid: f64 = (xm + 1..=ym).map(f).sum();
            1.0 / n1 + mid + double_sum(ym, w1.min(w2))
        }
        std::cmp::Ordering::Equal => 1.0 / n1 + double_sum(xm, w1.min(w2)),
        std::cmp::Ordering::Greater => {
            let head: f64 = (xm..=w2).map(g).sum::<f64>() / n1;
            head + double_sum(xm + 1, w1.min(w2))
        }
    }
}

/// Naive unbiased estimator of `R`: `(1/(n₁n₂))·Σᵢ Σⱼ I(xᵢ ≤ yⱼ)`.
/// `strict` replaces the comparison with `<` to mirror the printed display.
pub fn naive_unbiased_stress_strength(
    sample_x: &CompleteSample,
    sample_y: &CompleteSample,
    strict: bool,
) -> f64 {
    let mut hits = 0u64;
    for &x in sample_x.values() {
        for &y in sample_y.values() {
            let hit = if strict { x < y } else { x <= y };
            if hit {
                hits += 1;
            }
        }
    }
    hits as f64 / (sample_x.len() as u64 * sample_y.len() as u64) as f64
}
