//! Deterministic Monte Carlo study engine.
//!
//! Every study draws its replications from counter-based streams keyed by
//! `(master seed, replication index, role)`, computes per-replication
//! estimates in parallel, and reduces them serially with compensated
//! summation — so a study's output is bit-identical for any worker-thread
//! count. Censored replications with no observed failure are excluded from
//! censored aggregates and counted, never silently substituted.
//!
//! Efficiency conventions (also recorded in emitted table headers):
//! `pre_of(target, baseline) = 100·mse(baseline)/mse(target)`, so values
//! below 100 mean the target estimator is worse. Complete-vs-censored
//! columns use the complete-sample estimator as target; UE-vs-MLE columns
//! use the UE as target.

pub mod metrics;

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::combinat::SuffStats;
use crate::error::{Error, Result};
use crate::estimators::{self, CompleteSample, Method, UeVariant};
use crate::geomdist::{GeoParams, StressStrengthParams, SystemSpec};
use crate::stream::{RandomStream, Role};
pub use metrics::{EstimatorStats, Histogram, KahanSum};

/// Normal quantile for the 95% two-sided intervals used throughout.
pub const Z_95: f64 = 1.96;

/// Efficiency-map key: complete-sample MLE (target) vs censored-sample MLE.
pub const EFF_COMPLETE_VS_CENSORED: &str = "mle_complete_vs_censored";
/// Efficiency-map key: unbiased estimator (target) vs complete-sample MLE.
pub const EFF_UE_VS_MLE: &str = "ue_vs_mle";

/// One scenario of the single-population reliability study.
#[derive(Debug, Clone, Copy)]
pub struct ReliabilityScenario {
    pub params: GeoParams,
    pub n: u32,
    pub censor_at: i64,
    pub mission_time: i64,
    pub system: SystemSpec,
}

/// Which scenario field the study grid varies.
#[derive(Debug, Clone)]
pub enum ReliabilityAxis {
    MissionTime(Vec<i64>),
    MinWorking(Vec<u32>),
    CensorCycle(Vec<i64>),
    SampleSize(Vec<u32>),
    WarrantyOffset(Vec<u32>),
    SuccessProb(Vec<f64>),
}

impl ReliabilityAxis {
    pub fn len(&self) -> usize {
        match self {
            ReliabilityAxis::MissionTime(v) => v.len(),
            ReliabilityAxis::MinWorking(v) => v.len(),
            ReliabilityAxis::CensorCycle(v) => v.len(),
            ReliabilityAxis::SampleSize(v) => v.len(),
            ReliabilityAxis::WarrantyOffset(v) => v.len(),
            ReliabilityAxis::SuccessProb(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Column label for the varied quantity.
    pub fn label(&self) -> &'static str {
        match self {
            ReliabilityAxis::MissionTime(_) => "t",
            ReliabilityAxis::MinWorking(_) => "k",
            ReliabilityAxis::CensorCycle(_) => "c",
            ReliabilityAxis::SampleSize(_) => "n",
            ReliabilityAxis::WarrantyOffset(_) => "r",
            ReliabilityAxis::SuccessProb(_) => "theta",
        }
    }

    fn apply(&self, idx: usize, base: &ReliabilityScenario) -> Result<(f64, ReliabilityScenario)> {
        let mut sc = *base;
        let grid_value = match self {
            ReliabilityAxis::MissionTime(v) => {
                sc.mission_time = v[idx];
                v[idx] as f64
            }
            ReliabilityAxis::MinWorking(v) => {
                sc.system = SystemSpec::new(v[idx], base.system.m())?;
                v[idx] as f64
            }
            ReliabilityAxis::CensorCycle(v) => {
                sc.censor_at = v[idx];
                v[idx] as f64
            }
            ReliabilityAxis::SampleSize(v) => {
                if v[idx] == 0 {
                    return Err(Error::invalid("n", "sample size must be at least 1"));
                }
                sc.n = v[idx];
                v[idx] as f64
            }
            ReliabilityAxis::WarrantyOffset(v) => {
                sc.params = GeoParams::new(v[idx], base.params.theta())?;
                v[idx] as f64
            }
            ReliabilityAxis::SuccessProb(v) => {
                sc.params = GeoParams::new(base.params.r(), v[idx])?;
                v[idx]
            }
        };
        Ok((grid_value, sc))
    }
}

/// A full reliability-study definition: base scenario, grid, effort, seed.
#[derive(Debug, Clone)]
pub struct ReliabilityStudyConfig {
    pub scenario: ReliabilityScenario,
    pub axis: ReliabilityAxis,
    pub reps: u64,
    pub seed: u64,
}

/// Aggregated estimates of one target quantity at one grid point.
#[derive(Debug, Clone)]
pub struct MetricRow {
    pub true_value: f64,
    pub per_estimator: BTreeMap<Method, EstimatorStats>,
    pub efficiencies: BTreeMap<&'static str, f64>,
}

/// One grid point of the reliability study: component `R(t)` and system
/// `R_s(t)` blocks plus the censored-replication exclusion count.
#[derive(Debug, Clone)]
pub struct ReliabilityRow {
    pub grid_value: f64,
    pub component: MetricRow,
    pub system: MetricRow,
    pub censored_exclusions: u64,
}

struct ReliabilityRep {
    mle_r: f64,
    mle_rs: f64,
    ue_r: f64,
    ue_rs: Option<f64>,
    naive_r: f64,
    censored: Option<(f64, f64)>,
}

fn validate_reps(reps: u64) -> Result<()> {
    if reps < 1 {
        return Err(Error::invalid("reps", "need at least one replication"));
    }
    Ok(())
}

/// Run the component/system reliability study: per grid point, `reps`
/// replications of (complete MLE, censored MLE on the same draw, UE, naive
/// UE), aggregated into means, MSEs and percent relative efficiencies.
pub fn run_reliability_study(config: &ReliabilityStudyConfig) -> Result<Vec<ReliabilityRow>> {
    validate_reps(config.reps)?;
    if config.axis.is_empty() {
        return Err(Error::EmptyInput("study grid"));
    }
    (0..config.axis.len())
        .map(|idx| {
            let (grid_value, sc) = config.axis.apply(idx, &config.scenario)?;
            run_reliability_point(grid_value, &sc, config.reps, config.seed)
        })
        .collect()
}

fn run_reliability_point(
    grid_value: f64,
    sc: &ReliabilityScenario,
    reps: u64,
    seed: u64,
) -> Result<ReliabilityRow> {
    let t = sc.mission_time;
    let true_r = sc.params.reliability(t);
    let true_rs = sc.system.system_reliability(true_r)?;
    let ue_system_defined = sc.system.m() >= 2 && sc.system.m() < sc.n;

    let rep_results: Vec<Result<ReliabilityRep>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut stream = RandomStream::new(seed, rep, Role::Sample);
            let draws = sc.params.sample(sc.n as usize, &mut stream)?;
            let sample = CompleteSample::new(draws).expect("sampler output is a valid sample");
            let stats = sample.suff_stats();
            let censored = sample
                .censor_at(sc.censor_at)
                .stats()
                .ok()
                .map(|cstats| -> Result<(f64, f64)> {
                    Ok((
                        estimators::mle_reliability_censored(&cstats, t),
                        estimators::mle_system_reliability_censored(&cstats, t, &sc.system)?,
                    ))
                })
                .transpose()?;
            Ok(ReliabilityRep {
                mle_r: estimators::mle_reliability(&stats, t),
                mle_rs: estimators::mle_system_reliability(&stats, t, &sc.system)?,
                ue_r: estimators::ue_reliability(&stats, t),
                ue_rs: if ue_system_defined {
                    Some(estimators::ue_system_reliability(&stats, t, &sc.system)?)
                } else {
                    None
                },
                naive_r: estimators::naive_unbiased_reliability(&sample, t),
                censored,
            })
        })
        .collect();
    let rep_results: Vec<ReliabilityRep> = rep_results.into_iter().collect::<Result<_>>()?;

    let collect =
        |f: &dyn Fn(&ReliabilityRep) -> f64| -> Vec<f64> { rep_results.iter().map(f).collect() };
    let mle_r = EstimatorStats::from_estimates(&collect(&|r| r.mle_r), true_r)?;
    let mle_rs = EstimatorStats::from_estimates(&collect(&|r| r.mle_rs), true_rs)?;
    let ue_r = EstimatorStats::from_estimates(&collect(&|r| r.ue_r), true_r)?;
    let naive_r = EstimatorStats::from_estimates(&collect(&|r| r.naive_r), true_r)?;
    let ue_rs = if ue_system_defined {
        let vals: Vec<f64> = rep_results.iter().filter_map(|r| r.ue_rs).collect();
        Some(EstimatorStats::from_estimates(&vals, true_rs)?)
    } else {
        None
    };

    let cens_r: Vec<f64> = rep_results
        .iter()
        .filter_map(|r| r.censored.map(|(c, _)| c))
        .collect();
    let cens_rs: Vec<f64> = rep_results
        .iter()
        .filter_map(|r| r.censored.map(|(_, cs)| cs))
        .collect();
    let censored_exclusions = reps - cens_r.len() as u64;
    let (mle_cens_r, mle_cens_rs) = if cens_r.is_empty() {
        (None, None)
    } else {
        (
            Some(EstimatorStats::from_estimates(&cens_r, true_r)?),
            Some(EstimatorStats::from_estimates(&cens_rs, true_rs)?),
        )
    };

    let mut component = MetricRow {
        true_value: true_r,
        per_estimator: BTreeMap::new(),
        efficiencies: BTreeMap::new(),
    };
    component.per_estimator.insert(Method::Mle, mle_r);
    component.per_estimator.insert(Method::Ue, ue_r);
    component.per_estimator.insert(Method::Naive, naive_r);
    if let Some(c) = mle_cens_r {
        component.per_estimator.insert(Method::MleCensored, c);
        component
            .efficiencies
            .insert(EFF_COMPLETE_VS_CENSORED, metrics::pre_of(mle_r.mse, c.mse));
    }
    component
        .efficiencies
        .insert(EFF_UE_VS_MLE, metrics::pre_of(ue_r.mse, mle_r.mse));

    let mut system = MetricRow {
        true_value: true_rs,
        per_estimator: BTreeMap::new(),
        efficiencies: BTreeMap::new(),
    };
    system.per_estimator.insert(Method::Mle, mle_rs);
    if let Some(u) = ue_rs {
        system.per_estimator.insert(Method::Ue, u);
        system
            .efficiencies
            .insert(EFF_UE_VS_MLE, metrics::pre_of(u.mse, mle_rs.mse));
    }
    if let Some(c) = mle_cens_rs {
        system.per_estimator.insert(Method::MleCensored, c);
        system
            .efficiencies
            .insert(EFF_COMPLETE_VS_CENSORED, metrics::pre_of(mle_rs.mse, c.mse));
    }

    Ok(ReliabilityRow {
        grid_value,
        component,
        system,
        censored_exclusions,
    })
}

/// Per-replication UE draws of `R(t)` — the raw material of the histogram
/// study and any external binning.
pub fn ue_reliability_draws(
    params: GeoParams,
    n: u32,
    t: i64,
    reps: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    validate_reps(reps)?;
    if n == 0 {
        return Err(Error::invalid("n", "sample size must be at least 1"));
    }
    let results: Vec<Result<f64>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut stream = RandomStream::new(seed, rep, Role::Sample);
            let draws = params.sample(n as usize, &mut stream)?;
            let stats = CompleteSample::new(draws).expect("valid sample").suff_stats();
            Ok(estimators::ue_reliability(&stats, t))
        })
        .collect();
    results.into_iter().collect()
}

/// Confidence-interval study configuration for `R(t)` (normal-approximation
/// intervals with `v̂ = R̂(1-R̂)/(2n)`), over a grid of `θ` values.
#[derive(Debug, Clone)]
pub struct CiStudyConfig {
    pub r: u32,
    pub n: u32,
    pub mission_time: i64,
    pub theta_grid: Vec<f64>,
    pub reps: u64,
    pub seed: u64,
}

/// Aggregates for one estimator in a coverage study. `lcl`/`ucl` are
/// averages of the per-replication bounds; `coverage` is evaluated before
/// any clipping.
#[derive(Debug, Clone, Copy)]
pub struct CoverageRow {
    pub method: Method,
    pub true_value: f64,
    pub mean: f64,
    pub variance: f64,
    pub mse: f64,
    pub lcl: f64,
    pub ucl: f64,
    pub coverage: f64,
}

/// One grid point of a coverage study: UE and MLE rows side by side.
#[derive(Debug, Clone)]
pub struct CiPoint {
    pub grid_value: f64,
    pub ue: CoverageRow,
    pub mle: CoverageRow,
}

struct IntervalRep {
    estimate: f64,
    lcl: f64,
    ucl: f64,
    covered: bool,
}

fn aggregate_coverage(method: Method, reps: &[IntervalRep], true_value: f64) -> Result<CoverageRow> {
    let estimates: Vec<f64> = reps.iter().map(|r| r.estimate).collect();
    let stats = EstimatorStats::from_estimates(&estimates, true_value)?;
    let mut lcl = KahanSum::new();
    let mut ucl = KahanSum::new();
    let mut covered = 0u64;
    for r in reps {
        lcl.add(r.lcl);
        ucl.add(r.ucl);
        if r.covered {
            covered += 1;
        }
    }
    let n = reps.len() as f64;
    Ok(CoverageRow {
        method,
        true_value,
        mean: stats.mean,
        variance: stats.variance,
        mse: stats.mse,
        lcl: lcl.value() / n,
        ucl: ucl.value() / n,
        coverage: covered as f64 / n,
    })
}

fn wald_interval(estimate: f64, variance: f64, truth: f64) -> IntervalRep {
    let half = Z_95 * variance.max(0.0).sqrt();
    let (lcl, ucl) = (estimate - half, estimate + half);
    IntervalRep {
        estimate,
        lcl,
        ucl,
        covered: lcl <= truth && truth <= ucl,
    }
}

/// Run the `R(t)` coverage study: per replication, Wald intervals
/// `R̂ ± 1.96·√(R̂(1-R̂)/(2n))` for both the UE and the complete-sample MLE.
pub fn run_ci_study(config: &CiStudyConfig) -> Result<Vec<CiPoint>> {
    validate_reps(config.reps)?;
    if config.theta_grid.is_empty() {
        return Err(Error::EmptyInput("theta grid"));
    }
    if config.n == 0 {
        return Err(Error::invalid("n", "sample size must be at least 1"));
    }
    config
        .theta_grid
        .iter()
        .map(|&theta| {
            let params = GeoParams::new(config.r, theta)?;
            let truth = params.reliability(config.mission_time);
            let two_n = 2.0 * config.n as f64;
            let pairs: Vec<Result<(IntervalRep, IntervalRep)>> = (0..config.reps)
                .into_par_iter()
                .map(|rep| {
                    let mut stream = RandomStream::new(config.seed, rep, Role::Sample);
                    let draws = params.sample(config.n as usize, &mut stream)?;
                    let stats =
                        CompleteSample::new(draws).expect("valid sample").suff_stats();
                    let ue = estimators::ue_reliability(&stats, config.mission_time);
                    let mle = estimators::mle_reliability(&stats, config.mission_time);
                    Ok((
                        wald_interval(ue, ue * (1.0 - ue) / two_n, truth),
                        wald_interval(mle, mle * (1.0 - mle) / two_n, truth),
                    ))
                })
                .collect();
            let pairs: Vec<(IntervalRep, IntervalRep)> = pairs.into_iter().collect::<Result<_>>()?;
            let (ue_reps, mle_reps): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
            Ok(CiPoint {
                grid_value: theta,
                ue: aggregate_coverage(Method::Ue, &ue_reps, truth)?,
                mle: aggregate_coverage(Method::Mle, &mle_reps, truth)?,
            })
        })
        .collect()
}

/// Coverage study for the stress-strength reliability `R`, over `(r₁, r₂)`
/// pairs; interval variance comes from the delete-one two-sample jackknife.
#[derive(Debug, Clone)]
pub struct StressCiStudyConfig {
    pub pairs: Vec<(u32, u32)>,
    pub theta1: f64,
    pub theta2: f64,
    pub n1: u32,
    pub n2: u32,
    pub reps: u64,
    pub seed: u64,
}

/// One `(r₁, r₂)` pair of the stress-strength coverage study.
#[derive(Debug, Clone)]
pub struct StressCiPoint {
    pub r1: u32,
    pub r2: u32,
    pub ue: CoverageRow,
    pub mle: CoverageRow,
}

fn jackknife_variance(
    xs: &[i64],
    ys: &[i64],
    estimate: impl Fn(&SuffStats, &SuffStats) -> f64,
) -> f64 {
    let stats_of =
        |values: &[i64]| CompleteSample::new(values.to_vec()).expect("valid").suff_stats();
    let loo = |values: &[i64], skip: usize| -> Vec<i64> {
        values
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, &v)| v)
            .collect()
    };
    let stats_x = stats_of(xs);
    let stats_y = stats_of(ys);

    let mut total = 0.0;
    for (values, x_side) in [(xs, true), (ys, false)] {
        let n = values.len();
        if n < 2 {
            continue;
        }
        let loo_estimates: Vec<f64> = (0..n)
            .map(|i| {
                let reduced = stats_of(&loo(values, i));
                if x_side {
                    estimate(&reduced, &stats_y)
                } else {
                    estimate(&stats_x, &reduced)
                }
            })
            .collect();
        let mean = loo_estimates.iter().sum::<f64>() / n as f64;
        let ss: f64 = loo_estimates.iter().map(|v| (v - mean) * (v - mean)).sum();
        total += ss * (n - 1) as f64 / n as f64;
    }
    total
}

/// Run the stress-strength coverage study (UE = exact conditional
/// expectation, MLE = plug-in), jackknife variance on both.
pub fn run_stress_ci_study(config: &StressCiStudyConfig) -> Result<Vec<StressCiPoint>> {
    validate_reps(config.reps)?;
    if config.pairs.is_empty() {
        return Err(Error::EmptyInput("(r1, r2) pairs"));
    }
    if config.n1 < 2 || config.n2 < 2 {
        return Err(Error::invalid(
            "n",
            "jackknife intervals need n1 >= 2 and n2 >= 2",
        ));
    }
    config
        .pairs
        .iter()
        .map(|&(r1, r2)| {
            let stress = GeoParams::new(r1, config.theta1)?;
            let strength = GeoParams::new(r2, config.theta2)?;
            let truth = StressStrengthParams::new(stress, strength).reliability();
            let pairs: Vec<Result<(IntervalRep, IntervalRep)>> = (0..config.reps)
                .into_par_iter()
                .map(|rep| {
                    let mut sx = RandomStream::new(config.seed, rep, Role::Stress);
                    let mut sy = RandomStream::new(config.seed, rep, Role::Strength);
                    let xs = stress.sample(config.n1 as usize, &mut sx)?;
                    let ys = strength.sample(config.n2 as usize, &mut sy)?;
                    let stats_x = CompleteSample::new(xs.clone()).expect("valid").suff_stats();
                    let stats_y = CompleteSample::new(ys.clone()).expect("valid").suff_stats();

                    let ue_fn = |a: &SuffStats, b: &SuffStats| {
                        estimators::ue_stress_strength(a, b, UeVariant::ExactRb)
                    };
                    let mle_fn =
                        |a: &SuffStats, b: &SuffStats| estimators::mle_stress_strength(a, b);

                    let ue = ue_fn(&stats_x, &stats_y);
                    let mle = mle_fn(&stats_x, &stats_y);
                    Ok((
                        wald_interval(ue, jackknife_variance(&xs, &ys, ue_fn), truth),
                        wald_interval(mle, jackknife_variance(&xs, &ys, mle_fn), truth),
                    ))
                })
                .collect();
            let pairs: Vec<(IntervalRep, IntervalRep)> = pairs.into_iter().collect::<Result<_>>()?;
            let (ue_reps, mle_reps): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
            Ok(StressCiPoint {
                r1,
                r2,
                ue: aggregate_coverage(Method::ExactRb, &ue_reps, truth)?,
                mle: aggregate_coverage(Method::Mle, &mle_reps, truth)?,
            })
        })
        .collect()
}

/// Zero-covariance diagnostic configuration: coefficient vectors define
/// unbiased estimators of zero `U₀ = Σ cᵢXᵢ` (each vector must sum to 0),
/// and the study averages batch covariances `cov(1000·U₀, 1000·R̃_U(t))`.
#[derive(Debug, Clone)]
pub struct ZeroCovStudyConfig {
    pub params: GeoParams,
    pub n: u32,
    pub mission_time: i64,
    pub axis: ZeroCovAxis,
    pub coefficient_sets: Vec<Vec<i64>>,
    pub batches: u64,
    pub batch_size: u64,
    pub seed: u64,
}

/// Grid of the zero-covariance study: mission times at fixed `θ`, or `θ`
/// values at fixed mission time.
#[derive(Debug, Clone)]
pub enum ZeroCovAxis {
    MissionTime(Vec<i64>),
    SuccessProb(Vec<f64>),
}

impl ZeroCovAxis {
    pub fn len(&self) -> usize {
        match self {
            ZeroCovAxis::MissionTime(v) => v.len(),
            ZeroCovAxis::SuccessProb(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn label(&self) -> &'static str {
        match self {
            ZeroCovAxis::MissionTime(_) => "t",
            ZeroCovAxis::SuccessProb(_) => "theta",
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            ZeroCovAxis::MissionTime(v) => v.iter().map(|&t| t as f64).collect(),
            ZeroCovAxis::SuccessProb(v) => v.clone(),
        }
    }
}

/// One (coefficient vector, grid point) cell of the zero-covariance study.
#[derive(Debug, Clone, Copy)]
pub struct ZeroCovCell {
    /// Average over batches of `cov(1000·U₀, 1000·R̃_U(t))`.
    pub average_scaled_cov: f64,
    /// Mean batch covariance over its standard error (two-sided test of
    /// zero correlation across batches).
    pub z_value: f64,
    /// `|z| > 1.96`: the UE is correlated with this unbiased estimator of
    /// zero, ruling out UMVUE-ness.
    pub nonzero_flag: bool,
}

/// Zero-covariance study output: one row per coefficient vector, one column
/// per grid point, plus the true reliabilities for the final table row.
#[derive(Debug, Clone)]
pub struct ZeroCovTable {
    pub grid_values: Vec<f64>,
    pub grid_label: &'static str,
    pub true_values: Vec<f64>,
    /// `cells[vector_idx][grid_idx]`.
    pub cells: Vec<Vec<ZeroCovCell>>,
    /// Whether any cell flags nonzero correlation.
    pub any_nonzero: bool,
}

/// Run the zero-covariance diagnostic.
pub fn run_zero_covariance_study(config: &ZeroCovStudyConfig) -> Result<ZeroCovTable> {
    if config.batches < 2 {
        return Err(Error::invalid("batches", "need at least two batches"));
    }
    if config.batch_size < 2 {
        return Err(Error::invalid(
            "batch_size",
            "a covariance needs at least two pairs per batch",
        ));
    }
    if config.coefficient_sets.is_empty() {
        return Err(Error::EmptyInput("coefficient sets"));
    }
    if config.axis.is_empty() {
        return Err(Error::EmptyInput("study grid"));
    }
    for (i, coeffs) in config.coefficient_sets.iter().enumerate() {
        if coeffs.len() != config.n as usize {
            return Err(Error::invalid(
                "coefficients",
                format!(
                    "vector {i} has length {}, expected n = {}",
                    coeffs.len(),
                    config.n
                ),
            ));
        }
        let sum: i64 = coeffs.iter().sum();
        if sum != 0 {
            return Err(Error::invalid(
                "coefficients",
                format!("vector {i} sums to {sum}; unbiased estimators of zero need sum 0"),
            ));
        }
    }

    let grid_values = config.axis.values();
    let mut true_values = Vec::with_capacity(grid_values.len());
    let mut cells: Vec<Vec<ZeroCovCell>> =
        vec![Vec::with_capacity(grid_values.len()); config.coefficient_sets.len()];

    for gi in 0..config.axis.len() {
        let (params, t) = match &config.axis {
            ZeroCovAxis::MissionTime(ts) => (config.params, ts[gi]),
            ZeroCovAxis::SuccessProb(thetas) => (
                GeoParams::new(config.params.r(), thetas[gi])?,
                config.mission_time,
            ),
        };
        true_values.push(params.reliability(t));

        // per batch: one scaled covariance per coefficient vector, all from
        // the same draws
        let batch_covs: Vec<Result<Vec<f64>>> = (0..config.batches)
            .into_par_iter()
            .map(|batch| {
                let mut pairs: Vec<(Vec<f64>, f64)> =
                    Vec::with_capacity(config.batch_size as usize);
                for j in 0..config.batch_size {
                    let rep = batch * config.batch_size + j;
                    let mut stream = RandomStream::new(config.seed, rep, Role::Sample);
                    let draws = params.sample(config.n as usize, &mut stream)?;
                    let stats = CompleteSample::new(draws.clone()).expect("valid").suff_stats();
                    let ue = estimators::ue_reliability(&stats, t);
                    let u0s: Vec<f64> = config
                        .coefficient_sets
                        .iter()
                        .map(|c| {
                            c.iter()
                                .zip(&draws)
                                .map(|(&ci, &xi)| (ci * xi) as f64)
                                .sum()
                        })
                        .collect();
                    pairs.push((u0s, ue));
                }
                let b = config.batch_size as f64;
                let ue_mean = pairs.iter().map(|(_, u)| u).sum::<f64>() / b;
                Ok((0..config.coefficient_sets.len())
                    .map(|vi| {
                        let u_mean = pairs.iter().map(|(u, _)| u[vi]).sum::<f64>() / b;
                        let mut cov = KahanSum::new();
                        for (u0s, ue) in &pairs {
                            cov.add((u0s[vi] - u_mean) * (ue - ue_mean));
                        }
                        // sample covariance of (1000·U₀, 1000·R̃)
                        1_000_000.0 * cov.value() / (b - 1.0)
                    })
                    .collect())
            })
            .collect();
        let batch_covs: Vec<Vec<f64>> = batch_covs.into_iter().collect::<Result<_>>()?;

        for (vi, cell_row) in cells.iter_mut().enumerate() {
            let covs: Vec<f64> = batch_covs.iter().map(|row| row[vi]).collect();
            let k = covs.len() as f64;
            let mean = covs.iter().sum::<f64>() / k;
            let var = covs.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / (k - 1.0);
            let se = (var / k).sqrt();
            let z = if se > 0.0 { mean / se } else { 0.0 };
            cell_row.push(ZeroCovCell {
                average_scaled_cov: mean,
                z_value: z,
                nonzero_flag: z.abs() > Z_95,
            });
        }
    }

    let any_nonzero = cells.iter().flatten().any(|c| c.nonzero_flag);
    Ok(ZeroCovTable {
        grid_values,
        grid_label: config.axis.label(),
        true_values,
        cells,
        any_nonzero,
    })
}

/// Censoring-efficiency study for the stress-strength MLE: a matrix of
/// `100·MSE(censored)/MSE(complete)` over `(c₁, c₂)` grids.
#[derive(Debug, Clone)]
pub struct CensoringStudyConfig {
    pub model: StressStrengthParams,
    pub n1: u32,
    pub n2: u32,
    pub c1_grid: Vec<i64>,
    pub c2_grid: Vec<i64>,
    pub reps: u64,
    pub seed: u64,
}

/// One `(c₁, c₂)` cell of the censoring-efficiency matrix.
#[derive(Debug, Clone, Copy)]
pub struct CensoringCell {
    /// `100·MSE(censored MLE)/MSE(complete MLE)`; > 100 means censoring
    /// costs accuracy.
    pub efficiency: f64,
    /// Replications without an observed failure on one side, excluded from
    /// the censored aggregate.
    pub excluded: u64,
}

/// Censoring-efficiency study output.
#[derive(Debug, Clone)]
pub struct CensoringStudyResult {
    pub true_value: f64,
    pub c1_grid: Vec<i64>,
    pub c2_grid: Vec<i64>,
    /// `cells[c1_idx][c2_idx]`.
    pub cells: Vec<Vec<CensoringCell>>,
    pub complete_mse: f64,
}

/// Run the censoring-efficiency study. Each replication draws one pair of
/// complete samples; every `(c₁, c₂)` cell censors that same pair, so cells
/// differ only through censoring.
pub fn run_censoring_efficiency_study(
    config: &CensoringStudyConfig,
) -> Result<CensoringStudyResult> {
    validate_reps(config.reps)?;
    if config.c1_grid.is_empty() || config.c2_grid.is_empty() {
        return Err(Error::EmptyInput("censoring grid"));
    }
    if config.n1 == 0 || config.n2 == 0 {
        return Err(Error::invalid("n", "sample sizes must be at least 1"));
    }
    let truth = config.model.reliability();

    struct Rep {
        complete_sq: f64,
        censored_sq: Vec<Vec<Option<f64>>>,
    }

    let reps: Vec<Result<Rep>> = (0..config.reps)
        .into_par_iter()
        .map(|rep| {
            let mut sx = RandomStream::new(config.seed, rep, Role::Stress);
            let mut sy = RandomStream::new(config.seed, rep, Role::Strength);
            let xs = config.model.stress.sample(config.n1 as usize, &mut sx)?;
            let ys = config.model.strength.sample(config.n2 as usize, &mut sy)?;
            let sample_x = CompleteSample::new(xs).expect("valid");
            let sample_y = CompleteSample::new(ys).expect("valid");
            let est =
                estimators::mle_stress_strength(&sample_x.suff_stats(), &sample_y.suff_stats());
            let complete_sq = (est - truth) * (est - truth);
            let censored_sq = config
                .c1_grid
                .iter()
                .map(|&c1| {
                    let cx = sample_x.censor_at(c1).stats();
                    config
                        .c2_grid
                        .iter()
                        .map(|&c2| {
                            let cy = sample_y.censor_at(c2).stats();
                            match (&cx, cy) {
                                (Ok(cx), Ok(cy)) => {
                                    let e = estimators::mle_stress_strength_censored(cx, &cy);
                                    Some((e - truth) * (e - truth))
                                }
                                _ => None,
                            }
                        })
                        .collect()
                })
                .collect();
            Ok(Rep {
                complete_sq,
                censored_sq,
            })
        })
        .collect();
    let reps: Vec<Rep> = reps.into_iter().collect::<Result<_>>()?;

    let mut complete_mse = KahanSum::new();
    for r in &reps {
        complete_mse.add(r.complete_sq);
    }
    let complete_mse = complete_mse.value() / reps.len() as f64;

    let cells: Vec<Vec<CensoringCell>> = (0..config.c1_grid.len())
        .map(|i| {
            (0..config.c2_grid.len())
                .map(|j| {
                    let mut acc = KahanSum::new();
                    let mut kept = 0u64;
                    for r in &reps {
                        if let Some(sq) = r.censored_sq[i][j] {
                            acc.add(sq);
                            kept += 1;
                        }
                    }
                    let censored_mse = if kept > 0 {
                        acc.value() / kept as f64
                    } else {
                        f64::NAN
                    };
                    CensoringCell {
                        efficiency: metrics::pre_of(complete_mse, censored_mse),
                        excluded: config.reps - kept,
                    }
                })
                .collect()
        })
        .collect();

    Ok(CensoringStudyResult {
        true_value: truth,
        c1_grid: config.c1_grid.clone(),
        c2_grid: config.c2_grid.clone(),
        cells,
        complete_mse,
    })
}

/// Stress-strength MSE study over `(r₁, r₂)` grids at a fixed `θ` pair.
#[derive(Debug, Clone)]
pub struct StressMseStudyConfig {
    pub theta1: f64,
    pub theta2: f64,
    pub r1_grid: Vec<u32>,
    pub r2_grid: Vec<u32>,
    pub n1: u32,
    pub n2: u32,
    pub reps: u64,
    pub seed: u64,
    pub ue_variant: UeVariant,
}

/// One `(r₂ row, r₁ column)` cell: true value plus MLE, UE and naive
/// aggregates on common draws.
#[derive(Debug, Clone, Copy)]
pub struct StressMseCell {
    pub true_value: f64,
    pub mle: EstimatorStats,
    pub ue: EstimatorStats,
    pub naive: EstimatorStats,
}

/// Stress-strength MSE study output; `cells[r2_idx][r1_idx]`.
#[derive(Debug, Clone)]
pub struct StressMseResult {
    pub r1_grid: Vec<u32>,
    pub r2_grid: Vec<u32>,
    pub cells: Vec<Vec<StressMseCell>>,
}

/// Run the stress-strength MSE study.
pub fn run_stress_mse_study(config: &StressMseStudyConfig) -> Result<StressMseResult> {
    validate_reps(config.reps)?;
    if config.r1_grid.is_empty() || config.r2_grid.is_empty() {
        return Err(Error::EmptyInput("r grid"));
    }
    if config.n1 == 0 || config.n2 == 0 {
        return Err(Error::invalid("n", "sample sizes must be at least 1"));
    }
    let cells = config
        .r2_grid
        .iter()
        .map(|&r2| {
            config
                .r1_grid
                .iter()
                .map(|&r1| run_stress_mse_cell(config, r1, r2))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StressMseResult {
        r1_grid: config.r1_grid.clone(),
        r2_grid: config.r2_grid.clone(),
        cells,
    })
}

fn run_stress_mse_cell(config: &StressMseStudyConfig, r1: u32, r2: u32) -> Result<StressMseCell> {
    let stress = GeoParams::new(r1, config.theta1)?;
    let strength = GeoParams::new(r2, config.theta2)?;
    let truth = StressStrengthParams::new(stress, strength).reliability();
    let triples: Vec<Result<(f64, f64, f64)>> = (0..config.reps)
        .into_par_iter()
        .map(|rep| {
            let mut sx = RandomStream::new(config.seed, rep, Role::Stress);
            let mut sy = RandomStream::new(config.seed, rep, Role::Strength);
            let xs = stress.sample(config.n1 as usize, &mut sx)?;
            let ys = strength.sample(config.n2 as usize, &mut sy)?;
            let sample_x = CompleteSample::new(xs).expect("valid");
            let sample_y = CompleteSample::new(ys).expect("valid");
            let stats_x = sample_x.suff_stats();
            let stats_y = sample_y.suff_stats();
            Ok((
                estimators::mle_stress_strength(&stats_x, &stats_y),
                estimators::ue_stress_strength(&stats_x, &stats_y, config.ue_variant),
                estimators::naive_unbiased_stress_strength(&sample_x, &sample_y, false),
            ))
        })
        .collect();
    let triples: Vec<(f64, f64, f64)> = triples.into_iter().collect::<Result<_>>()?;
    let mles: Vec<f64> = triples.iter().map(|t| t.0).collect();
    let ues: Vec<f64> = triples.iter().map(|t| t.1).collect();
    let naives: Vec<f64> = triples.iter().map(|t| t.2).collect();
    Ok(StressMseCell {
        true_value: truth,
        mle: EstimatorStats::from_estimates(&mles, truth)?,
        ue: EstimatorStats::from_estimates(&ues, truth)?,
        naive: EstimatorStats::from_estimates(&naives, truth)?,
    })
}

/// Monte Carlo standard error of an estimator's mean over `reps`
/// replications, from its aggregated stats.
pub fn mc_standard_error(stats: &EstimatorStats, reps: u64) -> f64 {
    (stats.variance / reps as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_scenario() -> ReliabilityScenario {
        ReliabilityScenario {
            params: GeoParams::new(15, 0.8).unwrap(),
            n: 20,
            censor_at: 25,
            mission_time: 25,
            system: SystemSpec::new(2, 8).unwrap(),
        }
    }

    #[test]
    fn reliability_study_truths_are_exact() {
        let config = ReliabilityStudyConfig {
            scenario: small_scenario(),
            axis: ReliabilityAxis::MissionTime(vec![16, 25]),
            reps: 50,
            seed: 7,
        };
        let rows = run_reliability_study(&config).unwrap();
        assert_eq!(rows.len(), 2);
        assert!((rows[0].component.true_value - 0.8).abs() < 1e-12);
        assert!((rows[1].component.true_value - 0.10737).abs() < 1e-5);
        assert!((rows[1].system.true_value - 0.20909).abs() < 1e-5);
        for row in &rows {
            for stats in row.component.per_estimator.values() {
                assert!((stats.mse - (stats.variance + stats.bias * stats.bias)).abs() < 1e-9);
            }
            assert!(row.component.per_estimator.contains_key(&Method::Naive));
            assert!(row.system.per_estimator.contains_key(&Method::Ue));
            assert!(row.component.efficiencies.contains_key(EFF_UE_VS_MLE));
        }
    }

    #[test]
    fn single_replication_mean_is_the_estimate() {
        let config = ReliabilityStudyConfig {
            scenario: small_scenario(),
            axis: ReliabilityAxis::MissionTime(vec![25]),
            reps: 1,
            seed: 3,
        };
        let rows = run_reliability_study(&config).unwrap();
        let mle = rows[0].component.per_estimator[&Method::Mle];
        assert_eq!(mle.variance, 0.0);
        let err = mle.mean - rows[0].component.true_value;
        assert!((mle.mse - err * err).abs() < 1e-15);
    }

    #[test]
    fn study_is_deterministic_across_thread_counts() {
        let config = ReliabilityStudyConfig {
            scenario: small_scenario(),
            axis: ReliabilityAxis::MissionTime(vec![20, 25, 30]),
            reps: 200,
            seed: 42,
        };
        let run_with = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| run_reliability_study(&config).unwrap())
        };
        let a = run_with(1);
        let b = run_with(4);
        assert_eq!(a.len(), b.len());
        for (ra, rb) in a.iter().zip(&b) {
            for (ka, kb) in ra.component.per_estimator.iter().zip(&rb.component.per_estimator) {
                assert_eq!(ka.0, kb.0);
                assert_eq!(ka.1.mean.to_bits(), kb.1.mean.to_bits());
                assert_eq!(ka.1.mse.to_bits(), kb.1.mse.to_bits());
            }
        }
    }

    #[test]
    fn ue_system_is_dropped_when_m_not_below_n() {
        let mut sc = small_scenario();
        sc.n = 8; // m = 8 is not < n
        let config = ReliabilityStudyConfig {
            scenario: sc,
            axis: ReliabilityAxis::MissionTime(vec![25]),
            reps: 10,
            seed: 1,
        };
        let rows = run_reliability_study(&config).unwrap();
        assert!(!rows[0].system.per_estimator.contains_key(&Method::Ue));
        assert!(rows[0].component.per_estimator.contains_key(&Method::Ue));
    }

    #[test]
    fn config_validation() {
        let config = ReliabilityStudyConfig {
            scenario: small_scenario(),
            axis: ReliabilityAxis::MissionTime(vec![]),
            reps: 10,
            seed: 1,
        };
        assert!(run_reliability_study(&config).is_err());
        let config = ReliabilityStudyConfig {
            scenario: small_scenario(),
            axis: ReliabilityAxis::MissionTime(vec![25]),
            reps: 0,
            seed: 1,
        };
        assert!(run_reliability_study(&config).is_err());
        let config = ReliabilityStudyConfig {
            scenario: small_scenario(),
            axis: ReliabilityAxis::SuccessProb(vec![1.5]),
            reps: 5,
            seed: 1,
        };
        assert!(run_reliability_study(&config).is_err());
    }

    #[test]
    fn ci_study_reports_sane_rows() {
        let config = CiStudyConfig {
            r: 15,
            n: 20,
            mission_time: 25,
            theta_grid: vec![0.8],
            reps: 300,
            seed: 11,
        };
        let points = run_ci_study(&config).unwrap();
        let p = &points[0];
        assert!((p.ue.true_value - 0.10737).abs() < 1e-5);
        assert!(p.ue.lcl <= p.ue.ucl);
        assert!((0.0..=1.0).contains(&p.ue.coverage));
        assert!((0.0..=1.0).contains(&p.mle.coverage));
        // UE is unbiased: its mean should track truth even at 300 reps
        let se = (p.ue.variance / config.reps as f64).sqrt();
        assert!((p.ue.mean - p.ue.true_value).abs() < 5.0 * se);
    }

    #[test]
    fn ci_study_single_rep_coverage_is_binary() {
        let config = CiStudyConfig {
            r: 15,
            n: 20,
            mission_time: 25,
            theta_grid: vec![0.8],
            reps: 1,
            seed: 5,
        };
        let points = run_ci_study(&config).unwrap();
        let c = points[0].ue.coverage;
        assert!(c == 0.0 || c == 1.0);
    }

    #[test]
    fn stress_ci_study_runs() {
        let config = StressCiStudyConfig {
            pairs: vec![(5, 5)],
            theta1: 0.9,
            theta2: 0.9,
            n1: 10,
            n2: 10,
            reps: 50,
            seed: 23,
        };
        let points = run_stress_ci_study(&config).unwrap();
        let p = &points[0];
        assert!((p.ue.true_value - 0.526316).abs() < 1e-5);
        assert!(p.ue.lcl <= p.ue.ucl);
        assert!((0.0..=1.0).contains(&p.ue.coverage));
        // jackknife intervals should usually cover at these settings
        assert!(p.ue.coverage > 0.5);

        let bad = StressCiStudyConfig {
            n1: 1,
            ..config.clone()
        };
        assert!(run_stress_ci_study(&bad).is_err());
    }

    #[test]
    fn zero_cov_study_shapes_and_validation() {
        let params = GeoParams::new(15, 0.8).unwrap();
        let config = ZeroCovStudyConfig {
            params,
            n: 10,
            mission_time: 25,
            axis: ZeroCovAxis::MissionTime(vec![20, 25]),
            coefficient_sets: vec![vec![1, -1, 1, -1, 1, -1, 1, -1, 1, -1], vec![0; 10]],
            batches: 20,
            batch_size: 10,
            seed: 9,
        };
        let table = run_zero_covariance_study(&config).unwrap();
        assert_eq!(table.cells.len(), 2);
        assert_eq!(table.cells[0].len(), 2);
        assert!(table
            .cells
            .iter()
            .flatten()
            .all(|c| c.average_scaled_cov.is_finite()));
        // the all-zero vector gives U₀ ≡ 0 and exactly zero covariance
        assert_eq!(table.cells[1][0].average_scaled_cov, 0.0);
        assert!(!table.cells[1][0].nonzero_flag);
        assert!((table.true_values[1] - 0.10737).abs() < 1e-5);

        // vectors summing to 1 are rejected
        let mut bad = config.clone();
        bad.coefficient_sets = vec![vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 0]];
        assert!(run_zero_covariance_study(&bad).is_err());
        // wrong length rejected
        let mut bad = config.clone();
        bad.coefficient_sets = vec![vec![1, -1]];
        assert!(run_zero_covariance_study(&bad).is_err());
    }

    #[test]
    fn censoring_study_matrix_shape() {
        let model = StressStrengthParams::new(
            GeoParams::new(5, 0.8).unwrap(),
            GeoParams::new(10, 0.8).unwrap(),
        );
        let config = CensoringStudyConfig {
            model,
            n1: 10,
            n2: 10,
            c1_grid: vec![10, 25],
            c2_grid: vec![15, 30],
            reps: 200,
            seed: 13,
        };
        let result = run_censoring_efficiency_study(&config).unwrap();
        assert!((result.true_value - 0.8543644).abs() < 1e-6);
        assert_eq!(result.cells.len(), 2);
        assert_eq!(result.cells[0].len(), 2);
        for row in &result.cells {
            for cell in row {
                assert!(cell.efficiency.is_finite());
                assert!(cell.efficiency > 0.0);
            }
        }
    }

    #[test]
    fn mle_mean_tracks_published_average() {
        // base configuration at t=25: published complete-MLE averages sit
        // near 0.106 over 1e4 replications
        let config = ReliabilityStudyConfig {
            scenario: small_scenario(),
            axis: ReliabilityAxis::MissionTime(vec![25]),
            reps: 10_000,
            seed: 99,
        };
        let rows = run_reliability_study(&config).unwrap();
        let mle = rows[0].component.per_estimator[&Method::Mle];
        assert!((mle.mean - 0.10622).abs() < 0.01, "mle mean {}", mle.mean);
        assert_eq!(rows[0].censored_exclusions, 0);
    }

    #[test]
    fn censoring_efficiency_is_exactly_100_when_nothing_censors() {
        // censoring cycles far beyond the population mean observe every
        // failure, so S* = S and the censored MLE coincides with the
        // complete one
        let model = StressStrengthParams::new(
            GeoParams::new(5, 0.8).unwrap(),
            GeoParams::new(10, 0.8).unwrap(),
        );
        let config = CensoringStudyConfig {
            model,
            n1: 10,
            n2: 10,
            c1_grid: vec![500],
            c2_grid: vec![500],
            reps: 200,
            seed: 3,
        };
        let result = run_censoring_efficiency_study(&config).unwrap();
        assert_eq!(result.cells[0][0].efficiency, 100.0);
        assert_eq!(result.cells[0][0].excluded, 0);
    }

    #[test]
    fn censoring_single_rep_is_finite() {
        let model = StressStrengthParams::new(
            GeoParams::new(5, 0.8).unwrap(),
            GeoParams::new(10, 0.8).unwrap(),
        );
        let config = CensoringStudyConfig {
            model,
            n1: 10,
            n2: 10,
            c1_grid: vec![12],
            c2_grid: vec![18],
            reps: 1,
            seed: 21,
        };
        let result = run_censoring_efficiency_study(&config).unwrap();
        assert!(result.cells[0][0].efficiency.is_finite());
    }

    #[test]
    fn stress_mse_diagonal_truth_is_symmetric_closed_form() {
        let config = StressMseStudyConfig {
            theta1: 0.5,
            theta2: 0.5,
            r1_grid: vec![5, 10],
            r2_grid: vec![5, 10],
            n1: 10,
            n2: 10,
            reps: 100,
            seed: 17,
            ue_variant: UeVariant::ExactRb,
        };
        let result = run_stress_mse_study(&config).unwrap();
        // r1 = r2, θ1 = θ2 = θ: true R = 1/(1+θ)
        for i in 0..2 {
            assert!((result.cells[i][i].true_value - 1.0 / 1.5).abs() < 1e-12);
        }
        assert!((result.cells[0][1].true_value - 0.020833).abs() < 1e-5);
        assert!((result.cells[1][0].true_value - 0.989583).abs() < 1e-5);
        for row in &result.cells {
            for cell in row {
                for st in [cell.mle, cell.ue, cell.naive] {
                    assert!(st.mean.is_finite());
                    assert!((st.mse - (st.variance + st.bias * st.bias)).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn stress_mse_study_quantifies_as_published_bias() {
        // the exact conditional expectation is unbiased; the as-published
        // display is not, and the study must expose that difference
        let base = StressMseStudyConfig {
            theta1: 0.5,
            theta2: 0.5,
            r1_grid: vec![5],
            r2_grid: vec![10],
            n1: 10,
            n2: 10,
            reps: 2000,
            seed: 31,
            ue_variant: UeVariant::ExactRb,
        };
        let exact = run_stress_mse_study(&base).unwrap().cells[0][0];
        let published = run_stress_mse_study(&StressMseStudyConfig {
            ue_variant: UeVariant::AsPublished,
            ..base.clone()
        })
        .unwrap()
        .cells[0][0];

        let se_exact = mc_standard_error(&exact.ue, 2000);
        assert!(exact.ue.bias.abs() < 4.0 * se_exact, "exact-rb bias {}", exact.ue.bias);
        let se_published = mc_standard_error(&published.ue, 2000);
        assert!(
            published.ue.bias.abs() > 10.0 * se_published,
            "as-published bias {} indistinguishable from zero",
            published.ue.bias
        );
        assert!(published.ue.mse > exact.ue.mse * 10.0);
    }

    #[test]
    fn ue_draws_are_deterministic_and_bounded() {
        let params = GeoParams::new(15, 0.96).unwrap();
        let a = ue_reliability_draws(params, 20, 25, 100, 77).unwrap();
        let b = ue_reliability_draws(params, 20, 25, 100, 77).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|v| (0.0..=1.0).contains(v)));
    }
}
