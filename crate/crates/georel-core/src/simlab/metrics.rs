//! Aggregation metrics for the study engine: compensated sums, MSE and its
//! bias/variance decomposition, percent relative efficiency, histograms.

use crate::error::{Error, Result};

/// Neumaier-compensated running sum; order-insensitive enough that serial
/// reduction of parallel-computed replications is reproducible.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Mean, population variance, MSE against a known truth, and bias of a set
/// of estimates. `mse = variance + bias²` holds to rounding by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorStats {
    pub mean: f64,
    pub variance: f64,
    pub mse: f64,
    pub bias: f64,
}

impl EstimatorStats {
    pub fn from_estimates(values: &[f64], truth: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("estimates"));
        }
        let n = values.len() as f64;
        let mut sum = KahanSum::new();
        for &v in values {
            sum.add(v);
        }
        let mean = sum.value() / n;
        let mut var_sum = KahanSum::new();
        let mut mse_sum = KahanSum::new();
        for &v in values {
            var_sum.add((v - mean) * (v - mean));
            mse_sum.add((v - truth) * (v - truth));
        }
        Ok(EstimatorStats {
            mean,
            variance: var_sum.value() / n,
            mse: mse_sum.value() / n,
            bias: mean - truth,
        })
    }
}

/// Mean squared deviation from `truth`.
pub fn mse(values: &[f64], truth: f64) -> Result<f64> {
    Ok(EstimatorStats::from_estimates(values, truth)?.mse)
}

/// Percent relative efficiency of `target` against `baseline`:
/// `100·mse(baseline)/mse(target)`. Values below 100 mean the target is the
/// worse estimator. Equal zero MSEs compare as 100.
pub fn pre_of(target_mse: f64, baseline_mse: f64) -> f64 {
    if target_mse == 0.0 {
        if baseline_mse == 0.0 {
            100.0
        } else {
            f64::INFINITY
        }
    } else {
        100.0 * baseline_mse / target_mse
    }
}

/// Equal-width histogram over the data range.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `bins + 1` edges; the last bin is closed on the right.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Count-weighted mean of bin midpoints.
    pub fn weighted_mean(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            return f64::NAN;
        }
        let mut acc = KahanSum::new();
        for (i, &c) in self.counts.iter().enumerate() {
            let mid = 0.5 * (self.edges[i] + self.edges[i + 1]);
            acc.add(mid * c as f64);
        }
        acc.value() / total as f64
    }
}

/// Bin `values` into `bins` equal-width bins spanning the observed range.
/// A degenerate range puts everything in the first bin.
pub fn histogram(values: &[f64], bins: usize) -> Result<Histogram> {
    if values.is_empty() {
        return Err(Error::EmptyInput("histogram values"));
    }
    if bins == 0 {
        return Err(Error::invalid("bins", "need at least one bin"));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins)
        .map(|i| {
            if i == bins {
                hi
            } else {
                lo + width * i as f64
            }
        })
        .collect();
    let mut counts = vec![0u64; bins];
    for &v in values {
        let idx = if width > 0.0 {
            (((v - lo) / width) as usize).min(bins - 1)
        } else {
            0
        };
        counts[idx] += 1;
    }
    Ok(Histogram { edges, counts })
}

/// Sample skewness `m₃ / m₂^{3/2}` (population moments).
pub fn skewness(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput("skewness values"));
    }
    let n = values.len() as f64;
    let mut sum = KahanSum::new();
    for &v in values {
        sum.add(v);
    }
    let mean = sum.value() / n;
    let (mut m2, mut m3) = (KahanSum::new(), KahanSum::new());
    for &v in values {
        let d = v - mean;
        m2.add(d * d);
        m3.add(d * d * d);
    }
    let m2 = m2.value() / n;
    let m3 = m3.value() / n;
    Ok(m3 / m2.powf(1.5))
}
