//! Declarative study specifications for `georel simulate`.
//!
//! A spec is a JSON object selecting a study kind and its parameters; all
//! semantic violations are collected and reported together before exit.
//! Example:
//!
//! ```json
//! {
//!   "study": "reliability",
//!   "params": { "r": 15, "theta": 0.8 },
//!   "n": 20, "censor_at": 25, "mission_time": 25,
//!   "system": { "k": 2, "m": 8 },
//!   "axis": { "kind": "sample-size", "values": [10, 20, 50, 100, 200] },
//!   "reps": 10000, "seed": 42,
//!   "output": "table4.csv"
//! }
//! ```

use serde::{Deserialize, Serialize};

use georel_core::estimators::UeVariant;
use georel_core::geomdist::{GeoParams, StressStrengthParams, SystemSpec};
use georel_core::simlab::{
    CensoringStudyConfig, CiStudyConfig, ReliabilityAxis, ReliabilityScenario,
    ReliabilityStudyConfig, StressCiStudyConfig, StressMseStudyConfig, ZeroCovAxis,
    ZeroCovStudyConfig,
};

use crate::error::{CliError, Result};
use crate::tables::{self, DEFAULT_SEED};

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub r: u32,
    pub theta: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpecJson {
    pub k: u32,
    pub m: u32,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    /// mission-time | min-working | censor-cycle | sample-size |
    /// warranty-offset | success-prob
    pub kind: String,
    pub values: Vec<f64>,
}

/// The raw study-spec file. Field use depends on `study`:
/// `reliability`, `ci`, `zero-covariance`, `censoring-efficiency`,
/// `stress-mse`, `stress-ci`.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StudySpecFile {
    pub study: String,
    pub output: Option<String>,
    pub seed: Option<u64>,
    pub reps: Option<u64>,

    // single-population studies
    pub params: Option<ParamsSpec>,
    pub n: Option<u32>,
    pub censor_at: Option<i64>,
    pub mission_time: Option<i64>,
    pub system: Option<SystemSpecJson>,
    pub axis: Option<AxisSpec>,
    pub theta_grid: Option<Vec<f64>>,
    pub coefficients: Option<Vec<Vec<i64>>>,
    pub batches: Option<u64>,
    pub batch_size: Option<u64>,

    // stress-strength studies
    pub stress: Option<ParamsSpec>,
    pub strength: Option<ParamsSpec>,
    pub n1: Option<u32>,
    pub n2: Option<u32>,
    pub c1_grid: Option<Vec<i64>>,
    pub c2_grid: Option<Vec<i64>>,
    pub r1_grid: Option<Vec<u32>>,
    pub r2_grid: Option<Vec<u32>>,
    pub theta1: Option<f64>,
    pub theta2: Option<f64>,
    pub pairs: Option<Vec<(u32, u32)>>,
    pub variant: Option<String>,
}

/// A validated, runnable study.
#[derive(Debug, Clone)]
pub enum Study {
    Reliability(ReliabilityStudyConfig),
    Ci(CiStudyConfig),
    StressCi(StressCiStudyConfig),
    ZeroCovariance(ZeroCovStudyConfig),
    CensoringEfficiency(CensoringStudyConfig),
    StressMse(StressMseStudyConfig),
}

impl StudySpecFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| CliError::input(format!("study spec does not parse: {e}")))
    }

    /// Validate every field, collecting all violations before failing.
    pub fn validate(&self) -> Result<Study> {
        let mut errors: Vec<String> = Vec::new();
        let seed = self.seed.unwrap_or(DEFAULT_SEED);
        let reps = self.reps.unwrap_or(10_000);
        if self.reps == Some(0) {
            errors.push("reps: must be at least 1".into());
        }
        if self.output.is_none() {
            errors.push("output: required (path for the CSV; the run manifest sits next to it)".into());
        }

        let study = self.build(seed, reps.max(1), &mut errors);
        match study {
            Some(study) if errors.is_empty() => Ok(study),
            _ => {
                if errors.is_empty() {
                    errors.push("study spec is incomplete".into());
                }
                Err(CliError::input(format!(
                    "study spec has {} problem(s):\n  - {}",
                    errors.len(),
                    errors.join("\n  - ")
                )))
            }
        }
    }

    fn geo(&self, spec: &ParamsSpec, what: &str, errors: &mut Vec<String>) -> Option<GeoParams> {
        match GeoParams::new(spec.r, spec.theta) {
            Ok(p) => Some(p),
            Err(e) => {
                errors.push(format!("{what}: {e}"));
                None
            }
        }
    }

    fn require<T: Clone>(
        field: &Option<T>,
        name: &str,
        errors: &mut Vec<String>,
    ) -> Option<T> {
        match field {
            Some(v) => Some(v.clone()),
            None => {
                errors.push(format!("{name}: required for this study kind"));
                None
            }
        }
    }

    fn build(&self, seed: u64, reps: u64, errors: &mut Vec<String>) -> Option<Study> {
        match self.study.as_str() {
            "reliability" => {
                let params = Self::require(&self.params, "params", errors)
                    .and_then(|p| self.geo(&p, "params", errors));
                let n = Self::require(&self.n, "n", errors);
                let censor_at = Self::require(&self.censor_at, "censor_at", errors);
                let mission_time = Self::require(&self.mission_time, "mission_time", errors);
                let system = Self::require(&self.system, "system", errors).and_then(|s| {
                    match SystemSpec::new(s.k, s.m) {
                        Ok(sp) => Some(sp),
                        Err(e) => {
                            errors.push(format!("system: {e}"));
                            None
                        }
                    }
                });
                let axis = Self::require(&self.axis, "axis", errors)
                    .and_then(|a| parse_axis(&a, errors));
                if let Some(n) = n {
                    if n == 0 {
                        errors.push("n: must be at least 1".into());
                    }
                }
                Some(Study::Reliability(ReliabilityStudyConfig {
                    scenario: ReliabilityScenario {
                        params: params?,
                        n: n?,
                        censor_at: censor_at?,
                        mission_time: mission_time?,
                        system: system?,
                    },
                    axis: axis?,
                    reps,
                    seed,
                }))
            }
            "ci" => {
                let params = Self::require(&self.params, "params", errors);
                let n = Self::require(&self.n, "n", errors);
                let mission_time = Self::require(&self.mission_time, "mission_time", errors);
                let theta_grid = Self::require(&self.theta_grid, "theta_grid", errors);
                if let Some(grid) = &theta_grid {
                    for &th in grid {
                        if !(th > 0.0 && th < 1.0) {
                            errors.push(format!("theta_grid: {th} outside (0, 1)"));
                        }
                    }
                }
                Some(Study::Ci(CiStudyConfig {
                    r: params.as_ref()?.r,
                    n: n?,
                    mission_time: mission_time?,
                    theta_grid: theta_grid?,
                    reps,
                    seed,
                }))
            }
            "stress-ci" => {
                let pairs = Self::require(&self.pairs, "pairs", errors);
                let theta1 = Self::require(&self.theta1, "theta1", errors);
                let theta2 = Self::require(&self.theta2, "theta2", errors);
                for (name, th) in [("theta1", &theta1), ("theta2", &theta2)] {
                    if let Some(th) = th {
                        if !(*th > 0.0 && *th < 1.0) {
                            errors.push(format!("{name}: {th} outside (0, 1)"));
                        }
                    }
                }
                Some(Study::StressCi(StressCiStudyConfig {
                    pairs: pairs?,
                    theta1: theta1?,
                    theta2: theta2?,
                    n1: self.n1.unwrap_or(10),
                    n2: self.n2.unwrap_or(10),
                    reps,
                    seed,
                }))
            }
            "zero-covariance" => {
                let params = Self::require(&self.params, "params", errors)
                    .and_then(|p| self.geo(&p, "params", errors));
                let n = Self::require(&self.n, "n", errors);
                let axis = Self::require(&self.axis, "axis", errors).and_then(|a| {
                    match parse_axis(&a, errors)? {
                        ReliabilityAxis::MissionTime(v) => Some(ZeroCovAxis::MissionTime(v)),
                        ReliabilityAxis::SuccessProb(v) => Some(ZeroCovAxis::SuccessProb(v)),
                        _ => {
                            errors.push(
                                "axis: zero-covariance studies vary mission-time or success-prob"
                                    .into(),
                            );
                            None
                        }
                    }
                });
                let coefficients = Self::require(&self.coefficients, "coefficients", errors);
                if let (Some(n), Some(sets)) = (&n, &coefficients) {
                    for (i, set) in sets.iter().enumerate() {
                        if set.len() != *n as usize {
                            errors.push(format!(
                                "coefficients[{i}]: length {} does not match n = {n}",
                                set.len()
                            ));
                        }
                        if set.iter().sum::<i64>() != 0 {
                            errors.push(format!("coefficients[{i}]: must sum to 0"));
                        }
                    }
                }
                Some(Study::ZeroCovariance(ZeroCovStudyConfig {
                    params: params?,
                    n: n?,
                    mission_time: self.mission_time.unwrap_or(25),
                    axis: axis?,
                    coefficient_sets: coefficients?,
                    batches: self.batches.unwrap_or(1000),
                    batch_size: self.batch_size.unwrap_or(100),
                    seed,
                }))
            }
            "censoring-efficiency" => {
                let stress = Self::require(&self.stress, "stress", errors)
                    .and_then(|p| self.geo(&p, "stress", errors));
                let strength = Self::require(&self.strength, "strength", errors)
                    .and_then(|p| self.geo(&p, "strength", errors));
                let c1_grid = Self::require(&self.c1_grid, "c1_grid", errors);
                let c2_grid = Self::require(&self.c2_grid, "c2_grid", errors);
                for (name, grid) in [("c1_grid", &c1_grid), ("c2_grid", &c2_grid)] {
                    if grid.as_ref().is_some_and(|g| g.is_empty()) {
                        errors.push(format!("{name}: must be nonempty"));
                    }
                }
                Some(Study::CensoringEfficiency(CensoringStudyConfig {
                    model: StressStrengthParams::new(stress?, strength?),
                    n1: self.n1.unwrap_or(10),
                    n2: self.n2.unwrap_or(10),
                    c1_grid: c1_grid?,
                    c2_grid: c2_grid?,
                    reps,
                    seed,
                }))
            }
            "stress-mse" => {
                let theta1 = Self::require(&self.theta1, "theta1", errors);
                let theta2 = Self::require(&self.theta2, "theta2", errors);
                for (name, th) in [("theta1", &theta1), ("theta2", &theta2)] {
                    if let Some(th) = th {
                        if !(*th > 0.0 && *th < 1.0) {
                            errors.push(format!("{name}: {th} outside (0, 1)"));
                        }
                    }
                }
                let r1_grid = Self::require(&self.r1_grid, "r1_grid", errors);
                let r2_grid = Self::require(&self.r2_grid, "r2_grid", errors);
                let variant = match self.variant.as_deref() {
                    None => Some(UeVariant::ExactRb),
                    Some(text) => match text.parse::<UeVariant>() {
                        Ok(v) => Some(v),
                        Err(e) => {
                            errors.push(format!("variant: {e}"));
                            None
                        }
                    },
                };
                Some(Study::StressMse(StressMseStudyConfig {
                    theta1: theta1?,
                    theta2: theta2?,
                    r1_grid: r1_grid?,
                    r2_grid: r2_grid?,
                    n1: self.n1.unwrap_or(10),
                    n2: self.n2.unwrap_or(10),
                    reps,
                    seed,
                    ue_variant: variant?,
                }))
            }
            other => {
                errors.push(format!(
                    "study: unknown kind `{other}` (expected reliability, ci, stress-ci, \
zero-covariance, censoring-efficiency or stress-mse)"
                ));
                None
            }
        }
    }
}

fn parse_axis(axis: &AxisSpec, errors: &mut Vec<String>) -> Option<ReliabilityAxis> {
    if axis.values.is_empty() {
        errors.push("axis.values: must be nonempty".into());
        return None;
    }
    let ints = || axis.values.iter().map(|&v| v as i64).collect::<Vec<_>>();
    let uints = |errors: &mut Vec<String>| {
        let mut out = Vec::with_capacity(axis.values.len());
        for &v in &axis.values {
            if v < 0.0 || v.fract() != 0.0 {
                errors.push(format!("axis.values: {v} is not a nonnegative integer"));
                return None;
            }
            out.push(v as u32);
        }
        Some(out)
    };
    match axis.kind.as_str() {
        "mission-time" => Some(ReliabilityAxis::MissionTime(ints())),
        "censor-cycle" => Some(ReliabilityAxis::CensorCycle(ints())),
        "min-working" => Some(ReliabilityAxis::MinWorking(uints(errors)?)),
        "sample-size" => Some(ReliabilityAxis::SampleSize(uints(errors)?)),
        "warranty-offset" => Some(ReliabilityAxis::WarrantyOffset(uints(errors)?)),
        "success-prob" => Some(ReliabilityAxis::SuccessProb(axis.values.clone())),
        other => {
            errors.push(format!("axis.kind: unknown kind `{other}`"));
            None
        }
    }
}

/// Render the CSV for a validated study.
pub fn render_study(study: &Study) -> Result<String> {
    match study {
        Study::Reliability(c) => tables::render_reliability_csv(c, "reliability study"),
        Study::Ci(c) => tables::render_ci_csv(c, "coverage study"),
        Study::StressCi(c) => {
            let printed: Vec<(u32, u32)> = c.pairs.clone();
            tables::render_stress_ci_csv(c, &printed, "stress-strength coverage study")
        }
        Study::ZeroCovariance(c) => tables::render_zero_cov_csv(c, "zero-covariance study"),
        Study::CensoringEfficiency(c) => {
            tables::render_censoring_csv(c, "censoring-efficiency study", None)
        }
        Study::StressMse(c) => tables::render_stress_mse_csv(c, "stress-strength mse study"),
    }
}

/// The JSON run manifest written next to every `simulate` output.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub study: &'a str,
    pub seed: u64,
    pub config: &'a StudySpecFile,
    pub output: &'a str,
    pub wall_time_seconds: f64,
}

pub const VERSION_STRING: &str = concat!("georel-", env!("CARGO_PKG_VERSION"));

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_reliability_spec() -> String {
        r#"{
            "study": "reliability",
            "params": { "r": 15, "theta": 0.8 },
            "n": 20, "censor_at": 25, "mission_time": 25,
            "system": { "k": 2, "m": 8 },
            "axis": { "kind": "mission-time", "values": [25] },
            "reps": 10, "seed": 1, "output": "out.csv"
        }"#
        .to_string()
    }

    #[test]
    fn valid_spec_builds() {
        let spec = StudySpecFile::from_json(&minimal_reliability_spec()).unwrap();
        let study = spec.validate().unwrap();
        assert!(matches!(study, Study::Reliability(_)));
        let csv = render_study(&study).unwrap();
        assert!(csv.contains("r_true"));
    }

    #[test]
    fn violations_are_listed_exhaustively() {
        let spec = StudySpecFile::from_json(
            r#"{ "study": "reliability", "reps": 0,
                 "params": { "r": 15, "theta": 1.5 } }"#,
        )
        .unwrap();
        let err = spec.validate().unwrap_err().to_string();
        // one message carrying every violation
        assert!(err.contains("reps"), "{err}");
        assert!(err.contains("theta"), "{err}");
        assert!(err.contains("output"), "{err}");
        assert!(err.contains("n: required"), "{err}");
        assert!(err.contains("axis"), "{err}");
    }

    #[test]
    fn unknown_fields_and_kinds_are_rejected() {
        assert!(StudySpecFile::from_json(r#"{ "study": "reliability", "bogus": 1 }"#).is_err());
        let spec = StudySpecFile::from_json(r#"{ "study": "nope", "output": "x.csv" }"#).unwrap();
        assert!(spec.validate().is_err());
    }

    #[test]
    fn every_study_kind_builds_and_renders() {
        let specs = [
            r#"{ "study": "ci", "params": { "r": 15, "theta": 0.8 }, "n": 20,
                 "mission_time": 25, "theta_grid": [0.8, 0.9],
                 "reps": 5, "seed": 1, "output": "o.csv" }"#,
            r#"{ "study": "stress-ci", "pairs": [[5, 5]], "theta1": 0.9, "theta2": 0.9,
                 "n1": 5, "n2": 5, "reps": 3, "seed": 1, "output": "o.csv" }"#,
            r#"{ "study": "censoring-efficiency",
                 "stress": { "r": 5, "theta": 0.8 }, "strength": { "r": 10, "theta": 0.8 },
                 "c1_grid": [10, 25], "c2_grid": [15, 30],
                 "n1": 5, "n2": 5, "reps": 10, "seed": 1, "output": "o.csv" }"#,
            r#"{ "study": "zero-covariance", "params": { "r": 15, "theta": 0.8 }, "n": 4,
                 "axis": { "kind": "success-prob", "values": [0.5, 0.8] },
                 "coefficients": [[1, -1, 1, -1]],
                 "batches": 4, "batch_size": 5, "seed": 1, "output": "o.csv" }"#,
            r#"{ "study": "stress-mse", "theta1": 0.5, "theta2": 0.5,
                 "r1_grid": [5], "r2_grid": [5], "n1": 4, "n2": 4,
                 "reps": 5, "seed": 1, "variant": "as-published", "output": "o.csv" }"#,
        ];
        for text in specs {
            let spec = StudySpecFile::from_json(text).unwrap();
            let study = spec.validate().unwrap_or_else(|e| panic!("{text}: {e}"));
            let csv = render_study(&study).unwrap();
            assert!(csv.contains("# config:"), "{text}");
        }
    }

    #[test]
    fn zero_cov_coefficient_validation() {
        let spec = StudySpecFile::from_json(
            r#"{
                "study": "zero-covariance",
                "params": { "r": 15, "theta": 0.8 },
                "n": 4,
                "axis": { "kind": "mission-time", "values": [20] },
                "coefficients": [[1, -1, 1, -1], [1, 0, 0, 0]],
                "output": "z.csv"
            }"#,
        )
        .unwrap();
        let err = spec.validate().unwrap_err().to_string();
        assert!(err.contains("coefficients[1]"), "{err}");
        assert!(!err.contains("coefficients[0]"), "{err}");
    }
}
