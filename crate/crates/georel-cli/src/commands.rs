//! Subcommand implementations: estimation on user data, table reproduction,
//! histogram emission, declarative study runs.

use std::io::Write;
use std::path::{Path, PathBuf};

use georel_core::estimators::{self, EstimateRecord, Method, RecordMeta, Target, UeVariant};
use georel_core::geomdist::{GeoParams, SystemSpec};
use georel_core::simlab::{self, metrics};

use crate::error::{CliError, Result};
use crate::sample_file::{self, SampleFile};
use crate::study_spec::{RunManifest, StudySpecFile, VERSION_STRING};
use crate::table_csv::{fmt_float, CsvWriter};
use crate::tables::{self, TableOverrides};

/// What `estimate` targets, as selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetArg {
    /// Component mission reliability R(t).
    Rt,
    /// k-out-of-m system mission reliability Rs(t).
    Rst,
    /// Stress-strength reliability R = P(X <= Y).
    R,
}

/// Inputs of the `estimate` subcommand.
#[derive(Debug, Clone)]
pub struct EstimateRequest {
    pub sample_path: PathBuf,
    pub strength_path: Option<PathBuf>,
    pub target: TargetArg,
    pub t: Option<i64>,
    pub k: Option<u32>,
    pub m: Option<u32>,
    pub c: Option<i64>,
    pub c2: Option<i64>,
    pub methods: Vec<Method>,
    pub variant: UeVariant,
    pub strict: bool,
}

fn read_sample(path: &Path) -> Result<SampleFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    sample_file::parse(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn require_flag<T: Copy>(value: Option<T>, name: &str) -> Result<T> {
    value.ok_or_else(|| CliError::input(format!("--{name} is required for this target")))
}

/// Run the estimation request, returning one record per requested method.
pub fn run_estimate(req: &EstimateRequest) -> Result<Vec<EstimateRecord>> {
    let sample = read_sample(&req.sample_path)?;
    let methods = if req.methods.is_empty() {
        default_methods(&sample, req.target)
    } else {
        req.methods.clone()
    };
    match req.target {
        TargetArg::Rt => estimate_rt(req, &sample, &methods),
        TargetArg::Rst => estimate_rst(req, &sample, &methods),
        TargetArg::R => estimate_stress(req, &sample, &methods),
    }
}

fn default_methods(sample: &SampleFile, target: TargetArg) -> Vec<Method> {
    if sample.is_censored() {
        vec![Method::MleCensored]
    } else {
        match target {
            TargetArg::R => vec![Method::Mle, Method::ExactRb],
            _ => vec![Method::Mle, Method::Ue],
        }
    }
}

fn estimate_rt(
    req: &EstimateRequest,
    sample: &SampleFile,
    methods: &[Method],
) -> Result<Vec<EstimateRecord>> {
    let t = require_flag(req.t, "t")?;
    methods
        .iter()
        .map(|&method| {
            let (value, meta) = match method {
                Method::Mle => {
                    let stats = sample.complete()?.suff_stats();
                    (estimators::mle_reliability(&stats, t), RecordMeta::for_stats(&stats))
                }
                Method::Ue => {
                    let stats = sample.complete()?.suff_stats();
                    (estimators::ue_reliability(&stats, t), RecordMeta::for_stats(&stats))
                }
                Method::Naive => {
                    let complete = sample.complete()?;
                    let meta = RecordMeta::for_stats(&complete.suff_stats());
                    (estimators::naive_unbiased_reliability(&complete, t), meta)
                }
                Method::MleCensored => {
                    let cstats = sample.censored(req.c)?.stats()?;
                    (
                        estimators::mle_reliability_censored(&cstats, t),
                        RecordMeta::for_censored(&cstats),
                    )
                }
                Method::AsPublished | Method::ExactRb => {
                    return Err(CliError::domain(format!(
                        "method `{method}` estimates stress-strength R, not R(t)"
                    )));
                }
            };
            Ok(EstimateRecord {
                method,
                target: Target::ComponentReliability,
                value,
                meta: Some(meta),
            })
        })
        .collect()
}

fn estimate_rst(
    req: &EstimateRequest,
    sample: &SampleFile,
    methods: &[Method],
) -> Result<Vec<EstimateRecord>> {
    let t = require_flag(req.t, "t")?;
    let k = require_flag(req.k, "k")?;
    let m = require_flag(req.m, "m")?;
    let spec = SystemSpec::new(k, m)?;
    methods
        .iter()
        .map(|&method| {
            let (value, meta) = match method {
                Method::Mle => {
                    let stats = sample.complete()?.suff_stats();
                    (
                        estimators::mle_system_reliability(&stats, t, &spec)?,
                        RecordMeta::for_stats(&stats),
                    )
                }
                Method::Ue => {
                    let stats = sample.complete()?.suff_stats();
                    (
                        estimators::ue_system_reliability(&stats, t, &spec)?,
                        RecordMeta::for_stats(&stats),
                    )
                }
                Method::MleCensored => {
                    let cstats = sample.censored(req.c)?.stats()?;
                    (
                        estimators::mle_system_reliability_censored(&cstats, t, &spec)?,
                        RecordMeta::for_censored(&cstats),
                    )
                }
                other => {
                    return Err(CliError::domain(format!(
                        "method `{other}` is not defined for Rs(t)"
                    )));
                }
            };
            Ok(EstimateRecord {
                method,
                target: Target::SystemReliability,
                value,
                meta: Some(meta),
            })
        })
        .collect()
}

fn estimate_stress(
    req: &EstimateRequest,
    sample: &SampleFile,
    methods: &[Method],
) -> Result<Vec<EstimateRecord>> {
    let strength_path = req
        .strength_path
        .as_ref()
        .ok_or_else(|| CliError::input("--strength <FILE> is required for --target r"))?;
    let strength = read_sample(strength_path)?;
    methods
        .iter()
        .map(|&method| {
            let (value, meta) = match method {
                Method::Mle => {
                    let sx = sample.complete()?.suff_stats();
                    let sy = strength.complete()?.suff_stats();
                    let mut meta = RecordMeta::for_stats(&sx);
                    meta.strength_suff_stats = Some((sy.xmin(), sy.s(), sy.n()));
                    (estimators::mle_stress_strength(&sx, &sy), meta)
                }
                Method::MleCensored => {
                    let cx = sample.censored(req.c)?.stats()?;
                    let cy = strength.censored(req.c2.or(req.c))?.stats()?;
                    let mut meta = RecordMeta::for_censored(&cx);
                    meta.strength_censored_stats = Some((cy.xmin(), cy.p(), cy.s_star()));
                    (estimators::mle_stress_strength_censored(&cx, &cy), meta)
                }
                Method::Ue | Method::ExactRb | Method::AsPublished => {
                    let variant = match method {
                        Method::ExactRb => UeVariant::ExactRb,
                        Method::AsPublished => UeVariant::AsPublished,
                        _ => req.variant,
                    };
                    let sx = sample.complete()?.suff_stats();
                    let sy = strength.complete()?.suff_stats();
                    let mut meta = RecordMeta::for_stats(&sx);
                    meta.strength_suff_stats = Some((sy.xmin(), sy.s(), sy.n()));
                    (estimators::ue_stress_strength(&sx, &sy, variant), meta)
                }
                Method::Naive => {
                    let sx = sample.complete()?;
                    let sy = strength.complete()?;
                    let mut meta = RecordMeta::for_stats(&sx.suff_stats());
                    let stats_y = sy.suff_stats();
                    meta.strength_suff_stats = Some((stats_y.xmin(), stats_y.s(), stats_y.n()));
                    (
                        estimators::naive_unbiased_stress_strength(&sx, &sy, req.strict),
                        meta,
                    )
                }
            };
            let reported_method = match method {
                Method::Ue => match req.variant {
                    UeVariant::ExactRb => Method::ExactRb,
                    UeVariant::AsPublished => Method::AsPublished,
                },
                other => other,
            };
            Ok(EstimateRecord {
                method: reported_method,
                target: Target::StressStrength,
                value,
                meta: Some(meta),
            })
        })
        .collect()
}

/// Print estimate records, one per line, human-readable or JSON.
pub fn print_records(
    records: &[EstimateRecord],
    req: &EstimateRequest,
    json: bool,
    out: &mut impl Write,
) -> Result<()> {
    for record in records {
        if json {
            let line = serde_json::to_string(record)
                .map_err(|e| CliError::input(format!("serialization failed: {e}")))?;
            writeln!(out, "{line}")?;
        } else {
            let mut context = String::new();
            if let Some(t) = req.t {
                context.push_str(&format!(" t={t}"));
            }
            if let (Some(k), Some(m)) = (req.k, req.m) {
                if req.target == TargetArg::Rst {
                    context.push_str(&format!(" k={k} m={m}"));
                }
            }
            writeln!(
                out,
                "target={}{} method={} value={}",
                record.target, context, record.method, record.value
            )?;
        }
    }
    Ok(())
}

fn write_output(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
        }
        None => {
            print!("{text}");
        }
    }
    Ok(())
}

/// `table --id N`: render a published-table reproduction to CSV.
pub fn run_table(id: u32, overrides: &TableOverrides, out: Option<&Path>) -> Result<()> {
    let csv = tables::render_table(id, overrides)?;
    write_output(&csv, out)
}

/// Inputs of the `hist` subcommand.
#[derive(Debug, Clone, Copy)]
pub struct HistRequest {
    pub n: u32,
    pub r: u32,
    pub t: i64,
    pub theta: f64,
    pub reps: u64,
    pub bins: usize,
    pub seed: u64,
}

/// `hist`: emit binned counts of the unbiased estimates of R(t).
pub fn run_hist(req: &HistRequest, out: Option<&Path>) -> Result<()> {
    let params = GeoParams::new(req.r, req.theta)?;
    let draws = simlab::ue_reliability_draws(params, req.n, req.t, req.reps, req.seed)?;
    let hist = metrics::histogram(&draws, req.bins)?;
    let mut w = CsvWriter::new();
    w.comment("histogram of unbiased estimates of R(t)");
    w.comment(&format!(
        "config: n={} r={} t={} theta={} reps={} bins={} seed={}",
        req.n, req.r, req.t, req.theta, req.reps, req.bins, req.seed
    ));
    w.comment(&format!(
        "true reliability: {}",
        fmt_float(params.reliability(req.t))
    ));
    w.header(&["bin_lo", "bin_hi", "count"]);
    for (i, &count) in hist.counts.iter().enumerate() {
        w.row(&[
            fmt_float(hist.edges[i]),
            fmt_float(hist.edges[i + 1]),
            format!("{count}"),
        ]);
    }
    write_output(&w.finish(), out)
}

/// `simulate --spec FILE`: run a declarative study, writing its CSV and a
/// JSON run manifest (`<output>.manifest.json`).
pub fn run_simulate(spec_path: &Path) -> Result<()> {
    let text = std::fs::read_to_string(spec_path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", spec_path.display())))?;
    let spec = StudySpecFile::from_json(&text)?;
    let study = spec.validate()?;
    let output = spec.output.clone().expect("validated");

    let started = std::time::Instant::now();
    let csv = crate::study_spec::render_study(&study)?;
    let wall = started.elapsed().as_secs_f64();

    std::fs::write(&output, &csv)
        .map_err(|e| CliError::input(format!("cannot write {output}: {e}")))?;

    let manifest = RunManifest {
        tool: "georel",
        version: VERSION_STRING,
        study: &spec.study,
        seed: spec.seed.unwrap_or(tables::DEFAULT_SEED),
        config: &spec,
        output: &output,
        wall_time_seconds: wall,
    };
    let manifest_path = format!("{output}.manifest.json");
    let manifest_json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| CliError::input(format!("manifest serialization failed: {e}")))?;
    std::fs::write(&manifest_path, manifest_json)
        .map_err(|e| CliError::input(format!("cannot write {manifest_path}: {e}")))?;
    eprintln!("wrote {output} and {manifest_path}");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        std::io::Write::write_all(&mut f, content.as_bytes()).unwrap();
        f
    }

    fn basic_request(path: PathBuf) -> EstimateRequest {
        EstimateRequest {
            sample_path: path,
            strength_path: None,
            target: TargetArg::Rt,
            t: Some(4),
            k: None,
            m: None,
            c: None,
            c2: None,
            methods: vec![],
            variant: UeVariant::ExactRb,
            strict: false,
        }
    }

    #[test]
    fn estimate_rt_examples() {
        let f = write_temp("3 5\n");
        let mut req = basic_request(f.path().to_path_buf());
        req.methods = vec![Method::Mle];
        let records = run_estimate(&req).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].value, 0.5);

        req.methods = vec![Method::Ue];
        req.t = Some(3);
        let records = run_estimate(&req).unwrap();
        assert_eq!(records[0].value, 1.0);
    }

    #[test]
    fn estimate_defaults_cover_mle_and_ue() {
        let f = write_temp("3 5\n");
        let req = basic_request(f.path().to_path_buf());
        let records = run_estimate(&req).unwrap();
        let methods: Vec<Method> = records.iter().map(|r| r.method).collect();
        assert_eq!(methods, vec![Method::Mle, Method::Ue]);
    }

    #[test]
    fn estimate_rt_censored_flag() {
        let f = write_temp("2 4 9\n");
        let mut req = basic_request(f.path().to_path_buf());
        req.methods = vec![Method::MleCensored];
        req.c = Some(5);
        req.t = Some(4);
        // observed (2, 4), survivor at 9: s* = 2 + 1*(6-2) = 6, p = 2
        let records = run_estimate(&req).unwrap();
        assert!((records[0].value - 0.5625).abs() < 1e-12);
        assert_eq!(
            records[0].meta.as_ref().unwrap().censored_stats,
            Some((2, 2, 6))
        );

        req.c = None;
        let err = run_estimate(&req).unwrap_err();
        assert_eq!(err.code(), 3);
    }

    #[test]
    fn estimate_rst_domain_error_exits_3() {
        let f = write_temp("1 2 3\n");
        let mut req = basic_request(f.path().to_path_buf());
        req.target = TargetArg::Rst;
        req.t = Some(2);
        req.k = Some(2);
        req.m = Some(8); // m >= n
        req.methods = vec![Method::Ue];
        let err = run_estimate(&req).unwrap_err();
        assert_eq!(err.code(), 3);
    }

    #[test]
    fn estimate_stress_strength() {
        let fx = write_temp("3 5\n");
        let fy = write_temp("4 8\n");
        let mut req = basic_request(fx.path().to_path_buf());
        req.target = TargetArg::R;
        req.t = None;
        req.strength_path = Some(fy.path().to_path_buf());
        req.methods = vec![Method::Mle];
        let records = run_estimate(&req).unwrap();
        assert!((records[0].value - 0.875).abs() < 1e-12);

        // default ue resolves to the exact conditional expectation
        req.methods = vec![];
        let records = run_estimate(&req).unwrap();
        assert_eq!(records[1].method, Method::ExactRb);
        let meta = records[1].meta.as_ref().unwrap();
        assert_eq!(meta.suff_stats, Some((3, 2, 2)));
        assert_eq!(meta.strength_suff_stats, Some((4, 4, 2)));

        // missing strength file is an input error
        req.strength_path = None;
        assert_eq!(run_estimate(&req).unwrap_err().code(), 2);
    }

    #[test]
    fn print_records_human_format() {
        let f = write_temp("3 5\n");
        let mut req = basic_request(f.path().to_path_buf());
        req.methods = vec![Method::Mle];
        let records = run_estimate(&req).unwrap();
        let mut buf = Vec::new();
        print_records(&records, &req, false, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "target=R(t) t=4 method=mle value=0.5\n");

        let mut buf = Vec::new();
        print_records(&records, &req, true, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\"method\":\"mle\""), "{text}");
        assert!(text.contains("\"value\":0.5"), "{text}");
    }

    #[test]
    fn hist_counts_conserve_reps() {
        let req = HistRequest {
            n: 20,
            r: 15,
            t: 25,
            theta: 0.96,
            reps: 500,
            bins: 13,
            seed: 1,
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("hist.csv");
        run_hist(&req, Some(&path)).unwrap();
        let table = crate::table_csv::parse_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(table.rows.len(), 13);
        let total: f64 = (0..table.rows.len())
            .map(|i| table.number(i, 2).unwrap())
            .sum();
        assert_eq!(total, 500.0);
    }

    #[test]
    fn hist_single_bin_holds_everything() {
        let req = HistRequest {
            n: 10,
            r: 5,
            t: 8,
            theta: 0.7,
            reps: 100,
            bins: 1,
            seed: 2,
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("hist.csv");
        run_hist(&req, Some(&path)).unwrap();
        let table = crate::table_csv::parse_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.number(0, 2).unwrap(), 100.0);
    }

    #[test]
    fn simulate_writes_csv_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("study.csv");
        let spec = format!(
            r#"{{
                "study": "stress-mse",
                "theta1": 0.5, "theta2": 0.5,
                "r1_grid": [5], "r2_grid": [10],
                "n1": 5, "n2": 5,
                "reps": 20, "seed": 3,
                "output": "{}"
            }}"#,
            out.display()
        );
        let spec_file = write_temp(&spec);
        run_simulate(spec_file.path()).unwrap();
        assert!(out.exists());
        let manifest_path = format!("{}.manifest.json", out.display());
        let manifest: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(manifest_path).unwrap()).unwrap();
        assert_eq!(manifest["study"], "stress-mse");
        assert_eq!(manifest["seed"], 3);
        assert!(manifest["wall_time_seconds"].as_f64().unwrap() >= 0.0);
        assert!(manifest["version"].as_str().unwrap().starts_with("georel-"));
    }

    #[test]
    fn simulate_rejects_bad_spec_with_exit_2() {
        let spec_file = write_temp(r#"{ "study": "reliability", "reps": 0 }"#);
        let err = run_simulate(spec_file.path()).unwrap_err();
        assert_eq!(err.code(), 2);
    }
}
