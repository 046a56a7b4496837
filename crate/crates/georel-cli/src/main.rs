use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use georel_cli::commands::{self, EstimateRequest, HistRequest, TargetArg};
use georel_cli::error::CliError;
use georel_cli::tables::{TableOverrides, DEFAULT_SEED};

/// Reliability estimation for the two-parameter geometric lifetime model:
/// estimation on sample files, seeded reproduction of the published
/// simulation tables, histogram data, declarative studies.
#[derive(Parser)]
#[command(name = "georel", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetFlag {
    /// Component mission reliability R(t)
    Rt,
    /// k-out-of-m system reliability Rs(t)
    Rst,
    /// Stress-strength reliability R = P(X <= Y)
    R,
}

#[derive(Subcommand)]
enum Cmd {
    /// Estimate R(t), Rs(t) or R from sample files
    Estimate {
        /// Sample file (the stress sample when --target r)
        sample: PathBuf,
        /// Strength sample file (required for --target r)
        #[arg(long)]
        strength: Option<PathBuf>,
        #[arg(long, value_enum)]
        target: TargetFlag,
        /// Mission time (required for rt and rst)
        #[arg(long)]
        t: Option<i64>,
        /// Minimum working components (rst)
        #[arg(long)]
        k: Option<u32>,
        /// Total components (rst)
        #[arg(long)]
        m: Option<u32>,
        /// Censoring cycle for deriving a censored view of a complete sample
        #[arg(long)]
        c: Option<i64>,
        /// Censoring cycle for the strength sample (defaults to --c)
        #[arg(long)]
        c2: Option<i64>,
        /// Estimator to run (repeatable): mle, mle-censored, ue, naive,
        /// exact-rb, as-published. Defaults: mle + ue (complete files),
        /// mle-censored (censored files)
        #[arg(long = "method")]
        methods: Vec<String>,
        /// Which unbiased stress-strength estimator `ue` means
        #[arg(long, default_value = "exact-rb")]
        variant: String,
        /// Strict inequality I(x < y) in the naive stress-strength estimator
        #[arg(long)]
        strict: bool,
        /// Emit records as JSON lines
        #[arg(long)]
        json: bool,
    },
    /// Reproduce one of the published simulation tables (ids 1-19) as CSV
    Table {
        #[arg(long)]
        id: u32,
        /// Replications (tables 7-8: number of covariance batches)
        #[arg(long)]
        reps: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Histogram data (bin edges and counts) for unbiased estimates of R(t)
    Hist {
        #[arg(long, default_value_t = 20)]
        n: u32,
        #[arg(long, default_value_t = 15)]
        r: u32,
        #[arg(long, default_value_t = 25)]
        t: i64,
        #[arg(long, default_value_t = 0.96)]
        theta: f64,
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
        #[arg(long, default_value_t = 30)]
        bins: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a declarative JSON study spec; writes CSV plus a run manifest
    Simulate {
        #[arg(long)]
        spec: PathBuf,
    },
}

fn configure_threads() -> Result<(), CliError> {
    match std::env::var("GEOREL_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let count: usize = raw.parse().map_err(|_| {
                CliError::input(format!(
                    "GEOREL_THREADS must be a nonnegative integer, got `{raw}`"
                ))
            })?;
            if count == 0 {
                return Ok(()); // 0 = auto
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(count)
                .build_global()
                .map_err(|e| CliError::input(format!("thread pool setup failed: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Cmd::Estimate {
            sample,
            strength,
            target,
            t,
            k,
            m,
            c,
            c2,
            methods,
            variant,
            strict,
            json,
        } => {
            let methods = methods
                .iter()
                .map(|m| m.parse().map_err(CliError::from))
                .collect::<Result<Vec<_>, _>>()?;
            let req = EstimateRequest {
                sample_path: sample,
                strength_path: strength,
                target: match target {
                    TargetFlag::Rt => TargetArg::Rt,
                    TargetFlag::Rst => TargetArg::Rst,
                    TargetFlag::R => TargetArg::R,
                },
                t,
                k,
                m,
                c,
                c2,
                methods,
                variant: variant.parse().map_err(CliError::from)?,
                strict,
            };
            let records = commands::run_estimate(&req)?;
            commands::print_records(&records, &req, json, &mut std::io::stdout().lock())
        }
        Cmd::Table { id, reps, seed, out } => {
            commands::run_table(id, &TableOverrides { reps, seed }, out.as_deref())
        }
        Cmd::Hist {
            n,
            r,
            t,
            theta,
            reps,
            bins,
            seed,
            out,
        } => commands::run_hist(
            &HistRequest {
                n,
                r,
                t,
                theta,
                reps,
                bins,
                seed,
            },
            out.as_deref(),
        ),
        Cmd::Simulate { spec } => commands::run_simulate(&spec),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code() as u8)
        }
    }
}
