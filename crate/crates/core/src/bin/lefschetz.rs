//! Command-line surface. Exit codes are part of the contract: 0 holds/true,
//! 1 fails/false, 2 unknown, 3 dimension cap, 64 usage or configuration
//! error, 74 I/O error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use lefschetz::algebra::MonomialCi;
use lefschetz::arith::is_prime;
use lefschetz::classify::{
    classify_slp, classify_slp_with_oracle, classify_wlp, classify_wlp_with_oracle,
    zero_divisor_power, ClassifyError, Status, Verdict,
};
use lefschetz::froberg::check_froberg_n_plus_1;
use lefschetz::oracle::{
    power_has_maximal_rank, power_rank_report, verify_slp, witness_product_is_zero, CheckDepth,
    OracleConfig, OracleError, RankReport,
};
use lefschetz::survey::{survey, Partition, SetDefs, SurveyError, SurveyParams, SurveyRow, WlpCache};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

const EXIT_UNKNOWN: u8 = 2;
const EXIT_DIMENSION_CAP: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(
    name = "lefschetz",
    about = "Decide strong and weak Lefschetz properties of monomial complete intersections over prime fields",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form classification, optionally falling back to the oracle
    Classify(ClassifyArgs),
    /// Exact rank computation for one property or one power
    Verify(VerifyArgs),
    /// Sweep a degree box and count the explained WLP region
    Survey(SurveyArgs),
    /// Compare the exact quotient series against the conjectured one
    Froberg(FrobergArgs),
    /// Construct and check a zero-divisor certificate
    Witness(WitnessArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassifyProperty {
    Slp,
    Wlp,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyProperty {
    Slp,
    Wlp,
    Power,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, value_enum)]
    property: ClassifyProperty,
    #[arg(long, value_delimiter = ',', required = true)]
    degrees: Vec<u64>,
    #[arg(long = "char")]
    characteristic: u64,
    /// Settle Unknown verdicts with the exact oracle
    #[arg(long)]
    oracle_fallback: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    property: VerifyProperty,
    /// Power of the linear form (only with --property power)
    #[arg(long)]
    power: Option<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    degrees: Vec<u64>,
    #[arg(long = "char")]
    characteristic: u64,
    /// Include exact per-degree ranks in the report
    #[arg(long)]
    full_report: bool,
}

#[derive(Args)]
struct SurveyArgs {
    #[arg(long)]
    vars: usize,
    #[arg(long, default_value_t = 2)]
    min_degree: u64,
    #[arg(long)]
    max_degree: u64,
    #[arg(long = "char")]
    characteristic: u64,
    #[arg(long, default_value = "all")]
    partition: Partition,
    #[arg(long, default_value = "caption")]
    set_defs: SetDefs,
    /// Worker threads; defaults to LEFSCHETZ_JOBS or all cores
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the row as CSV to this file
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append per-tuple verdicts here and resume from previous runs
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct FrobergArgs {
    #[arg(long)]
    vars: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    form_degrees: Vec<u64>,
    #[arg(long = "char")]
    characteristic: u64,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    degrees: Vec<u64>,
    #[arg(long = "char")]
    characteristic: u64,
    /// Comma-separated 1-based positions into the descending degree list;
    /// empty selects no variable
    #[arg(long, default_value = "")]
    lambda: String,
}

/// A fatal outcome with its exit code; printable to stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn from_oracle(e: OracleError) -> Failure {
        match e {
            OracleError::DimensionCap {
                degree,
                dimension,
                cap,
            } => Failure {
                code: EXIT_DIMENSION_CAP,
                message: format!(
                    "{{\"error\":\"DimensionCap\",\"degree\":{degree},\"dimension\":{dimension},\"cap\":{cap}}}"
                ),
            },
            OracleError::CharacteristicTooLarge(_) | OracleError::Algebra(_) => Failure {
                code: EXIT_USAGE,
                message: e.to_string(),
            },
            other => Failure {
                code: EXIT_INTERNAL,
                message: other.to_string(),
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Survey(args) => cmd_survey(args),
        Command::Froberg(args) => cmd_froberg(args),
        Command::Witness(args) => cmd_witness(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("{}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn build_ci(degrees: &[u64], characteristic: u64) -> Result<MonomialCi, Failure> {
    MonomialCi::new(degrees, characteristic).map_err(|e| Failure::usage(e.to_string()))
}

#[derive(Serialize)]
struct Timings {
    total_ms: u64,
}

#[derive(Serialize)]
struct ClassifyReport<'a> {
    #[serde(flatten)]
    verdict: &'a Verdict,
    degrees: &'a [u64],
    #[serde(rename = "char")]
    characteristic: u64,
    timings: Timings,
}

/// `[2, 0, 3]` prints as `x1^2 x3^3`; the all-zero exponent prints as `1`.
fn monomial(exponents: &[u64]) -> String {
    let mut out = String::new();
    for (i, &e) in exponents.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        let _ = write!(out, "x{}^{}", i + 1, e);
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

fn cmd_classify(args: ClassifyArgs) -> Result<u8, Failure> {
    let started = Instant::now();
    let ci = build_ci(&args.degrees, args.characteristic)?;
    let config = OracleConfig::default();
    let verdict = match (args.property, args.oracle_fallback) {
        (ClassifyProperty::Slp, false) => classify_slp(&ci),
        (ClassifyProperty::Wlp, false) => classify_wlp(&ci),
        (ClassifyProperty::Slp, true) => {
            classify_slp_with_oracle(&ci, CheckDepth::AllDegrees, &config)
                .map_err(Failure::from_oracle)?
        }
        (ClassifyProperty::Wlp, true) => {
            classify_wlp_with_oracle(&ci, CheckDepth::AllDegrees, &config)
                .map_err(Failure::from_oracle)?
        }
    };
    match args.format {
        Format::Json => {
            let report = ClassifyReport {
                verdict: &verdict,
                degrees: ci.degrees(),
                characteristic: ci.characteristic(),
                timings: Timings {
                    total_ms: started.elapsed().as_millis() as u64,
                },
            };
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
        }
        Format::Text => {
            println!("status: {:?}", verdict.status);
            println!("rule: {}", verdict.rule);
            if let Some(cert) = &verdict.certificate {
                println!(
                    "certificate: lambda={:?} m={} power={} witness={}",
                    cert.lambda,
                    cert.m,
                    cert.power,
                    monomial(&cert.witness)
                );
            }
        }
    }
    Ok(match verdict.status {
        Status::Holds => 0,
        Status::Fails => 1,
        Status::Unknown => EXIT_UNKNOWN,
    })
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    property: &'a str,
    degrees: &'a [u64],
    #[serde(rename = "char")]
    characteristic: u64,
    holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    least_failing_power: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    reports: Vec<RankReport>,
    timings: Timings,
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let started = Instant::now();
    let ci = build_ci(&args.degrees, args.characteristic)?;
    let config = OracleConfig::default();
    let (property, power) = match (args.property, args.power) {
        (VerifyProperty::Power, Some(m)) => ("power", Some(m)),
        (VerifyProperty::Power, None) => {
            return Err(Failure::usage("--property power requires --power"))
        }
        (VerifyProperty::Slp, None) => ("slp", None),
        (VerifyProperty::Wlp, None) => ("wlp", None),
        (_, Some(_)) => {
            return Err(Failure::usage("--power is only meaningful with --property power"))
        }
    };

    let mut least_failing_power = None;
    let mut reports = Vec::new();
    let holds = match property {
        "slp" => {
            let outcome = verify_slp(&ci, CheckDepth::AllDegrees, &config)
                .map_err(Failure::from_oracle)?;
            least_failing_power = outcome.least_failing_power;
            if args.full_report {
                for m in 1..=ci.socle_degree() {
                    reports.push(power_rank_report(&ci, m, &config).map_err(Failure::from_oracle)?);
                }
            }
            outcome.holds
        }
        _ => {
            let m = power.unwrap_or(1);
            if args.full_report {
                let report = power_rank_report(&ci, m, &config).map_err(Failure::from_oracle)?;
                let holds = report.has_maximal_rank;
                reports.push(report);
                holds
            } else {
                power_has_maximal_rank(&ci, m, CheckDepth::AllDegrees, &config)
                    .map_err(Failure::from_oracle)?
            }
        }
    };

    let report = VerifyReport {
        property,
        degrees: ci.degrees(),
        characteristic: ci.characteristic(),
        holds,
        least_failing_power,
        reports,
        timings: Timings {
            total_ms: started.elapsed().as_millis() as u64,
        },
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    Ok(if holds { 0 } else { 1 })
}

fn default_jobs() -> usize {
    std::env::var("LEFSCHETZ_JOBS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(0)
}

fn cmd_survey(args: SurveyArgs) -> Result<u8, Failure> {
    if !is_prime(args.characteristic) {
        return Err(Failure::usage(format!(
            "{} is not prime",
            args.characteristic
        )));
    }
    let params = SurveyParams {
        vars: args.vars,
        min_degree: args.min_degree,
        max_degree: args.max_degree,
        characteristic: args.characteristic,
        partition: args.partition,
        set_defs: args.set_defs,
    };
    let cache = match &args.cache {
        Some(path) => WlpCache::with_file(path).map_err(|e| Failure {
            code: EXIT_IO,
            message: format!("cache {}: {e}", path.display()),
        })?,
        None => WlpCache::in_memory(),
    };
    let jobs = args.jobs.unwrap_or_else(default_jobs);
    let row = survey(&params, &cache, &OracleConfig::default(), jobs, true).map_err(|e| match e {
        SurveyError::InvalidRange { .. }
        | SurveyError::TooFewVariables(_)
        | SurveyError::NotPrime(_) => Failure::usage(e.to_string()),
        SurveyError::Oracle(inner) => Failure::from_oracle(inner),
        SurveyError::Io(inner) => Failure {
            code: EXIT_IO,
            message: inner.to_string(),
        },
        SurveyError::Pool(_) => Failure {
            code: EXIT_INTERNAL,
            message: e.to_string(),
        },
    })?;
    println!("{}", serde_json::to_string_pretty(&row).expect("serializable"));
    if let Some(path) = &args.out {
        let csv = format!("{}\n{}\n", SurveyRow::CSV_HEADER, row.csv_line());
        std::fs::write(path, csv).map_err(|e| Failure {
            code: EXIT_IO,
            message: format!("writing {}: {e}", path.display()),
        })?;
    }
    Ok(0)
}

fn cmd_froberg(args: FrobergArgs) -> Result<u8, Failure> {
    if args.form_degrees.len() != args.vars + 1 {
        return Err(Failure::usage(format!(
            "expected {} form degrees (one more than --vars), got {}",
            args.vars + 1,
            args.form_degrees.len()
        )));
    }
    if args.form_degrees.iter().any(|&d| d == 0) {
        return Err(Failure::usage("form degrees must be positive"));
    }
    let (base, extra) = args.form_degrees.split_at(args.vars);
    let ci = build_ci(base, args.characteristic)?;
    let check = check_froberg_n_plus_1(&ci, extra[0], &OracleConfig::default())
        .map_err(Failure::from_oracle)?;
    println!("{}", serde_json::to_string_pretty(&check).expect("serializable"));
    Ok(if check.equal { 0 } else { 1 })
}

fn cmd_witness(args: WitnessArgs) -> Result<u8, Failure> {
    let ci = build_ci(&args.degrees, args.characteristic)?;
    let lambda: Vec<usize> = if args.lambda.is_empty() {
        Vec::new()
    } else {
        args.lambda
            .split(',')
            .map(|part| {
                part.trim()
                    .parse()
                    .map_err(|_| Failure::usage(format!("invalid lambda entry {part:?}")))
            })
            .collect::<Result<_, _>>()?
    };
    let witness = zero_divisor_power(&ci, &lambda).map_err(|e| match e {
        ClassifyError::InvalidLambda(_) => Failure::usage(e.to_string()),
    })?;
    println!("m = {}", witness.m);
    println!("power = {}", witness.power);
    println!("witness = {}", monomial(&witness.witness));
    if witness.trivial {
        println!("witness is the zero class; flagged trivial");
        return Ok(0);
    }
    let ones = vec![1u64; ci.num_vars()];
    let annihilated = witness_product_is_zero(&ci, &ones, witness.power, &witness.witness)
        .map_err(Failure::from_oracle)?;
    if annihilated {
        println!("verified");
        Ok(0)
    } else {
        println!("annihilation check failed");
        Ok(1)
    }
}
