//! Command-line front end: exact matrix point counts, brute-force
//! cross-checks, prime sweeps, histograms, and verification suites.
//!
//! Exit codes: 0 success, 1 domain error (bad prime, bad parameter,
//! exhausted budget, malformed data file), 2 usage error, 3 verification
//! failure.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde_json::json;

use matrixpoints_cli::sweep::{self, SkippedPrime};
use matrixpoints_cli::{formats, verify};
use matrixpoints_core::curves::{
    clausen_curve, prime_power_traces, reduce_curve, trace, FrobeniusData, K3Parameter,
    K3Regime, RationalCurveModel,
};
use matrixpoints_core::dist::{discrepancy, histogram, DensityKind, DEFAULT_GRID_ENDPOINTS};
use matrixpoints_core::engines::{
    elliptic_matrix_count, elliptic_matrix_count_with_terms, k3_matrix_count,
    k3_matrix_count_with_terms, k3_supersingular_count, k3_supersingular_count_with_terms,
    supersingular_elliptic_count, supersingular_elliptic_count_with_terms, TripleTerm, TupleTerm,
};
use matrixpoints_core::oracle::{oracle_elliptic, oracle_k3, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(
    name = "matrixpoints",
    version,
    about = "Matrix point counts on elliptic curves and a K3 family over F_p",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count n x n matrix solutions over F_p.
    Count {
        #[command(subcommand)]
        target: CountTarget,
    },
    /// Trace of Frobenius, optionally over prime-power fields.
    Trace(TraceArgs),
    /// Sweep the odd primes up to a bound, writing records to CSV.
    Sweep {
        #[command(subcommand)]
        target: SweepTarget,
    },
    /// Bin sweep records against a reference density and report the
    /// grid discrepancy.
    Hist(HistArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum CountTarget {
    /// n x n matrix points on an elliptic curve.
    Elliptic(EllipticCountArgs),
    /// n x n matrix points on a member of the K3 family.
    K3(K3CountArgs),
}

#[derive(Args)]
struct EllipticCountArgs {
    /// Integral model as a1,a2,a3,a4,a6.
    #[arg(long, allow_hyphen_values = true)]
    curve: String,
    /// Odd prime modulus.
    #[arg(long)]
    p: u64,
    /// Matrix dimension.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    #[arg(long, value_enum)]
    method: Method,
    /// Write the individual summands of the formula to this CSV.
    #[arg(long)]
    dump_terms: Option<PathBuf>,
    /// Override the oracle work budget (default 10^9 candidates).
    #[arg(long)]
    budget: Option<u128>,
}

#[derive(Args)]
struct K3CountArgs {
    /// Family parameter as NUM/DEN (integer shorthand allowed).
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    /// Odd prime modulus.
    #[arg(long)]
    p: u64,
    /// Matrix dimension.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    #[arg(long, value_enum)]
    method: Method,
    /// Write the individual summands of the formula to this CSV.
    #[arg(long)]
    dump_terms: Option<PathBuf>,
    /// Override the oracle work budget (default 10^9 candidates).
    #[arg(long)]
    budget: Option<u128>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Exact eigenvalue/character-sum formula.
    Formula,
    /// Exhaustive enumeration of matrix solutions.
    Oracle,
    /// Closed form assuming trace zero.
    Supersingular,
}

#[derive(Args)]
struct TraceArgs {
    /// Integral model as a1,a2,a3,a4,a6.
    #[arg(long, allow_hyphen_values = true)]
    curve: String,
    /// Odd prime modulus.
    #[arg(long)]
    p: u64,
    /// Print a(p^k) for k = 1..=K, one per line, instead of a(p).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    powers: Option<u32>,
}

#[derive(Subcommand)]
enum SweepTarget {
    /// Record a*_{E,n}(p) and R*_n(p) for every good odd prime.
    Elliptic(EllipticSweepArgs),
    /// Record A*_lambda(p) for every good odd prime.
    K3(K3SweepArgs),
}

#[derive(Args)]
struct EllipticSweepArgs {
    /// Integral model as a1,a2,a3,a4,a6.
    #[arg(long, allow_hyphen_values = true)]
    curve: String,
    /// Matrix dimension.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Sweep the odd primes p <= xmax (xmax >= 17).
    #[arg(long)]
    xmax: u64,
    /// CM field discriminant (negative) for the split/inert column.
    #[arg(long, allow_hyphen_values = true)]
    cm_disc: Option<i64>,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct K3SweepArgs {
    /// Family parameter as NUM/DEN (integer shorthand allowed).
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    /// Matrix dimension (recorded in the metadata; the normalized error
    /// statistic is dimension-independent).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Sweep the odd primes p <= xmax (xmax >= 17).
    #[arg(long)]
    xmax: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct HistArgs {
    /// Input record CSV (as written by `sweep`).
    #[arg(long = "in")]
    input: PathBuf,
    /// Number of equal-width bins over the density's support.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    bins: u32,
    /// Reference density to bin against.
    #[arg(long, value_enum)]
    density: DensityArg,
    /// Keep only records whose split flag is set.
    #[arg(long)]
    split_only: bool,
    /// Output JSON path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum DensityArg {
    Semicircle,
    Arcsine,
    B1,
    B2,
    B3,
    B4,
}

impl DensityArg {
    fn kind(self) -> DensityKind {
        match self {
            DensityArg::Semicircle => DensityKind::Semicircle,
            DensityArg::Arcsine => DensityKind::Arcsine,
            DensityArg::B1 => DensityKind::B1,
            DensityArg::B2 => DensityKind::B2,
            DensityArg::B3 => DensityKind::B3,
            DensityArg::B4 => DensityKind::B4,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: SuiteArg,
    /// Override the suite's dimension cap.
    #[arg(long)]
    nmax: Option<u32>,
    /// Override the suite's prime cap.
    #[arg(long)]
    pmax: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Lemmas,
    Formulas,
    Oracle,
    Densities,
}

impl SuiteArg {
    fn name(self) -> &'static str {
        match self {
            SuiteArg::Lemmas => "lemmas",
            SuiteArg::Formulas => "formulas",
            SuiteArg::Oracle => "oracle",
            SuiteArg::Densities => "densities",
        }
    }
}

enum AppError {
    Usage(String),
    Domain(String),
    VerifyFailed,
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 2,
            AppError::Domain(_) => 1,
            AppError::VerifyFailed => 3,
        }
    }

    fn message(&self) -> Option<&str> {
        match self {
            AppError::Usage(m) | AppError::Domain(m) => Some(m),
            AppError::VerifyFailed => None,
        }
    }
}

impl From<matrixpoints_core::Error> for AppError {
    fn from(e: matrixpoints_core::Error) -> Self {
        AppError::Domain(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Domain(format!("io: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(msg) = e.message() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Count { target } => match target {
            CountTarget::Elliptic(args) => count_elliptic(args),
            CountTarget::K3(args) => count_k3(args),
        },
        Command::Trace(args) => trace_cmd(args),
        Command::Sweep { target } => match target {
            SweepTarget::Elliptic(args) => sweep_elliptic_cmd(args),
            SweepTarget::K3(args) => sweep_k3_cmd(args),
        },
        Command::Hist(args) => hist_cmd(args),
        Command::Verify(args) => verify_cmd(args),
    }
}

/// Syntax errors are usage errors; a singular model is a domain error.
fn parse_curve(s: &str) -> Result<RationalCurveModel, AppError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 5 {
        return Err(AppError::Usage(format!(
            "--curve takes five comma-separated integers a1,a2,a3,a4,a6, got {s:?}"
        )));
    }
    let mut c = [0i64; 5];
    for (i, part) in parts.iter().enumerate() {
        c[i] = part.trim().parse().map_err(|e| {
            AppError::Usage(format!("--curve coefficient {}: {e}", i + 1))
        })?;
    }
    RationalCurveModel::new(c[0], c[1], c[2], c[3], c[4])
        .map_err(|_| AppError::Domain(format!("curve {s} is singular over Q")))
}

/// Syntax errors are usage errors; lambda in {0, -1} is a domain error.
fn parse_lambda(s: &str) -> Result<K3Parameter, AppError> {
    let rat = parse_rational64(s)?;
    K3Parameter::new(rat)
        .map_err(|_| AppError::Domain(format!("lambda = {rat} does not index a family member")))
}

fn parse_rational64(s: &str) -> Result<Rational64, AppError> {
    let bad = |e: &dyn std::fmt::Display| {
        AppError::Usage(format!("--lambda must be NUM/DEN or an integer, got {s:?} ({e})"))
    };
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|e| bad(&e))?;
        let d: i64 = den.trim().parse().map_err(|e| bad(&e))?;
        if d == 0 {
            return Err(AppError::Usage("--lambda denominator must be nonzero".to_string()));
        }
        Ok(Rational64::new(n, d))
    } else {
        let n: i64 = s.trim().parse().map_err(|e| bad(&e))?;
        Ok(Rational64::from_integer(n))
    }
}

fn ensure_odd_prime(p: u64) -> Result<(), AppError> {
    let mut ok = p >= 3 && p % 2 == 1;
    let mut d = 3u64;
    while ok && d * d <= p {
        if p % d == 0 {
            ok = false;
        }
        d += 2;
    }
    if ok {
        Ok(())
    } else {
        Err(AppError::Domain(format!("p = {p} is not an odd prime")))
    }
}

fn reject_dump_for_oracle(dump: &Option<PathBuf>) -> Result<(), AppError> {
    if dump.is_some() {
        return Err(AppError::Usage(
            "--dump-terms applies to the formula and supersingular methods only".to_string(),
        ));
    }
    Ok(())
}

fn dump_triple_terms(path: &PathBuf, terms: Option<&[TripleTerm]>) -> Result<(), AppError> {
    let rows: Vec<String> = terms.unwrap_or(&[]).iter().map(|t| t.to_csv_row()).collect();
    formats::write_terms_csv(path, TripleTerm::CSV_HEADER, &rows)?;
    eprintln!("wrote {} term rows to {}", rows.len(), path.display());
    Ok(())
}

fn dump_tuple_terms(path: &PathBuf, terms: Option<&[TupleTerm]>) -> Result<(), AppError> {
    let rows: Vec<String> = terms.unwrap_or(&[]).iter().map(|t| t.to_csv_row()).collect();
    formats::write_terms_csv(path, TupleTerm::CSV_HEADER, &rows)?;
    eprintln!("wrote {} term rows to {}", rows.len(), path.display());
    Ok(())
}

fn count_elliptic(args: EllipticCountArgs) -> Result<(), AppError> {
    let model = parse_curve(&args.curve)?;
    ensure_odd_prime(args.p)?;
    let curve = reduce_curve(&model, args.p)?;
    match args.method {
        Method::Formula => {
            let frob = FrobeniusData::from_curve(&curve, args.n as usize)?;
            let res = if args.dump_terms.is_some() {
                elliptic_matrix_count_with_terms(args.n, &frob)?
            } else {
                elliptic_matrix_count(args.n, &frob)?
            };
            if let Some(path) = &args.dump_terms {
                dump_triple_terms(path, res.terms.as_deref())?;
            }
            println!("{}", res.value);
        }
        Method::Supersingular => {
            let a = trace(&curve);
            if a != 0 {
                eprintln!(
                    "warning: trace at p = {} is {a}, not 0; the closed form below assumes a \
                     supersingular curve",
                    args.p
                );
            }
            let res = if args.dump_terms.is_some() {
                supersingular_elliptic_count_with_terms(args.n, args.p)?
            } else {
                supersingular_elliptic_count(args.n, args.p)?
            };
            if let Some(path) = &args.dump_terms {
                dump_triple_terms(path, res.terms.as_deref())?;
            }
            println!("{}", res.value);
        }
        Method::Oracle => {
            reject_dump_for_oracle(&args.dump_terms)?;
            let start = Instant::now();
            let res = oracle_elliptic(args.n, &curve, args.budget.unwrap_or(DEFAULT_BUDGET))?;
            eprintln!(
                "oracle: visited {} candidates in {:.3}s",
                res.visited,
                start.elapsed().as_secs_f64()
            );
            println!("{}", res.value);
        }
    }
    Ok(())
}

fn count_k3(args: K3CountArgs) -> Result<(), AppError> {
    let param = parse_lambda(&args.lambda)?;
    ensure_odd_prime(args.p)?;
    match args.method {
        Method::Formula => {
            let curve = clausen_curve(&param, args.p)?;
            let frob = FrobeniusData::from_curve(&curve, 1)?;
            let gamma = param.gamma(args.p)?;
            let res = if args.dump_terms.is_some() {
                k3_matrix_count_with_terms(args.n, &frob, gamma)?
            } else {
                k3_matrix_count(args.n, &frob, gamma)?
            };
            if let Some(path) = &args.dump_terms {
                dump_tuple_terms(path, res.terms.as_deref())?;
            }
            println!("{}", res.value);
            println!("verdict: {}", res.verdict.as_str());
        }
        Method::Supersingular => {
            let curve = clausen_curve(&param, args.p)?;
            let a = trace(&curve);
            if a != 0 {
                eprintln!(
                    "warning: Clausen-curve trace at p = {} is {a}, not 0; the closed form \
                     below assumes the supersingular case",
                    args.p
                );
            }
            let gamma = param.gamma(args.p)?;
            let res = if args.dump_terms.is_some() {
                k3_supersingular_count_with_terms(args.n, gamma, args.p)?
            } else {
                k3_supersingular_count(args.n, gamma, args.p)?
            };
            if let Some(path) = &args.dump_terms {
                dump_tuple_terms(path, res.terms.as_deref())?;
            }
            println!("{}", res.value);
            println!("verdict: {}", res.verdict.as_str());
        }
        Method::Oracle => {
            reject_dump_for_oracle(&args.dump_terms)?;
            let start = Instant::now();
            let res = oracle_k3(args.n, &param, args.p, args.budget.unwrap_or(DEFAULT_BUDGET))?;
            eprintln!(
                "oracle: visited {} candidates in {:.3}s",
                res.visited,
                start.elapsed().as_secs_f64()
            );
            println!("{}", res.value);
        }
    }
    Ok(())
}

fn trace_cmd(args: TraceArgs) -> Result<(), AppError> {
    let model = parse_curve(&args.curve)?;
    ensure_odd_prime(args.p)?;
    let curve = reduce_curve(&model, args.p)?;
    let a = trace(&curve);
    match args.powers {
        None => println!("{a}"),
        Some(k) => {
            for t in prime_power_traces(a, args.p, k as usize)? {
                println!("{t}");
            }
        }
    }
    Ok(())
}

fn report_skips(skipped: &[SkippedPrime]) {
    for s in skipped {
        eprintln!("skipped p = {}: {}", s.p, s.reason);
    }
}

fn ensure_sweep_bound(xmax: u64) -> Result<(), AppError> {
    if xmax < 17 {
        return Err(AppError::Domain(format!(
            "sweep bound must be at least 17, got {xmax}"
        )));
    }
    Ok(())
}

fn sweep_elliptic_cmd(args: EllipticSweepArgs) -> Result<(), AppError> {
    let model = parse_curve(&args.curve)?;
    ensure_sweep_bound(args.xmax)?;
    if let Some(d) = args.cm_disc {
        if d >= 0 {
            return Err(AppError::Domain(format!(
                "CM discriminant must be negative, got {d}"
            )));
        }
    }
    let cm_disc = args.cm_disc.or(model.cm_discriminant);
    let (records, skipped) = sweep::sweep_elliptic(&model, args.n, args.xmax, cm_disc);
    let mut meta = vec![
        ("kind".to_string(), "elliptic".to_string()),
        (
            "curve".to_string(),
            format!("{},{},{},{},{}", model.a1, model.a2, model.a3, model.a4, model.a6),
        ),
        ("n".to_string(), args.n.to_string()),
        ("xmax".to_string(), args.xmax.to_string()),
    ];
    if let Some(d) = cm_disc {
        meta.push(("cm_disc".to_string(), d.to_string()));
    }
    formats::write_records_csv(&args.out, &records, &meta)?;
    report_skips(&skipped);
    eprintln!(
        "wrote {} records to {} ({} primes skipped)",
        records.len(),
        args.out.display(),
        skipped.len()
    );
    Ok(())
}

/// Density selected by the parameter's regime: all primes follow b1/b2,
/// and for CM parameters the split primes follow b3/b4.
fn regime_density(regime: K3Regime) -> DensityKind {
    match regime {
        K3Regime::OriginalBatman => DensityKind::B1,
        K3Regime::HalfBatman => DensityKind::B2,
        K3Regime::FlyingBatman { .. } => DensityKind::B3,
        K3Regime::HalfFlyingBatman { .. } => DensityKind::B4,
    }
}

fn sweep_k3_cmd(args: K3SweepArgs) -> Result<(), AppError> {
    let param = parse_lambda(&args.lambda)?;
    ensure_sweep_bound(args.xmax)?;
    let (records, skipped) = sweep::sweep_k3(&param, args.n, args.xmax);
    let mut meta = vec![
        ("kind".to_string(), "k3".to_string()),
        ("lambda".to_string(), param.lambda().to_string()),
        ("n".to_string(), args.n.to_string()),
        ("xmax".to_string(), args.xmax.to_string()),
        (
            "expected_density".to_string(),
            regime_density(param.regime()).name().to_string(),
        ),
    ];
    if let Some(d) = param.cm_discriminant() {
        meta.push(("cm_disc".to_string(), d.to_string()));
    }
    formats::write_records_csv(&args.out, &records, &meta)?;
    report_skips(&skipped);
    eprintln!(
        "wrote {} records to {} ({} primes skipped)",
        records.len(),
        args.out.display(),
        skipped.len()
    );
    Ok(())
}

/// Self-contained note attached when the swept parameter sits in (or is
/// often confused with) the arcsine-regime list.
const HALF_FLYING_NOTE: &str = "The parameters whose normalized K3 errors follow the \
    split-prime arcsine-type law b4 are lambda in {-4, 8, -64}. A common variant of this \
    list prints 64 in place of -64, but lambda = -64 is the value whose associated curve \
    has complex multiplication (by the field of discriminant -7), so {-4, 8, -64} is used \
    throughout.";

fn hist_cmd(args: HistArgs) -> Result<(), AppError> {
    let (records, meta) = formats::read_records_csv(&args.input)?;
    let total_read = records.len();
    let samples: Vec<f64> = records
        .iter()
        .filter(|r| !args.split_only || r.split == Some(true))
        .map(|r| r.star_error)
        .collect();
    if samples.is_empty() {
        return Err(AppError::Domain(
            "no samples remain after filtering; nothing to bin".to_string(),
        ));
    }
    let kind = args.density.kind();
    let hist = histogram(&samples, args.bins as usize, kind.support())?;
    let disc = discrepancy(&samples, kind, DEFAULT_GRID_ENDPOINTS)?;

    let mut md = serde_json::Map::new();
    for (k, v) in &meta {
        md.insert(k.clone(), json!(v));
    }
    md.insert("split_only".to_string(), json!(args.split_only));
    md.insert("records_read".to_string(), json!(total_read));
    md.insert("samples_used".to_string(), json!(samples.len()));
    let lambda_meta = meta
        .iter()
        .find(|(k, _)| k == "lambda")
        .and_then(|(_, v)| v.parse::<Rational64>().ok());
    if let Some(lam) = lambda_meta {
        let watched = [
            Rational64::new(-4, 1),
            Rational64::new(8, 1),
            Rational64::new(-64, 1),
            Rational64::new(64, 1),
        ];
        if watched.contains(&lam) {
            md.insert("parameter_set_note".to_string(), json!(HALF_FLYING_NOTE));
        }
    }

    let doc = formats::histogram_doc(&hist, kind, disc, md);
    formats::write_histogram_json(&args.out, &doc)?;
    eprintln!(
        "wrote {} bins over {} samples to {} (discrepancy {:.4})",
        doc.bins.len(),
        doc.sample_size,
        args.out.display(),
        disc
    );
    Ok(())
}

fn verify_cmd(args: VerifyArgs) -> Result<(), AppError> {
    let report = verify::run_suite(args.suite.name(), args.nmax, args.pmax)
        .expect("suite names are enumerated by the parser");
    for line in &report.lines {
        println!("{line}");
    }
    if report.ok {
        Ok(())
    } else {
        Err(AppError::VerifyFailed)
    }
}
