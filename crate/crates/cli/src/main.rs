//! `spl`: batch driver for shifted-prime statistics and their analytic bounds.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 verification failure,
//! 4 resource budget exceeded.

mod format;
mod manifest;

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use format::{parse_count, parse_grid, sig12};
use spl_core::bounds::theorem_bound_informative;
use spl_core::cache::SegmentCache;
use spl_core::dickman::{DEFAULT_STEP, DEFAULT_TOL, DEFAULT_U_MAX};
use spl_core::{
    pair_bound, primes_up_to, s_asymptotic_ratio, s_of_z, scan_tc_with, singular_series,
    theorem_bound, BoundReport, Exponent, PairCounter, RhoSolver, ScanConfig,
};

/// Default cap on x for scans; `--allow-large` lifts it.
const DEFAULT_X_CAP: u64 = 1 << 40;
const DEFAULT_CUTOFF: u64 = 10_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "spl",
    version,
    about = "Largest prime factors of shifted primes p - 1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count (and optionally list) the primes up to n
    Primes(PrimesArgs),
    /// Scan T_c(x) and T'_c(x) over a grid of exponents c
    TcScan(TcScanArgs),
    /// Count prime pairs (q, qh + 1) with 2 < q < y and compare with the sieve bound
    Pairs(PairsArgs),
    /// Evaluate Dickman's rho or solve 1 - rho(1/c) = target
    Dickman(DickmanArgs),
    /// Print the singular series and S(z)
    Constants(ConstantsArgs),
    /// Empirical ratio next to every analytic bound at (x, c)
    BoundReport(BoundReportArgs),
}

#[derive(Args, Debug, Serialize)]
struct PrimesArgs {
    #[arg(long, value_parser = parse_count)]
    n: u64,
    /// Write the primes themselves, one per line
    #[arg(long)]
    list: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ScanOpts {
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Integers per LPF segment
    #[arg(long, value_parser = parse_count, default_value_t = spl_core::sieve::DEFAULT_SEGMENT_LEN)]
    segment_len: u64,
    /// Permit x above 2^40
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args, Debug, Serialize)]
struct TcScanArgs {
    #[arg(long, value_parser = parse_count)]
    x: u64,
    /// start:stop:step in decimals, e.g. 0.5:0.95:0.05
    #[arg(long)]
    c_grid: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Recompute T'_c by the pair-sum identity for every c >= 1/2
    #[arg(long)]
    verify_pairs: bool,
    #[command(flatten)]
    scan: ScanOpts,
}

#[derive(Args, Debug, Serialize)]
struct PairsArgs {
    /// Even shift multiplier; repeatable
    #[arg(long = "h", value_parser = parse_count, required = true)]
    h: Vec<u64>,
    #[arg(long, value_parser = parse_count)]
    y: u64,
    /// Primes included in the singular series
    #[arg(long, value_parser = parse_count, default_value_t = DEFAULT_CUTOFF)]
    cutoff: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct DickmanArgs {
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["solve_target", "table"])]
    u: Option<f64>,
    /// Solve 1 - rho(1/c) = target for c
    #[arg(long, conflicts_with = "table")]
    solve_target: Option<f64>,
    /// Emit a u,rho(u) table
    #[arg(long)]
    table: bool,
    #[arg(long, default_value_t = 0.0625)]
    table_step: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_U_MAX)]
    u_max: f64,
    #[arg(long, default_value_t = DEFAULT_STEP)]
    step: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ConstantsArgs {
    #[arg(long, value_parser = parse_count, default_value_t = DEFAULT_CUTOFF)]
    cutoff: u64,
    /// Also evaluate S(z) (and S(z)·2𝔖/ln z when z >= 10)
    #[arg(long)]
    sz: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
struct BoundReportArgs {
    #[arg(long, value_parser = parse_count)]
    x: u64,
    /// Exponent as a decimal (0.9) or fraction (16/17); repeatable
    #[arg(long = "c", required = true)]
    c: Vec<String>,
    /// Include the sieve sum over x/ln x (c >= 1/2 only)
    #[arg(long)]
    with_sieve_rhs: bool,
    #[arg(long)]
    json: bool,
    /// Exit 3 if the empirical ratio exceeds 8(1/c - 1) for some c >= 8/9
    #[arg(long)]
    strict: bool,
    #[arg(long, value_parser = parse_count, default_value_t = DEFAULT_CUTOFF)]
    cutoff: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    scan: ScanOpts,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification(String),
    Budget(String),
    Other(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Verification(_) => 3,
            Failure::Budget(_) => 4,
            Failure::Other(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m)
            | Failure::Verification(m)
            | Failure::Budget(m)
            | Failure::Other(m) => m,
        }
    }
}

impl From<spl_core::Error> for Failure {
    fn from(e: spl_core::Error) -> Self {
        use spl_core::Error as E;
        match e {
            E::Budget { .. } => Failure::Budget(e.to_string()),
            E::Precondition(_) | E::Domain(_) | E::Range(_) | E::NoRoot(_) => {
                Failure::Usage(e.to_string())
            }
            E::Quadrature(_) | E::CacheFormat(_) | E::Io(_) => Failure::Other(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let result = match &cli.command {
        Command::Primes(a) => cmd_primes(a, started),
        Command::TcScan(a) => cmd_tc_scan(a, started),
        Command::Pairs(a) => cmd_pairs(a, started),
        Command::Dickman(a) => cmd_dickman(a, started),
        Command::Constants(a) => cmd_constants(a),
        Command::BoundReport(a) => cmd_bound_report(a, started),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("spl: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

/// Sends `body` to `out` (with a manifest) or stdout.
fn emit<A: Serialize>(
    out: &Option<PathBuf>,
    body: &str,
    command: &str,
    args: &A,
    started: Instant,
) -> Outcome {
    match out {
        Some(path) => {
            let params = serde_json::to_value(args).map_err(|e| Failure::Other(e.to_string()))?;
            manifest::write_with_manifest(
                path,
                body,
                command,
                params,
                started.elapsed().as_secs_f64(),
            )?;
        }
        None => io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn with_pool<T>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure>
where
    T: Send,
{
    match threads {
        None => Ok(f()),
        Some(0) => Err(Failure::Usage("--threads must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::Other(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn check_x(x: u64, opts: &ScanOpts) -> Outcome {
    if x > DEFAULT_X_CAP && !opts.allow_large {
        return Err(Failure::Budget(format!(
            "x = {x} is above the default cap 2^40; pass --allow-large to proceed"
        )));
    }
    Ok(())
}

fn scan_config(opts: &ScanOpts) -> ScanConfig {
    ScanConfig {
        segment_len: opts.segment_len,
        cache: SegmentCache::from_env(),
    }
}

fn cmd_primes(a: &PrimesArgs, started: Instant) -> Outcome {
    let table = primes_up_to(a.n)?;
    if a.list {
        let mut body = String::new();
        for p in table.primes() {
            let _ = writeln!(body, "{p}");
        }
        emit(&a.out, &body, "primes", a, started)
    } else {
        emit(
            &a.out,
            &format!("{}\n", table.count()),
            "primes",
            a,
            started,
        )
    }
}

fn cmd_tc_scan(a: &TcScanArgs, started: Instant) -> Outcome {
    check_x(a.x, &a.scan)?;
    let grid = parse_grid(&a.c_grid).map_err(Failure::Usage)?;
    let config = scan_config(&a.scan);
    let scan = with_pool(a.scan.threads, || scan_tc_with(a.x, &grid, &config))??;

    if a.verify_pairs {
        let counter = PairCounter::new(a.x)?;
        for row in scan.rows.iter().filter(|r| 2 * r.c.num() >= r.c.den()) {
            let pairs = counter.tprime_via_pairs(a.x, row.c)?;
            if pairs != row.t_prime_c {
                return Err(Failure::Verification(format!(
                    "x = {}, c = {}: scan gives T'_c = {}, pair sum gives {pairs}",
                    a.x, row.c, row.t_prime_c
                )));
            }
        }
    }

    let solver = RhoSolver::new(DEFAULT_U_MAX, DEFAULT_STEP, DEFAULT_TOL)?;
    let mut body = String::from(
        "x,c_num,c_den,t_c,t_prime_c,pi_x,ratio_t,ratio_t_prime,eh_prediction,theorem_bound,lemma2_gap_normalized\n",
    );
    for r in &scan.rows {
        let eh = solver.eh_density(r.c.to_f64())?;
        let _ = writeln!(
            body,
            "{},{},{},{},{},{},{},{},{},{},{}",
            scan.x,
            r.c.num(),
            r.c.den(),
            r.t_c,
            r.t_prime_c,
            r.pi_x,
            sig12(r.ratio_t),
            sig12(r.ratio_t_prime),
            sig12(eh),
            sig12(theorem_bound(r.c)),
            sig12(r.lemma2_gap_normalized)
        );
    }
    emit(&a.out, &body, "tc-scan", a, started)
}

fn cmd_pairs(a: &PairsArgs, started: Instant) -> Outcome {
    let h_max = *a.h.iter().max().unwrap();
    let ss = singular_series(a.cutoff)?;
    let limit = h_max
        .checked_mul(a.y.saturating_sub(1))
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| Failure::Budget(format!("h*y overflows for h = {h_max}, y = {}", a.y)))?;
    let counter = PairCounter::new(limit)?;
    let mut body = String::from("h,y,count,pair_bound,bound_over_count\n");
    for &h in &a.h {
        let count = counter.prime_pair_count(h, a.y)?;
        let bound = pair_bound(h, a.y as f64, &ss)?;
        let ratio = if count == 0 {
            String::new()
        } else {
            sig12(bound / count as f64)
        };
        let _ = writeln!(body, "{h},{},{count},{},{ratio}", a.y, sig12(bound));
    }
    emit(&a.out, &body, "pairs", a, started)
}

fn cmd_dickman(a: &DickmanArgs, started: Instant) -> Outcome {
    let solver = RhoSolver::new(a.u_max, a.step, a.tol)?;
    if let Some(u) = a.u {
        println!("{}", sig12(solver.rho(u)?));
        return Ok(());
    }
    if let Some(target) = a.solve_target {
        println!("{}", sig12(solver.solve_eh_threshold(target)?));
        return Ok(());
    }
    if a.table {
        let mut body = String::from("u,rho\n");
        for (u, rho) in solver.table(a.table_step)? {
            let _ = writeln!(body, "{},{}", sig12(u), sig12(rho));
        }
        return emit(&a.out, &body, "dickman", a, started);
    }
    Err(Failure::Usage(
        "dickman needs one of --u, --solve-target or --table".into(),
    ))
}

fn cmd_constants(a: &ConstantsArgs) -> Outcome {
    let ss = singular_series(a.cutoff)?;
    let mut body = String::from("quantity,value\n");
    let _ = writeln!(body, "singular_series,{}", sig12(ss.value));
    let _ = writeln!(body, "cutoff,{}", ss.cutoff);
    let _ = writeln!(body, "largest_prime,{}", ss.largest_prime);
    let _ = writeln!(body, "tail_bound,{}", sig12(ss.tail_bound));
    if let Some(z) = a.sz {
        let _ = writeln!(body, "z,{}", sig12(z));
        let _ = writeln!(body, "s_of_z,{}", sig12(s_of_z(z)?));
        if z >= 10.0 {
            let _ = writeln!(
                body,
                "s_asymptotic_ratio,{}",
                sig12(s_asymptotic_ratio(z, &ss)?)
            );
        }
    }
    io::stdout().lock().write_all(body.as_bytes())?;
    Ok(())
}

#[derive(Serialize)]
struct ReportRow {
    x: u64,
    c_num: u64,
    c_den: u64,
    empirical_ratio: f64,
    eh_prediction: f64,
    theorem_bound: f64,
    closed_form_limit: f64,
    sieve_rhs_normalized: Option<f64>,
}

fn cmd_bound_report(a: &BoundReportArgs, started: Instant) -> Outcome {
    check_x(a.x, &a.scan)?;
    let cs =
        a.c.iter()
            .map(|s| Exponent::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
    let config = scan_config(&a.scan);
    let scan = with_pool(a.scan.threads, || scan_tc_with(a.x, &cs, &config))??;
    let solver = RhoSolver::new(DEFAULT_U_MAX, DEFAULT_STEP, DEFAULT_TOL)?;
    let ss = singular_series(a.cutoff)?;

    let mut reports = Vec::new();
    for row in &scan.rows {
        reports.push(BoundReport::assemble(
            a.x,
            row,
            &solver,
            &ss,
            a.with_sieve_rhs,
        )?);
    }

    let body = if a.json {
        let rows: Vec<ReportRow> = reports
            .iter()
            .map(|r| ReportRow {
                x: r.x,
                c_num: r.c.num(),
                c_den: r.c.den(),
                empirical_ratio: r.empirical_ratio,
                eh_prediction: r.eh_prediction,
                theorem_bound: r.theorem_bound,
                closed_form_limit: r.closed_form_limit,
                sieve_rhs_normalized: r.sieve_rhs_normalized,
            })
            .collect();
        serde_json::to_string_pretty(&rows).map_err(|e| Failure::Other(e.to_string()))? + "\n"
    } else {
        let mut body = String::from(
            "x,c_num,c_den,empirical_ratio,eh_prediction,theorem_bound,closed_form_limit,sieve_rhs_normalized\n",
        );
        for r in &reports {
            let _ = writeln!(
                body,
                "{},{},{},{},{},{},{},{}",
                r.x,
                r.c.num(),
                r.c.den(),
                sig12(r.empirical_ratio),
                sig12(r.eh_prediction),
                sig12(r.theorem_bound),
                sig12(r.closed_form_limit),
                r.sieve_rhs_normalized.map(sig12).unwrap_or_default()
            );
        }
        body
    };
    emit(&a.out, &body, "bound-report", a, started)?;

    if a.strict {
        // c ≥ 8/9 is where the bound is at most 1
        let violations: Vec<String> = reports
            .iter()
            .filter(|r| {
                (theorem_bound_informative(r.c) || r.theorem_bound == 1.0) && !r.within_bound()
            })
            .map(|r| format!("c = {}: {} > {}", r.c, r.empirical_ratio, r.theorem_bound))
            .collect();
        if !violations.is_empty() {
            return Err(Failure::Verification(format!(
                "empirical ratio above 8(1/c - 1): {}",
                violations.join("; ")
            )));
        }
    }
    Ok(())
}
