//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use spl_core::bounds::{partial_summation_closed_form, partial_summation_quadrature};
use spl_core::sieve::lpf_segment;
use spl_core::{
    pair_bound, primes_up_to, s_asymptotic_ratio, s_of_z, s_of_z_exact, scan_tc, singular_series,
    theorem_bound, theorem_bound_exact, DensityScan, Exponent, PairCounter, RhoSolver,
};

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exp(s: &str) -> Exponent {
    Exponent::parse(s).unwrap()
}

fn sieve_correctness() -> Check {
    let table = primes_up_to(1_000_000).map_err(|e| e.to_string())?;
    ensure(table.count() == 78_498, || {
        format!("pi(10^6) = {}", table.count())
    })?;
    let naive = (2..=100_000u64)
        .filter(|&n| common::is_prime_trial(n))
        .count() as u64;
    let pi5 = table.pi(100_000).unwrap();
    ensure(naive == 9592 && pi5 == 9592, || {
        format!("pi(10^5): sieve {pi5}, trial division {naive}")
    })?;
    let base = primes_up_to(400).unwrap();
    let seg = lpf_segment(1, 100_001, &base).map_err(|e| e.to_string())?;
    for n in 1..=100_000u64 {
        let want = common::trial_lpf(n);
        ensure(seg.get(n) == want, || {
            format!("P+({n}) = {}, want {want}", seg.get(n))
        })?;
    }
    Ok("pi(10^6) = 78498, pi(10^5) = 9592, P+ exact for n <= 10^5".into())
}

fn oracle_equality() -> Check {
    let grid: Vec<Exponent> = ["1/2", "3/5", "2/3", "3/4", "9/10"]
        .iter()
        .map(|s| exp(s))
        .collect();
    let mut checked = 0;
    for x in [10_000u64, 100_000, 1_000_000] {
        let scan = scan_tc(x, &grid).map_err(|e| e.to_string())?;
        let counter = PairCounter::new(x).map_err(|e| e.to_string())?;
        for row in &scan.rows {
            let pairs = counter
                .tprime_via_pairs(x, row.c)
                .map_err(|e| e.to_string())?;
            ensure(pairs == row.t_prime_c, || {
                format!(
                    "x = {x}, c = {}: scan {} vs pairs {pairs}",
                    row.c, row.t_prime_c
                )
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (x, c) cells equal"))
}

fn t_half_100() -> Check {
    let scan = scan_tc(100, &[exp("1/2")]).map_err(|e| e.to_string())?;
    let t = scan.rows[0].t_c;
    ensure(t == 13, || format!("T_1/2(100) = {t}"))?;
    Ok("T_1/2(100) = 13".into())
}

fn dickman_closed_forms() -> Check {
    let s = RhoSolver::default();
    let mut worst = 0.0f64;
    for i in 0..50 {
        let u = 1.0 + i as f64 / 49.0;
        worst = worst.max((s.rho(u).unwrap() - (1.0 - u.ln())).abs());
    }
    ensure(worst <= 1e-9, || {
        format!("max |rho - (1 - ln u)| = {worst:e}")
    })?;
    let half = s.rho(0.5f64.exp()).unwrap();
    ensure((half - 0.5).abs() <= 1e-9, || {
        format!("rho(e^1/2) = {half}")
    })?;
    let c = s.solve_eh_threshold(0.5).map_err(|e| e.to_string())?;
    ensure((c - 0.606_530_659_712_633_4).abs() <= 1e-8, || {
        format!("threshold {c}")
    })?;
    let d = 1e-5;
    let mut fd_worst = 0.0f64;
    for u in [1.5, 2.5, 3.5] {
        let deriv = (s.rho(u + d).unwrap() - s.rho(u - d).unwrap()) / (2.0 * d);
        fd_worst = fd_worst.max((u * deriv + s.rho(u - 1.0).unwrap()).abs());
    }
    ensure(fd_worst <= 1e-6, || {
        format!("finite-difference residual {fd_worst:e}")
    })?;
    Ok(format!(
        "closed-form err {worst:.1e}, threshold {c:.10}, ODE residual {fd_worst:.1e}"
    ))
}

fn singular_series_check() -> Check {
    let a = singular_series(10_000_000).map_err(|e| e.to_string())?;
    let b = singular_series(100_000_000).map_err(|e| e.to_string())?;
    let diff = (a.value - b.value).abs();
    ensure(diff < a.tail_bound, || {
        format!("|S(1e7) - S(1e8)| = {diff:e} >= tail {:e}", a.tail_bound)
    })?;
    ensure((0.660_161_0..=0.660_162_6).contains(&b.value), || {
        format!("S(1e8) = {}", b.value)
    })?;
    Ok(format!(
        "S(1e8) = {:.10}, change {diff:.2e} < tail {:.1e}",
        b.value, a.tail_bound
    ))
}

fn s_of_z_check() -> Check {
    let big = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    for (z, want) in [(1.5, big(0, 1)), (3.0, big(1, 2)), (8.0, big(13, 12))] {
        let got = s_of_z_exact(z).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("S({z}) = {got}, want {want}"))?;
        let float = s_of_z(z).unwrap();
        let wf = num_traits::ToPrimitive::to_f64(&want).unwrap();
        ensure((float - wf).abs() < 1e-15, || {
            format!("float S({z}) = {float}")
        })?;
    }
    let ss = singular_series(100_000_000).map_err(|e| e.to_string())?;
    let r3 = s_asymptotic_ratio(1e3, &ss).unwrap();
    let r6 = s_asymptotic_ratio(1e6, &ss).unwrap();
    ensure((r6 - 1.0).abs() < (r3 - 1.0).abs(), || {
        format!("ratio {r3} -> {r6}")
    })?;
    Ok(format!(
        "exact values ok; S·2𝔖/ln z: {r3:.4} (1e3) -> {r6:.4} (1e6)"
    ))
}

fn pair_dominance() -> Check {
    let ss = singular_series(100_000_000).map_err(|e| e.to_string())?;
    let counter = PairCounter::new(98 * 1_000_000).map_err(|e| e.to_string())?;
    let mut min_slack = f64::INFINITY;
    for h in (2..100u64).step_by(2) {
        for y in [10_000u64, 100_000, 1_000_000] {
            let count = counter.prime_pair_count(h, y).map_err(|e| e.to_string())?;
            let bound = pair_bound(h, y as f64, &ss).map_err(|e| e.to_string())?;
            ensure(count as f64 <= bound, || {
                format!("h = {h}, y = {y}: {count} > {bound}")
            })?;
            min_slack = min_slack.min(bound / count as f64);
        }
    }
    Ok(format!(
        "147 cells dominated, smallest bound/count = {min_slack:.2}"
    ))
}

fn theorem_bound_check(scan: &DensityScan) -> Check {
    ensure(
        theorem_bound_exact(exp("8/9")) == Ratio::from_integer(1),
        || "8(1/c - 1) at 8/9 is not 1".into(),
    )?;
    ensure(
        theorem_bound_exact(exp("16/17")) == Ratio::new(1, 2),
        || "8(1/c - 1) at 16/17 is not 1/2".into(),
    )?;
    let mut detail = String::new();
    for c in ["0.89", "0.92", "0.95"] {
        let c = exp(c);
        let row = scan.row(c).ok_or("missing row")?;
        let bound = theorem_bound(c);
        ensure(row.ratio_t <= 0.5 * bound, || {
            format!("c = {c}: ratio {} above half of {bound}", row.ratio_t)
        })?;
        let _ = write!(detail, "c={c}: {:.4} <= {:.4}/2; ", row.ratio_t, bound);
    }
    Ok(detail.trim_end_matches("; ").to_string())
}

fn lemma2_gap(scans: &[DensityScan]) -> Check {
    let c = exp("0.7");
    let gaps: Vec<f64> = scans
        .iter()
        .map(|s| s.row(c).unwrap().lemma2_gap_normalized)
        .collect();
    let max = gaps.iter().cloned().fold(f64::MIN, f64::max);
    let min = gaps.iter().cloned().fold(f64::MAX, f64::min);
    ensure(min > 0.0 && max / min < 10.0, || format!("gaps {gaps:?}"))?;
    Ok(format!("gaps {:.4?}, max/min = {:.3}", gaps, max / min))
}

fn partial_summation() -> Check {
    let ss = singular_series(100_000_000).map_err(|e| e.to_string())?;
    let x = 1e12f64;
    let mut detail = String::new();
    for c in [0.5, 0.75, 0.9] {
        let q = partial_summation_quadrature(c, x, &ss).map_err(|e| e.to_string())? * x.ln();
        let cf = partial_summation_closed_form(c, &ss).unwrap();
        let rel = ((q - cf) / cf).abs();
        ensure(rel < 0.05, || format!("c = {c}: {q} vs {cf}"))?;
        let _ = write!(detail, "c={c}: rel gap {rel:.1e}; ");
    }
    Ok(detail.trim_end_matches("; ").to_string())
}

fn eh_trend(small: &DensityScan, large: &DensityScan, csv_path: &PathBuf) -> Check {
    let solver = RhoSolver::default();
    let mut csv = String::from("x,c_num,c_den,ratio_t,eh_prediction,abs_deviation\n");
    let mut failures = Vec::new();
    let mut detail = String::new();
    for c in ["0.6", "0.7", "0.8", "0.9"] {
        let c = exp(c);
        let eh = solver.eh_density(c.to_f64()).unwrap();
        let mut devs = Vec::new();
        for scan in [small, large] {
            let row = scan.row(c).unwrap();
            let dev = (row.ratio_t - eh).abs();
            let _ = writeln!(
                csv,
                "{},{},{},{:.12},{:.12},{:.12}",
                scan.x,
                c.num(),
                c.den(),
                row.ratio_t,
                eh,
                dev
            );
            devs.push(dev);
        }
        if devs[1] >= devs[0] {
            failures.push(format!("c = {c}: {:.5} -> {:.5}", devs[0], devs[1]));
        }
        let _ = write!(detail, "c={c}: {:.4} -> {:.4}; ", devs[0], devs[1]);
    }
    fs::write(csv_path, csv).map_err(|e| e.to_string())?;
    ensure(failures.is_empty(), || failures.join(", "))?;
    Ok(format!("{}(archived to {})", detail, csv_path.display()))
}

struct Runner {
    failed: usize,
}

impl Runner {
    fn run(&mut self, id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Check) {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let result = result.and_then(|d| {
            if elapsed <= limit {
                Ok(d)
            } else {
                Err(format!("{d}; took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match result {
            Ok(detail) => println!("PASS [{id:>2}] {name}: {detail} ({elapsed:.2?})"),
            Err(detail) => {
                self.failed += 1;
                println!("FAIL [{id:>2}] {name}: {detail} ({elapsed:.2?})");
            }
        }
    }
}

fn main() -> ExitCode {
    let mut runner = Runner { failed: 0 };
    let secs = Duration::from_secs;

    runner.run(1, "sieve correctness", secs(5), sieve_correctness);
    runner.run(2, "pair-sum oracle equals scan", secs(60), oracle_equality);
    runner.run(3, "T_1/2(100) = 13", secs(5), t_half_100);
    runner.run(4, "Dickman closed forms", secs(1), dickman_closed_forms);
    runner.run(5, "singular series", secs(30), singular_series_check);
    runner.run(6, "S(z) values and trend", secs(30), s_of_z_check);
    runner.run(7, "pair bound dominance", secs(600), pair_dominance);

    let grid: Vec<Exponent> = ["0.6", "0.7", "0.8", "0.89", "0.9", "0.92", "0.95"]
        .iter()
        .map(|s| exp(s))
        .collect();
    let scan_start = Instant::now();
    let scans: Vec<DensityScan> = [100_000u64, 1_000_000, 10_000_000, 100_000_000]
        .iter()
        .map(|&x| scan_tc(x, &grid).expect("scan"))
        .collect();
    let scan_time = scan_start.elapsed();
    println!("     scans at x = 10^5..10^8 took {scan_time:.2?}");

    runner.run(
        8,
        "theorem bound at x = 10^8",
        secs(900).saturating_sub(scan_time),
        || theorem_bound_check(&scans[3]),
    );
    runner.run(9, "normalized T_c - T'_c stays bounded", secs(60), || {
        lemma2_gap(&scans)
    });
    runner.run(
        10,
        "partial summation quadrature",
        secs(1),
        partial_summation,
    );
    let csv_path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance_eh_deviation.csv");
    runner.run(11, "EH deviation shrinks 10^5 -> 10^8", secs(60), || {
        eh_trend(&scans[0], &scans[3], &csv_path)
    });

    if runner.failed == 0 {
        println!("acceptance: all 11 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", runner.failed);
        ExitCode::FAILURE
    }
}
