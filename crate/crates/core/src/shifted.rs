//! Counting primes p ≤ x whose shifted value p − 1 has a large prime factor.
//!
//! `T_c(x)` counts p with P⁺(p−1) ≥ p^c and `T'_c(x)` counts p with
//! P⁺(p−1) ≥ x^c. Both thresholds are closed and decided exactly.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::cache::SegmentCache;
use crate::error::{Error, Result};
use crate::exponent::{ceil_root_pow, cmp_pow, cmp_pow_exact, Exponent};
use crate::sieve::{
    primes_up_to, segments, LpfSieve, OddSieve, DEFAULT_PRIME_LIMIT_CAP, DEFAULT_SEGMENT_LEN,
    MAX_LPF_HI, MAX_SEGMENT_LEN,
};

/// Smallest x accepted by [`scan_tc`].
pub const MIN_SCAN_X: u64 = 100;

/// True iff `q ≥ p^c`, i.e. `q^den ≥ p^num`.
pub fn holds_threshold(q: u64, p: u64, c: Exponent) -> bool {
    cmp_pow(q, c.den(), p, c.num()) != Ordering::Less
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityRow {
    pub c: Exponent,
    pub t_c: u64,
    pub t_prime_c: u64,
    pub pi_x: u64,
    pub ratio_t: f64,
    pub ratio_t_prime: f64,
    /// (T_c − T'_c)(ln x)² / (x ln ln x).
    pub lemma2_gap_normalized: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityScan {
    pub x: u64,
    pub rows: Vec<DensityRow>,
}

impl DensityScan {
    pub fn row(&self, c: Exponent) -> Option<&DensityRow> {
        self.rows.iter().find(|r| r.c == c)
    }
}

/// Knobs for [`scan_tc_with`].
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub segment_len: u64,
    pub cache: Option<SegmentCache>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            segment_len: DEFAULT_SEGMENT_LEN,
            cache: None,
        }
    }
}

pub fn scan_tc(x: u64, grid: &[Exponent]) -> Result<DensityScan> {
    scan_tc_with(x, grid, &ScanConfig::default())
}

/// One pass over the LPF segments of `[1, x]`, counting T_c and T'_c for
/// every exponent of `grid` at once. Rows come back sorted by c.
///
/// Runs on the current rayon pool; counts are summed per segment, so the
/// result does not depend on scheduling.
pub fn scan_tc_with(x: u64, grid: &[Exponent], config: &ScanConfig) -> Result<DensityScan> {
    if x < MIN_SCAN_X {
        return Err(Error::precondition(format!(
            "scan needs x >= {MIN_SCAN_X}, got {x}"
        )));
    }
    if x >= MAX_LPF_HI {
        return Err(Error::Range(format!("x = {x} is not below 2^63")));
    }
    if grid.is_empty() {
        return Err(Error::precondition("exponent grid is empty"));
    }
    if config.segment_len == 0 || config.segment_len > MAX_SEGMENT_LEN {
        return Err(Error::Budget {
            what: "segment length",
            requested: config.segment_len,
            cap: MAX_SEGMENT_LEN,
            hint: format!(
                "choose a segment length between 1 and {MAX_SEGMENT_LEN} (default {DEFAULT_SEGMENT_LEN})"
            ),
        });
    }

    let mut grid = grid.to_vec();
    grid.sort();
    grid.dedup();
    let k = grid.len();
    let exps: Vec<(u64, u64)> = grid.iter().map(|c| (c.num(), c.den())).collect();
    // q ≥ x^c  ⇔  q ≥ ceil(x^c)
    let x_thresholds: Vec<u64> = grid
        .iter()
        .map(|c| ceil_root_pow(x, c.num(), c.den()))
        .collect();

    let base = primes_up_to(x.isqrt().max(2))?;
    // segment [lo, hi) of candidate primes m, sieved over [lo − 1, hi)
    let work: Vec<(u64, u64)> = segments(2, x + 1, config.segment_len).collect();

    let partials: Vec<Result<Counts>> = work
        .par_iter()
        .map_init(
            || (LpfSieve::default(), Vec::new()),
            |(sieve, buf), &(lo, hi)| {
                match &config.cache {
                    Some(cache) => cache.fill(lo - 1, hi, &base, sieve, buf)?,
                    None => sieve.fill(lo - 1, hi, base.primes(), buf),
                }
                Ok(count_segment(lo, buf, &exps, &x_thresholds))
            },
        )
        .collect();

    let mut total = Counts::new(k);
    for part in partials {
        total.add(&part?);
    }

    let xf = x as f64;
    let lx = xf.ln();
    let rows = grid
        .iter()
        .enumerate()
        .map(|(i, &c)| DensityRow {
            c,
            t_c: total.t[i],
            t_prime_c: total.t_prime[i],
            pi_x: total.pi,
            ratio_t: total.t[i] as f64 / total.pi as f64,
            ratio_t_prime: total.t_prime[i] as f64 / total.pi as f64,
            lemma2_gap_normalized: (total.t[i] - total.t_prime[i]) as f64 * lx * lx
                / (xf * lx.ln()),
        })
        .collect();
    Ok(DensityScan { x, rows })
}

#[derive(Debug, Clone)]
struct Counts {
    pi: u64,
    t: Vec<u64>,
    t_prime: Vec<u64>,
}

impl Counts {
    fn new(k: usize) -> Self {
        Counts {
            pi: 0,
            t: vec![0; k],
            t_prime: vec![0; k],
        }
    }

    fn add(&mut self, other: &Counts) {
        self.pi += other.pi;
        for (a, b) in self.t.iter_mut().zip(&other.t) {
            *a += b;
        }
        for (a, b) in self.t_prime.iter_mut().zip(&other.t_prime) {
            *a += b;
        }
    }
}

/// `lpf[j]` is P⁺(lo − 1 + j); candidates m run over `[lo, lo − 1 + lpf.len())`.
fn count_segment(lo: u64, lpf: &[u64], exps: &[(u64, u64)], x_thresholds: &[u64]) -> Counts {
    let mut counts = Counts::new(exps.len());
    for j in 1..lpf.len() {
        let m = lo - 1 + j as u64;
        if lpf[j] != m {
            continue;
        }
        counts.pi += 1;
        let q = lpf[j - 1];
        // exponents ascend, so both conditions fail from some index on
        let lq = (q as f64).ln();
        let lm = (m as f64).ln();
        for (i, &(num, den)) in exps.iter().enumerate() {
            let lhs = den as f64 * lq;
            let rhs = num as f64 * lm;
            let margin = 1e-12 * (lhs.abs() + rhs.abs());
            let holds = if lhs - rhs > margin {
                true
            } else if rhs - lhs > margin {
                false
            } else {
                cmp_pow_exact(q, den, m, num) != Ordering::Less
            };
            if !holds {
                break;
            }
            counts.t[i] += 1;
        }
        for (i, &threshold) in x_thresholds.iter().enumerate() {
            if q < threshold {
                break;
            }
            counts.t_prime[i] += 1;
        }
    }
    counts
}

/// Primality lookups backing the pair-sum identity and pair counts.
#[derive(Debug, Clone)]
pub struct PairCounter {
    sieve: OddSieve,
}

impl PairCounter {
    /// Sieves up to `limit`, refusing anything above [`DEFAULT_PRIME_LIMIT_CAP`].
    pub fn new(limit: u64) -> Result<Self> {
        if limit > DEFAULT_PRIME_LIMIT_CAP {
            return Err(Error::Budget {
                what: "primality sieve limit",
                requested: limit,
                cap: DEFAULT_PRIME_LIMIT_CAP,
                hint: "pair counts need a sieve up to h*y + 1 (or x)".into(),
            });
        }
        Ok(PairCounter {
            sieve: OddSieve::new(limit.max(2)),
        })
    }

    pub fn limit(&self) -> u64 {
        self.sieve.limit()
    }

    /// T'_c(x) as Σ over primes x^c ≤ q < x of #{h ≥ 1 : qh + 1 ≤ x prime}.
    ///
    /// For c ≥ 1/2 each p − 1 ≤ x − 1 has at most one prime factor ≥ x^c,
    /// so the sum counts every p exactly once.
    pub fn tprime_via_pairs(&self, x: u64, c: Exponent) -> Result<u64> {
        if 2 * c.num() < c.den() {
            return Err(Error::precondition(format!(
                "pair identity needs c >= 1/2, got {c}"
            )));
        }
        self.check_limit(x)?;
        let q0 = ceil_root_pow(x, c.num(), c.den());
        let mut total = 0u64;
        for q in self
            .sieve
            .primes()
            .skip_while(|&q| q < q0)
            .take_while(|&q| q < x)
        {
            // odd q needs even h for qh + 1 to be odd
            let step = if q == 2 { 1 } else { 2 };
            let mut p = q * step + 1;
            while p <= x {
                if self.sieve.is_prime(p) {
                    total += 1;
                }
                p += q * step;
            }
        }
        Ok(total)
    }

    /// #{primes q : 2 < q < y, qh + 1 prime}.
    pub fn prime_pair_count(&self, h: u64, y: u64) -> Result<u64> {
        check_even_h(h)?;
        if y <= 3 {
            return Ok(0);
        }
        self.check_limit(h * (y - 1) + 1)?;
        Ok(self
            .sieve
            .primes()
            .skip(1)
            .take_while(|&q| q < y)
            .filter(|&q| self.sieve.is_prime(q * h + 1))
            .count() as u64)
    }

    fn check_limit(&self, n: u64) -> Result<()> {
        if n > self.sieve.limit() {
            return Err(Error::Range(format!(
                "needs primality up to {n}, sieve stops at {}",
                self.sieve.limit()
            )));
        }
        Ok(())
    }
}

pub(crate) fn check_even_h(h: u64) -> Result<()> {
    if h < 2 || !h.is_multiple_of(2) {
        return Err(Error::precondition(format!(
            "h must be even and at least 2, got {h}"
        )));
    }
    Ok(())
}

/// Standalone form of [`PairCounter::tprime_via_pairs`].
pub fn tprime_via_pairs(x: u64, c: Exponent) -> Result<u64> {
    if 2 * c.num() < c.den() {
        return Err(Error::precondition(format!(
            "pair identity needs c >= 1/2, got {c}"
        )));
    }
    PairCounter::new(x)?.tprime_via_pairs(x, c)
}

/// Standalone form of [`PairCounter::prime_pair_count`].
pub fn prime_pair_count(h: u64, y: u64) -> Result<u64> {
    check_even_h(h)?;
    if y <= 3 {
        return Ok(0);
    }
    let limit = h
        .checked_mul(y - 1)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| Error::Range(format!("h*y overflows for h = {h}, y = {y}")))?;
    PairCounter::new(limit)?.prime_pair_count(h, y)
}
