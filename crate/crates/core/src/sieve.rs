//! Prime tables and segmented largest-prime-factor sieves.
//!
//! Two sieves live here:
//!
//! * [`OddSieve`], a bit-packed sieve of Eratosthenes over odd integers that
//!   backs [`primes_up_to`] and the primality lookups of the pair counters.
//! * [`LpfSieve`], which computes P⁺(n) for every n in an interval `[lo, hi)`.
//!   Each entry starts as a residual equal to n. Every base prime
//!   p ≤ √(hi−1) is divided out of its multiples, and p is remembered as the
//!   current maximum. A residual still above 1 at the end has no factor
//!   ≤ √(hi−1), so it is a prime larger than every recorded divisor and is
//!   P⁺(n) itself.
//!
//! Divisibility inside the LPF sieve uses the multiplicative inverse of p
//! modulo 2⁶⁴: for odd p, `n * inv(p)` wraps to `n / p` exactly when p | n,
//! and to a value above `u64::MAX / p` otherwise. This replaces the hardware
//! division in the inner loop with a multiplication.

use crate::error::{Error, Result};

/// Default number of integers handled per LPF segment.
pub const DEFAULT_SEGMENT_LEN: u64 = 1 << 22;

/// Largest segment a single [`lpf_segment`] call may allocate.
pub const MAX_SEGMENT_LEN: u64 = 1 << 26;

/// Default cap on the limit passed to [`primes_up_to`].
pub const DEFAULT_PRIME_LIMIT_CAP: u64 = 1 << 32;

/// Residuals are 64-bit; intervals must end at or below this bound.
pub const MAX_LPF_HI: u64 = 1 << 63;

/// Bit-packed sieve over the odd integers `1, 3, 5, …, limit`.
///
/// A set bit marks a composite (or 1).
#[derive(Debug, Clone)]
pub struct OddSieve {
    limit: u64,
    composite: Vec<u64>,
}

impl OddSieve {
    pub fn new(limit: u64) -> Self {
        let bits = limit / 2 + 1;
        let mut composite = vec![0u64; bits.div_ceil(64) as usize];
        // 1 is not prime
        composite[0] |= 1;
        let mut p = 3u64;
        while p * p <= limit {
            if composite[(p / 2 / 64) as usize] & (1 << ((p / 2) % 64)) == 0 {
                let mut idx = (p * p) / 2;
                while idx < bits {
                    composite[(idx / 64) as usize] |= 1 << (idx % 64);
                    idx += p;
                }
            }
            p += 2;
        }
        OddSieve { limit, composite }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Panics if `n` exceeds the sieve limit.
    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(
            n <= self.limit,
            "{n} is above the sieve limit {}",
            self.limit
        );
        if n.is_multiple_of(2) {
            return n == 2;
        }
        let idx = n / 2;
        self.composite[(idx / 64) as usize] & (1 << (idx % 64)) == 0
    }

    /// Ascending primes up to the sieve limit.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        let two = (self.limit >= 2).then_some(2);
        let limit = self.limit;
        let odd = self
            .composite
            .iter()
            .enumerate()
            .flat_map(|(w, &word)| {
                let mut free = !word;
                std::iter::from_fn(move || {
                    if free == 0 {
                        return None;
                    }
                    let bit = free.trailing_zeros() as u64;
                    free &= free - 1;
                    Some(2 * (w as u64 * 64 + bit) + 1)
                })
            })
            .take_while(move |&n| n <= limit);
        two.into_iter().chain(odd)
    }
}

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// π(limit).
    pub fn count(&self) -> u64 {
        self.primes.len() as u64
    }

    /// π(x), the number of primes not exceeding `x`.
    pub fn pi(&self, x: u64) -> Result<u64> {
        if x > self.limit {
            return Err(Error::Range(format!(
                "pi({x}) requested from a table that stops at {}",
                self.limit
            )));
        }
        Ok(self.primes.partition_point(|&p| p <= x) as u64)
    }
}

/// Free-function form of [`PrimeTable::pi`].
pub fn pi(x: u64, table: &PrimeTable) -> Result<u64> {
    table.pi(x)
}

pub fn primes_up_to(n: u64) -> Result<PrimeTable> {
    primes_up_to_capped(n, DEFAULT_PRIME_LIMIT_CAP)
}

/// Like [`primes_up_to`] with an explicit cap on `n`.
pub fn primes_up_to_capped(n: u64, cap: u64) -> Result<PrimeTable> {
    if n < 2 {
        return Err(Error::precondition(format!(
            "prime table limit must be at least 2, got {n}"
        )));
    }
    if n > cap {
        return Err(Error::Budget {
            what: "prime table limit",
            requested: n,
            cap,
            hint: "raise the cap explicitly or sieve in segments".into(),
        });
    }
    let sieve = OddSieve::new(n);
    Ok(PrimeTable {
        limit: n,
        primes: sieve.primes().collect(),
    })
}

/// P⁺(n) for every n in `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpfSegment {
    pub lo: u64,
    pub hi: u64,
    pub lpf: Vec<u64>,
}

impl LpfSegment {
    /// P⁺(n); panics when `n` lies outside the segment.
    #[inline]
    pub fn get(&self, n: u64) -> u64 {
        assert!(
            (self.lo..self.hi).contains(&n),
            "{n} outside [{}, {})",
            self.lo,
            self.hi
        );
        self.lpf[(n - self.lo) as usize]
    }

    pub fn len(&self) -> usize {
        self.lpf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lpf.is_empty()
    }
}

/// Computes the LPF segment for `[lo, hi)`. Pure; safe to call from many threads.
pub fn lpf_segment(lo: u64, hi: u64, base: &PrimeTable) -> Result<LpfSegment> {
    check_segment(lo, hi, base)?;
    if hi - lo > MAX_SEGMENT_LEN {
        return Err(Error::Budget {
            what: "segment length",
            requested: hi - lo,
            cap: MAX_SEGMENT_LEN,
            hint: format!("split the interval into segments of at most {MAX_SEGMENT_LEN}"),
        });
    }
    let mut lpf = Vec::new();
    LpfSieve::default().fill(lo, hi, base.primes(), &mut lpf);
    Ok(LpfSegment { lo, hi, lpf })
}

pub(crate) fn check_segment(lo: u64, hi: u64, base: &PrimeTable) -> Result<()> {
    if lo == 0 {
        return Err(Error::precondition(
            "P+(0) is undefined; segments start at 1",
        ));
    }
    if hi <= lo {
        return Err(Error::precondition(format!("empty interval [{lo}, {hi})")));
    }
    if hi > MAX_LPF_HI {
        return Err(Error::Range(format!("segment end {hi} above 2^63")));
    }
    let need = (hi - 1).isqrt();
    if base.limit() < need {
        return Err(Error::precondition(format!(
            "base table stops at {} but [{lo}, {hi}) needs primes up to {need}",
            base.limit()
        )));
    }
    Ok(())
}

/// Reusable scratch space for LPF segments.
#[derive(Debug, Default)]
pub struct LpfSieve {
    max_small: Vec<u32>,
}

impl LpfSieve {
    /// Writes P⁺(n) for n in `[lo, hi)` into `out` (resized to `hi − lo`).
    ///
    /// `base` must be ascending and contain every prime ≤ √(hi−1); primes
    /// beyond that are ignored. Preconditions are the caller's job.
    pub fn fill(&mut self, lo: u64, hi: u64, base: &[u64], out: &mut Vec<u64>) {
        debug_assert!(lo >= 1 && hi > lo);
        let len = (hi - lo) as usize;
        out.clear();
        out.extend(lo..hi);
        self.max_small.clear();
        self.max_small.resize(len, 1);
        let residual = out.as_mut_slice();
        let max_small = self.max_small.as_mut_slice();

        let root = (hi - 1).isqrt();
        for &p in base.iter().take_while(|&&p| p <= root) {
            let first = lo.div_ceil(p) * p;
            if first >= hi {
                continue;
            }
            let start = (first - lo) as usize;
            let step = p as usize;
            if p == 2 {
                for i in (start..len).step_by(2) {
                    residual[i] >>= residual[i].trailing_zeros();
                    max_small[i] = 2;
                }
            } else {
                let inv = mod_inverse_pow2(p);
                let bound = u64::MAX / p;
                for i in (start..len).step_by(step) {
                    let mut r = residual[i].wrapping_mul(inv);
                    loop {
                        let next = r.wrapping_mul(inv);
                        if next > bound {
                            break;
                        }
                        r = next;
                    }
                    residual[i] = r;
                    max_small[i] = p as u32;
                }
            }
        }
        for (r, &m) in residual.iter_mut().zip(max_small.iter()) {
            if *r == 1 {
                *r = m as u64;
            }
        }
    }
}

/// Inverse of odd `p` modulo 2⁶⁴ by Newton iteration.
fn mod_inverse_pow2(p: u64) -> u64 {
    debug_assert!(p % 2 == 1);
    // p * p ≡ 1 (mod 8), so p is correct to 3 bits; each step doubles that.
    let mut inv = p;
    for _ in 0..5 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
    }
    inv
}

/// Splits `[lo, hi)` into consecutive chunks of at most `len` integers.
pub fn segments(lo: u64, hi: u64, len: u64) -> impl Iterator<Item = (u64, u64)> {
    assert!(len > 0);
    let mut start = lo;
    std::iter::from_fn(move || {
        if start >= hi {
            return None;
        }
        let end = hi.min(start.saturating_add(len));
        let seg = (start, end);
        start = end;
        Some(seg)
    })
}
