//! Closed-form quantities behind the upper bound T_c(x)/π(x) ≤ 8(1/c − 1).
//!
//! The chain is: a two-dimensional upper-bound sieve bounds the number of
//! prime pairs (q, qh + 1) with q < x/h by [`pair_bound`]; summing over even
//! h < x^(1−c) gives [`sieve_rhs`]; the weighted harmonic sum [`s_of_z`]
//! grows like (log z)/(2𝔖); and partial summation turns that growth into the
//! coefficient (1/(2c) − 1/2)/𝔖 of 1/log x, which times 16𝔖 is 8(1/c − 1).

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};

use crate::dickman::RhoSolver;
use crate::error::{Error, Result};
use crate::exponent::{ceil_root_pow, Exponent};
use crate::quad::adaptive_simpson;
use crate::shifted::{check_even_h, DensityRow};
use crate::sieve::{OddSieve, DEFAULT_PRIME_LIMIT_CAP};

/// Largest h-range (in integers) the weight table may cover.
pub const WEIGHT_TABLE_CAP: u64 = 1 << 28;

/// Largest z accepted by [`s_of_z_exact`].
pub const EXACT_S_CAP: f64 = 20_000.0;

pub const PARTIAL_SUMMATION_TOL: f64 = 1e-12;

/// Truncated singular series ∏_{2 < p ≤ cutoff} (1 − 1/(p−1)²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularSeriesValue {
    pub value: f64,
    /// Primes up to this bound are included.
    pub cutoff: u64,
    pub largest_prime: u64,
    /// Bound on |𝔖 − value| / value from Σ_{n > cutoff} 1/(n−1)² < 1/(cutoff − 1).
    pub tail_bound: f64,
}

pub fn singular_series(cutoff: u64) -> Result<SingularSeriesValue> {
    if cutoff < 3 {
        return Err(Error::precondition(format!(
            "singular series needs cutoff >= 3, got {cutoff}"
        )));
    }
    if cutoff > DEFAULT_PRIME_LIMIT_CAP {
        return Err(Error::Budget {
            what: "singular series cutoff",
            requested: cutoff,
            cap: DEFAULT_PRIME_LIMIT_CAP,
            hint: "the tail bound at 10^8 is already 1e-8".into(),
        });
    }
    let sieve = OddSieve::new(cutoff);
    // Neumaier-compensated sum of ln(1 − 1/(p−1)²)
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut largest = 2;
    for p in sieve.primes().skip(1) {
        let d = (p - 1) as f64;
        let term = (-1.0 / (d * d)).ln_1p();
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        largest = p;
    }
    Ok(SingularSeriesValue {
        value: (sum + comp).exp(),
        cutoff,
        largest_prime: largest,
        tail_bound: 1.0 / (cutoff - 1) as f64,
    })
}

/// Odd prime factors of every m ≤ limit, via a smallest-prime-factor table.
///
/// Used for the weight w(h) = ∏_{p | h, p > 2} (p − 1)/(p − 2) = ∏ (1 + 1/(p − 2))
/// of even h = 2m, which depends only on the odd part of m.
#[derive(Debug, Clone)]
pub struct OddWeights {
    spf: Vec<u32>,
}

impl OddWeights {
    /// Table for even h ≤ `h_max`.
    pub fn new(h_max: u64) -> Result<Self> {
        let m_max = h_max / 2;
        if m_max > WEIGHT_TABLE_CAP {
            return Err(Error::Budget {
                what: "even-h range",
                requested: h_max,
                cap: 2 * WEIGHT_TABLE_CAP,
                hint: "reduce z or x^(1-c)".into(),
            });
        }
        let n = m_max as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] != 0 {
                continue;
            }
            spf[i] = i as u32;
            let mut j = i.saturating_mul(i);
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
        Ok(OddWeights { spf })
    }

    pub fn h_max(&self) -> u64 {
        2 * (self.spf.len() as u64 - 1)
    }

    /// Distinct odd primes dividing even `h`, ascending.
    pub fn odd_primes(&self, h: u64) -> impl Iterator<Item = u64> + '_ {
        debug_assert!(h.is_multiple_of(2) && h >= 2 && h <= self.h_max());
        let mut m = (h / 2) as usize;
        let mut last = 0usize;
        std::iter::from_fn(move || loop {
            if m <= 1 {
                return None;
            }
            let p = self.spf[m] as usize;
            m /= p;
            if p != 2 && p != last {
                last = p;
                return Some(p as u64);
            }
        })
    }

    pub fn weight(&self, h: u64) -> f64 {
        self.odd_primes(h)
            .map(|p| (p - 1) as f64 / (p - 2) as f64)
            .product()
    }

    pub fn weight_exact(&self, h: u64) -> Ratio<u64> {
        let (num, den) = self
            .odd_primes(h)
            .fold((1u64, 1u64), |(n, d), p| (n * (p - 1), d * (p - 2)));
        Ratio::new(num, den)
    }
}

/// Number of even h with h < z.
fn even_count_below(z: f64) -> u64 {
    // h = 2m < z  ⇔  m < z/2
    let half = z / 2.0;
    let m = half.ceil() as u64;
    m.saturating_sub(1)
}

fn check_z(z: f64) -> Result<()> {
    if z.is_nan() || z < 1.0 {
        return Err(Error::domain(format!("S(z) needs z >= 1, got {z}")));
    }
    if !z.is_finite() || even_count_below(z) > WEIGHT_TABLE_CAP {
        return Err(Error::Budget {
            what: "S(z) range",
            requested: if z.is_finite() { z as u64 } else { u64::MAX },
            cap: 2 * WEIGHT_TABLE_CAP,
            hint: "use the asymptotic (log z)/(2S) beyond this".into(),
        });
    }
    Ok(())
}

/// S(z) = Σ_{h < z, 2 | h} w(h)/h, with S(z) = 0 for 1 ≤ z < 2.
pub fn s_of_z(z: f64) -> Result<f64> {
    check_z(z)?;
    let m_max = even_count_below(z);
    if m_max == 0 {
        return Ok(0.0);
    }
    let weights = OddWeights::new(2 * m_max)?;
    Ok((1..=m_max)
        .map(|m| weights.weight(2 * m) / (2 * m) as f64)
        .sum())
}

/// S(z) as an exact rational, for z ≤ [`EXACT_S_CAP`].
pub fn s_of_z_exact(z: f64) -> Result<BigRational> {
    check_z(z)?;
    if z > EXACT_S_CAP {
        return Err(Error::Budget {
            what: "exact S(z) range",
            requested: z as u64,
            cap: EXACT_S_CAP as u64,
            hint: "use s_of_z for larger z".into(),
        });
    }
    let m_max = even_count_below(z);
    let mut total = BigRational::from_integer(BigInt::from(0));
    if m_max == 0 {
        return Ok(total);
    }
    let weights = OddWeights::new(2 * m_max)?;
    for m in 1..=m_max {
        let w = weights.weight_exact(2 * m);
        total += BigRational::new(
            BigInt::from(*w.numer()),
            BigInt::from(*w.denom()) * BigInt::from(2 * m),
        );
    }
    Ok(total)
}

/// S(z)·2𝔖/ln z, which tends to 1.
pub fn s_asymptotic_ratio(z: f64, ss: &SingularSeriesValue) -> Result<f64> {
    if z.is_nan() || z < 10.0 {
        return Err(Error::domain(format!(
            "asymptotic ratio needs z >= 10, got {z}"
        )));
    }
    Ok(s_of_z(z)? * 2.0 * ss.value / z.ln())
}

/// w(h) for a single even h, by trial division.
pub fn odd_weight(h: u64) -> Result<f64> {
    check_even_h(h)?;
    let mut m = h;
    while m.is_multiple_of(2) {
        m /= 2;
    }
    let mut w = 1.0;
    let mut p = 3;
    while p * p <= m {
        if m.is_multiple_of(p) {
            w *= (p - 1) as f64 / (p - 2) as f64;
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 2;
    }
    if m > 1 {
        w *= (m - 1) as f64 / (m - 2) as f64;
    }
    Ok(w)
}

/// Main term 16𝔖·w(h)·y/ln²y of the sieve upper bound for #{q < y : q, qh+1 prime}.
pub fn pair_bound(h: u64, y: f64, ss: &SingularSeriesValue) -> Result<f64> {
    let w = odd_weight(h)?;
    if y.is_nan() || y < 16.0 {
        return Err(Error::domain(format!("pair bound needs y >= 16, got {y}")));
    }
    let l = y.ln();
    Ok(16.0 * ss.value * w * y / (l * l))
}

/// Smallest integer H with H ≥ x^(1−c); the sieve sum runs over even h < H.
pub fn h_range_end(x: u64, c: Exponent) -> u64 {
    let rest = c.complement();
    ceil_root_pow(x, rest.num(), rest.den())
}

/// 16𝔖 Σ_{h < x^(1−c), 2 | h} w(h)·(x/h)/ln²(x/h), without the (1 + o(1)) factor.
pub fn sieve_rhs(x: u64, c: Exponent, ss: &SingularSeriesValue) -> Result<f64> {
    if 2 * c.num() < c.den() {
        return Err(Error::precondition(format!(
            "sieve sum needs c >= 1/2, got {c}"
        )));
    }
    let end = h_range_end(x, c);
    if end <= 2 {
        return Ok(0.0);
    }
    let h_last = (end - 1) & !1;
    if h_last / 2 > WEIGHT_TABLE_CAP {
        return Err(Error::Budget {
            what: "sieve-sum h range",
            requested: end,
            cap: 2 * WEIGHT_TABLE_CAP,
            hint: "raise c or lower x".into(),
        });
    }
    let weights = OddWeights::new(h_last)?;
    let xf = x as f64;
    let sum: f64 = (1..=h_last / 2)
        .map(|m| {
            let h = 2 * m;
            let y = xf / h as f64;
            let l = y.ln();
            weights.weight(h) * y / (l * l)
        })
        .sum();
    Ok(16.0 * ss.value * sum)
}

/// [`sieve_rhs`] divided by x/ln x.
pub fn sieve_rhs_normalized(x: u64, c: Exponent, ss: &SingularSeriesValue) -> Result<f64> {
    let xf = x as f64;
    Ok(sieve_rhs(x, c, ss)? / (xf / xf.ln()))
}

fn check_unit_c(c: f64, closed_right: bool) -> Result<()> {
    let ok = c > 0.0 && if closed_right { c <= 1.0 } else { c < 1.0 };
    if !ok {
        return Err(Error::domain(format!("c out of range: {c}")));
    }
    Ok(())
}

/// (1/(2c) − 1/2)/𝔖, the coefficient of 1/log x after partial summation.
pub fn partial_summation_closed_form(c: f64, ss: &SingularSeriesValue) -> Result<f64> {
    check_unit_c(c, true)?;
    Ok((0.5 / c - 0.5) / ss.value)
}

/// (1/𝔖)∫_{x^c}^{x} (ln x − ln u)/u · (ln u)^(−3) du, integrated in v = ln u.
pub fn partial_summation_integral(c: f64, x: f64, ss: &SingularSeriesValue) -> Result<f64> {
    check_unit_c(c, false)?;
    if x.is_nan() || x < 100.0 {
        return Err(Error::domain(format!(
            "partial summation needs x >= 100, got {x}"
        )));
    }
    let l = x.ln();
    let integral = adaptive_simpson(
        |v| (l - v) / (v * v * v),
        c * l,
        l,
        PARTIAL_SUMMATION_TOL,
        crate::quad::DEFAULT_MAX_DEPTH,
    )?;
    Ok(integral / ss.value)
}

/// Boundary term ((1 − c)/(2c²))/(𝔖 ln x) minus [`partial_summation_integral`].
///
/// Multiplied by ln x this should reproduce [`partial_summation_closed_form`].
pub fn partial_summation_quadrature(c: f64, x: f64, ss: &SingularSeriesValue) -> Result<f64> {
    let integral = partial_summation_integral(c, x, ss)?;
    let boundary = (1.0 - c) / (2.0 * c * c) / (ss.value * x.ln());
    Ok(boundary - integral)
}

/// 8(1/c − 1) exactly.
pub fn theorem_bound_exact(c: Exponent) -> Ratio<u64> {
    Ratio::new(8 * (c.den() - c.num()), c.num())
}

pub fn theorem_bound(c: Exponent) -> f64 {
    let r = theorem_bound_exact(c);
    *r.numer() as f64 / *r.denom() as f64
}

/// The bound says something only when it is below 1, i.e. c > 8/9.
pub fn theorem_bound_informative(c: Exponent) -> bool {
    theorem_bound_exact(c) < Ratio::from_integer(1)
}

/// Every analytic quantity at one (x, c), next to the measured ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub x: u64,
    pub c: Exponent,
    pub empirical_ratio: f64,
    pub eh_prediction: f64,
    pub theorem_bound: f64,
    /// Sieve sum over x/ln x; `None` when not requested.
    pub sieve_rhs_normalized: Option<f64>,
    /// 16𝔖 times the partial-summation coefficient.
    pub closed_form_limit: f64,
}

impl BoundReport {
    pub fn assemble(
        x: u64,
        row: &DensityRow,
        solver: &RhoSolver,
        ss: &SingularSeriesValue,
        with_sieve_rhs: bool,
    ) -> Result<Self> {
        let c = row.c;
        let sieve = if with_sieve_rhs && 2 * c.num() >= c.den() {
            Some(sieve_rhs_normalized(x, c, ss)?)
        } else {
            None
        };
        Ok(BoundReport {
            x,
            c,
            empirical_ratio: row.ratio_t,
            eh_prediction: solver.eh_density(c.to_f64())?,
            theorem_bound: theorem_bound(c),
            sieve_rhs_normalized: sieve,
            closed_form_limit: 16.0 * ss.value * partial_summation_closed_form(c.to_f64(), ss)?,
        })
    }

    /// Whether the measured ratio respects the theorem's bound.
    pub fn within_bound(&self) -> bool {
        self.empirical_ratio <= self.theorem_bound
    }
}
