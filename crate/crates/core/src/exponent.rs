//! Rational exponents c = num/den in (0, 1) and exact power comparisons.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// Largest denominator accepted for an exponent after reduction.
pub const MAX_DENOMINATOR: u64 = 1000;

/// Exponent c = num/den with 0 < c < 1, stored in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Exponent {
    num: u64,
    den: u64,
}

impl Exponent {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || num >= den {
            return Err(Error::domain(format!(
                "exponent {num}/{den} is not strictly between 0 and 1"
            )));
        }
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        if den > MAX_DENOMINATOR {
            return Err(Error::domain(format!(
                "exponent {num}/{den} has denominator above {MAX_DENOMINATOR}"
            )));
        }
        Ok(Exponent { num, den })
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn as_ratio(self) -> Ratio<u64> {
        Ratio::new_raw(self.num, self.den)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// 1 − c as an exponent.
    pub fn complement(self) -> Exponent {
        Exponent {
            num: self.den - self.num,
            den: self.den,
        }
    }

    /// Parses `"0.89"` (denominator 10^k for k decimals) or `"16/17"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let num = parse_u64(n)?;
            let den = parse_u64(d)?;
            return Exponent::new(num, den);
        }
        let (num, den) = parse_decimal(s)?;
        Exponent::new(num, den)
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Exponent::parse(s)
    }
}

fn parse_u64(s: &str) -> Result<u64> {
    s.trim()
        .parse()
        .map_err(|_| Error::domain(format!("not a non-negative integer: {s:?}")))
}

/// Parses an unsigned decimal literal into `(digits, 10^k)` with k the
/// number of fractional digits, unreduced.
pub fn parse_decimal(s: &str) -> Result<(u64, u64)> {
    let bad = || Error::domain(format!("not a decimal number: {s:?}"));
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int
        .chars()
        .chain(frac.chars())
        .all(|ch| ch.is_ascii_digit())
    {
        return Err(bad());
    }
    if frac.len() > 18 {
        return Err(bad());
    }
    let den = 10u64.pow(frac.len() as u32);
    let int_val: u64 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let frac_val: u64 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    let num = int_val
        .checked_mul(den)
        .and_then(|v| v.checked_add(frac_val))
        .ok_or_else(bad)?;
    Ok((num, den))
}

/// Exact comparison of `a^ea` with `b^eb`.
///
/// A logarithmic comparison settles almost every call; the few that fall
/// inside its error margin are redone in integers.
pub fn cmp_pow(a: u64, ea: u64, b: u64, eb: u64) -> Ordering {
    if a <= 1 || b <= 1 || ea == 0 || eb == 0 {
        let lhs = if ea == 0 || a == 1 {
            1u8
        } else if a == 0 {
            0
        } else {
            2
        };
        let rhs = if eb == 0 || b == 1 {
            1u8
        } else if b == 0 {
            0
        } else {
            2
        };
        if lhs != 2 || rhs != 2 {
            return lhs.cmp(&rhs);
        }
    }
    let lhs = ea as f64 * (a as f64).ln();
    let rhs = eb as f64 * (b as f64).ln();
    let margin = 1e-12 * (lhs.abs() + rhs.abs());
    if lhs - rhs > margin {
        return Ordering::Greater;
    }
    if rhs - lhs > margin {
        return Ordering::Less;
    }
    cmp_pow_exact(a, ea, b, eb)
}

/// Integer-only form of [`cmp_pow`].
pub fn cmp_pow_exact(a: u64, ea: u64, b: u64, eb: u64) -> Ordering {
    if let (Some(l), Some(r)) = (checked_pow_u128(a, ea), checked_pow_u128(b, eb)) {
        return l.cmp(&r);
    }
    let l = BigUint::from(a).pow(ea as u32);
    let r = BigUint::from(b).pow(eb as u32);
    l.cmp(&r)
}

fn checked_pow_u128(base: u64, exp: u64) -> Option<u128> {
    let exp = u32::try_from(exp).ok()?;
    (base as u128).checked_pow(exp)
}

/// Smallest integer q with q^den ≥ x^num, for num, den ≥ 1.
pub fn ceil_root_pow(x: u64, num: u64, den: u64) -> u64 {
    assert!(num >= 1 && den >= 1);
    if x <= 1 {
        return x;
    }
    let guess = ((num as f64 / den as f64) * (x as f64).ln()).exp();
    let mut q = if guess >= u64::MAX as f64 {
        u64::MAX
    } else {
        guess.ceil().max(1.0) as u64
    };
    while q > 1 && cmp_pow(q - 1, den, x, num) != Ordering::Less {
        q -= 1;
    }
    while cmp_pow(q, den, x, num) == Ordering::Less {
        q += 1;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_forms() {
        assert_eq!(
            Exponent::parse("0.5").unwrap(),
            Exponent::new(1, 2).unwrap()
        );
        let c = Exponent::parse("0.89").unwrap();
        assert_eq!((c.num(), c.den()), (89, 100));
        let c = Exponent::parse("16/17").unwrap();
        assert_eq!((c.num(), c.den()), (16, 17));
        let c = Exponent::parse("0.950").unwrap();
        assert_eq!((c.num(), c.den()), (19, 20));
        assert!(Exponent::parse("1.0").is_err());
        assert!(Exponent::parse("0").is_err());
        assert!(Exponent::parse("0.0001").is_err());
        assert!(Exponent::parse("-0.5").is_err());
        assert!(Exponent::parse("abc").is_err());
        assert!(Exponent::parse(".").is_err());
    }

    #[test]
    fn ordering_is_by_value() {
        let a = Exponent::new(2, 3).unwrap();
        let b = Exponent::new(3, 4).unwrap();
        assert!(a < b);
        assert_eq!(a.complement(), Exponent::new(1, 3).unwrap());
    }

    #[test]
    fn cmp_pow_edges() {
        assert_eq!(cmp_pow(1, 5, 1, 7), Ordering::Equal);
        assert_eq!(cmp_pow(0, 5, 1, 7), Ordering::Less);
        assert_eq!(cmp_pow(2, 0, 1, 7), Ordering::Equal);
        assert_eq!(cmp_pow(4, 3, 8, 2), Ordering::Equal);
        assert_eq!(cmp_pow(10, 2, 100, 1), Ordering::Equal);
        assert_eq!(cmp_pow(11, 3, 23, 2), Ordering::Greater);
    }

    #[test]
    fn ceil_root_examples() {
        assert_eq!(ceil_root_pow(100, 1, 2), 10);
        assert_eq!(ceil_root_pow(101, 1, 2), 11);
        assert_eq!(ceil_root_pow(1_000_000, 1, 4), 32);
        assert_eq!(ceil_root_pow(1 << 40, 1, 2), 1 << 20);
        assert_eq!(ceil_root_pow(1 << 40, 3, 4), 1 << 30);
        assert_eq!(ceil_root_pow((1 << 40) + 1, 3, 4), (1 << 30) + 1);
    }

    proptest! {
        #[test]
        fn cmp_pow_matches_bigint(a in 0u64..1_000_000, ea in 0u64..60, b in 0u64..1_000_000, eb in 0u64..60) {
            prop_assert_eq!(cmp_pow(a, ea, b, eb), cmp_pow_exact(a, ea, b, eb));
        }

        #[test]
        fn ceil_root_is_minimal(x in 2u64..10_000_000_000, num in 1u64..20, den in 1u64..20) {
            prop_assume!(num < den);
            let q = ceil_root_pow(x, num, den);
            prop_assert!(cmp_pow_exact(q, den, x, num) != Ordering::Less);
            prop_assert!(cmp_pow_exact(q - 1, den, x, num) == Ordering::Less);
        }
    }
}
