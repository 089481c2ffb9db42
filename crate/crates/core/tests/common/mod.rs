//! Brute-force references shared by the integration tests. Nothing here
//! touches the sieves under test.

#![allow(dead_code)]

pub fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Largest prime factor by trial division, with P+(1) = 1.
pub fn trial_lpf(mut n: u64) -> u64 {
    assert!(n >= 1);
    let mut best = 1;
    let mut d = 2;
    while d * d <= n {
        while n.is_multiple_of(d) {
            best = d;
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        n
    } else {
        best
    }
}

/// Distinct prime factors by trial division.
pub fn trial_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Plain byte-per-integer sieve of Eratosthenes.
pub fn naive_sieve(n: usize) -> Vec<bool> {
    let mut is = vec![true; n + 1];
    is[0] = false;
    if n >= 1 {
        is[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if is[i] {
            for j in (i * i..=n).step_by(i) {
                is[j] = false;
            }
        }
        i += 1;
    }
    is
}

/// T_c and T'_c by enumeration over a naive sieve and trial-division P+.
pub fn brute_tc(x: u64, num: u32, den: u32) -> (u64, u64) {
    let is = naive_sieve(x as usize);
    let mut t = 0;
    let mut tp = 0;
    for p in 2..=x {
        if !is[p as usize] {
            continue;
        }
        let q = trial_lpf(p - 1);
        if pow_ge(q, den, p, num) {
            t += 1;
        }
        if pow_ge(q, den, x, num) {
            tp += 1;
        }
    }
    (t, tp)
}

/// a^ea >= b^eb in big integers.
pub fn pow_ge(a: u64, ea: u32, b: u64, eb: u32) -> bool {
    num_bigint::BigUint::from(a).pow(ea) >= num_bigint::BigUint::from(b).pow(eb)
}
