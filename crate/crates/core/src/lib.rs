//! Largest prime factors of shifted primes.
//!
//! Empirical side: segmented sieves for P⁺(n) and the counts
//! T_c(x) = #{p ≤ x : P⁺(p−1) ≥ p^c} and T'_c(x) = #{p ≤ x : P⁺(p−1) ≥ x^c}.
//! Analytic side: Dickman's ρ, the twin-prime-type constant 𝔖, the weighted
//! sum S(z), the sieve upper bound for T'_c and its limit 8(1/c − 1).

pub mod bounds;
pub mod cache;
pub mod dickman;
pub mod error;
pub mod exponent;
pub mod quad;
pub mod shifted;
pub mod sieve;

pub use bounds::{
    pair_bound, partial_summation_closed_form, partial_summation_quadrature, s_asymptotic_ratio,
    s_of_z, s_of_z_exact, sieve_rhs, singular_series, theorem_bound, theorem_bound_exact,
    BoundReport, SingularSeriesValue,
};
pub use dickman::RhoSolver;
pub use error::{Error, Result};
pub use exponent::Exponent;
pub use shifted::{
    holds_threshold, prime_pair_count, scan_tc, scan_tc_with, tprime_via_pairs, DensityRow,
    DensityScan, PairCounter, ScanConfig,
};
pub use sieve::{lpf_segment, pi, primes_up_to, LpfSegment, PrimeTable};
