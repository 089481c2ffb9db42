//! Dickman's function ρ and the conditional density 1 − ρ(1/c).
//!
//! ρ(u) = 1 on [0, 1] and uρ'(u) = −ρ(u − 1) for u > 1. Integrating the
//! second relation over a grid cell gives
//!
//! ```text
//! ρ(v) = ρ(u) − ∫_u^v ρ(t − 1)/t dt,    1 ≤ u ≤ v,
//! ```
//!
//! which the solver marches forward one cell at a time with Simpson's rule.
//! The integrand only needs ρ one unit back, which is already tabulated; the
//! Simpson midpoint is read off a cubic through the nearest nodes of the same
//! unit interval. ρ loses one order of smoothness at each integer, so no
//! interpolation stencil ever straddles one.
//!
//! Errors are absolute. Forward marching keeps uρ(u) − ∫_{u−1}^u ρ only
//! approximately at zero, and any residue K decays like K/u rather than
//! like ρ, so values below roughly 1e−14 (u ≳ 12) are noise. 1 − ρ(1/c) is
//! unaffected at double precision.

use crate::error::{Error, Result};

pub const DEFAULT_U_MAX: f64 = 20.0;
pub const DEFAULT_STEP: f64 = 1.0 / 1024.0;
pub const DEFAULT_TOL: f64 = 1e-10;

/// Tabulated ρ on `[0, u_max]`, immutable once built.
#[derive(Debug, Clone)]
pub struct RhoSolver {
    u_max: f64,
    step: f64,
    tol: f64,
    per_unit: usize,
    values: Vec<f64>,
}

impl Default for RhoSolver {
    fn default() -> Self {
        RhoSolver::new(DEFAULT_U_MAX, DEFAULT_STEP, DEFAULT_TOL)
            .expect("default Dickman grid is valid")
    }
}

impl RhoSolver {
    /// Builds the grid and checks it against a grid of half the spacing:
    /// every shared node must agree within `tol`.
    ///
    /// `1/step` must be an integer ≥ 4 so that integers are grid nodes.
    pub fn new(u_max: f64, step: f64, tol: f64) -> Result<Self> {
        if !(u_max.is_finite() && u_max >= 1.0) {
            return Err(Error::domain(format!(
                "u_max must be finite and >= 1, got {u_max}"
            )));
        }
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::domain(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        let per_unit = (1.0 / step).round();
        if step.is_nan() || step <= 0.0 || per_unit < 4.0 || (per_unit * step - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "step must be 1/n for an integer n >= 4, got {step}"
            )));
        }
        let per_unit = per_unit as usize;
        let units = u_max.ceil() as usize;
        let values = march(units, per_unit);
        let fine = march(units, 2 * per_unit);
        let worst = values
            .iter()
            .enumerate()
            .map(|(i, v)| (v - fine[2 * i]).abs())
            .fold(0.0, f64::max);
        if worst >= tol {
            return Err(Error::Quadrature(format!(
                "halving the step moved rho by {worst:e}, above tol {tol:e}"
            )));
        }
        Ok(RhoSolver {
            u_max,
            step: 1.0 / per_unit as f64,
            tol,
            per_unit,
            values,
        })
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// ρ at grid nodes `0, step, 2·step, …`.
    pub fn nodes(&self) -> &[f64] {
        &self.values
    }

    pub fn rho(&self, u: f64) -> Result<f64> {
        if u.is_nan() || u < 0.0 {
            return Err(Error::domain(format!("rho is defined for u >= 0, got {u}")));
        }
        if u > self.u_max {
            return Err(Error::Range(format!(
                "u = {u} is beyond the tabulated range [0, {}]",
                self.u_max
            )));
        }
        if u <= 1.0 {
            return Ok(1.0);
        }
        Ok(interpolate(
            &self.values,
            self.per_unit,
            u * self.per_unit as f64,
        ))
    }

    /// 1 − ρ(1/c), the limiting share of primes with P⁺(p−1) ≥ p^c when
    /// primes are well distributed in progressions up to level x^(1−ε).
    pub fn eh_density(&self, c: f64) -> Result<f64> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::domain(format!("c must lie in (0, 1], got {c}")));
        }
        Ok(1.0 - self.rho(1.0 / c)?)
    }

    /// The c with `eh_density(c) = target`, by bisection on `[1/u_max, 1]`.
    pub fn solve_eh_threshold(&self, target: f64) -> Result<f64> {
        let lo_c = 1.0 / self.u_max;
        let ceiling = self.eh_density(lo_c)?;
        if !(target > 0.0 && target < ceiling) {
            return Err(Error::NoRoot(format!(
                "target {target} outside the attainable range (0, {ceiling})"
            )));
        }
        // eh_density decreases in c: above target at lo, below at hi
        let (mut lo, mut hi) = (lo_c, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eh_density(mid)? > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let c = 0.5 * (lo + hi);
        let miss = (self.eh_density(c)? - target).abs();
        if miss > self.tol {
            return Err(Error::NoRoot(format!(
                "bisection ended {miss:e} away from target {target}"
            )));
        }
        Ok(c)
    }

    /// `(u, ρ(u))` for u = 0, spacing, 2·spacing, … ≤ u_max.
    pub fn table(&self, spacing: f64) -> Result<Vec<(f64, f64)>> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::domain(format!(
                "table spacing must be positive, got {spacing}"
            )));
        }
        let n = (self.u_max / spacing + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| {
                let u = (i as f64 * spacing).min(self.u_max);
                Ok((u, self.rho(u)?))
            })
            .collect()
    }
}

fn march(units: usize, per_unit: usize) -> Vec<f64> {
    let n = units * per_unit;
    let h = 1.0 / per_unit as f64;
    let mut values = vec![1.0; n + 1];
    for i in per_unit + 1..=n {
        let t0 = (i - 1) as f64 * h;
        let t1 = i as f64 * h;
        let back0 = values[i - 1 - per_unit];
        let back1 = values[i - per_unit];
        let back_mid = interpolate(&values[..i], per_unit, (i - per_unit) as f64 - 0.5);
        let f0 = back0 / t0;
        let fm = back_mid / (0.5 * (t0 + t1));
        let f1 = back1 / t1;
        values[i] = values[i - 1] - h / 6.0 * (f0 + 4.0 * fm + f1);
    }
    values
}

/// Cubic Lagrange interpolation at fractional node index `pos`, using four
/// nodes from the unit interval that contains `pos`.
fn interpolate(values: &[f64], per_unit: usize, pos: f64) -> f64 {
    let below = pos.floor() as usize;
    if pos == below as f64 {
        return values[below];
    }
    let unit_start = below / per_unit * per_unit;
    let first = below
        .saturating_sub(1)
        .clamp(unit_start, unit_start + per_unit - 3);
    let s = pos - first as f64;
    let y = &values[first..first + 4];
    // nodes at s = 0, 1, 2, 3
    let l0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    let l1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    let l2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    let l3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    l0 * y[0] + l1 * y[1] + l2 * y[2] + l3 * y[3]
}
