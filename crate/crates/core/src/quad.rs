//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

pub const DEFAULT_MAX_DEPTH: u32 = 50;

/// ∫_a^b f with absolute error target `tol`.
///
/// Each panel is split until the two half-panel Simpson estimates agree
/// with the whole-panel estimate to within 15·tol (the Richardson bound),
/// and the accepted value carries the Richardson correction.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64, max_depth: u32) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!(
            "integration limits must be finite: [{a}, {b}]"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let value = refine(&f, a, b, fa, fm, fb, whole, tol, max_depth)?;
    if !value.is_finite() {
        return Err(Error::Quadrature(format!(
            "non-finite integral on [{a}, {b}]"
        )));
    }
    Ok(value)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Quadrature(format!(
            "panel [{a}, {b}] still off by {:e} at maximum depth",
            delta.abs() / 15.0
        )));
    }
    Ok(refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_and_logs() {
        let v = adaptive_simpson(|x| x * x * x, 0.0, 2.0, 1e-12, 30).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
        let v = adaptive_simpson(|x| 1.0 / x, 1.0, 1e6, 1e-10, 50).unwrap();
        assert!((v - 1e6f64.ln()).abs() < 1e-8);
        assert_eq!(adaptive_simpson(|x| x, 3.0, 3.0, 1e-12, 10).unwrap(), 0.0);
    }

    #[test]
    fn reports_non_convergence() {
        let r = adaptive_simpson(|x| (1.0 / x).sin(), 1e-9, 1.0, 1e-14, 5);
        assert!(matches!(r, Err(Error::Quadrature(_))));
        assert!(adaptive_simpson(|x| x, 0.0, f64::INFINITY, 1e-6, 5).is_err());
    }
}
