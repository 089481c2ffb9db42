//! Number parsing and rendering shared by the subcommands.

use spl_core::exponent::parse_decimal;
use spl_core::Exponent;

/// Renders a real with 12 significant digits, trailing zeros trimmed.
pub fn sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = 11 - magnitude;
    if !(0..=20).contains(&decimals) {
        return format!("{v:.11e}");
    }
    let s = format!("{:.*}", decimals as usize, v);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Parses counts written as `1000000`, `1_000_000`, `10^6` or `1e6`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let t = s.trim().replace('_', "");
    let bad = || format!("not a non-negative integer: {s:?}");
    if let Some((base, exp)) = t.split_once('^') {
        let base: u64 = base.parse().map_err(|_| bad())?;
        let exp: u32 = exp.parse().map_err(|_| bad())?;
        return base
            .checked_pow(exp)
            .ok_or_else(|| format!("{s} overflows 64 bits"));
    }
    if let Some((mant, exp)) = t.split_once(['e', 'E']) {
        let (num, den) = parse_decimal(mant).map_err(|_| bad())?;
        let exp: u32 = exp.parse().map_err(|_| bad())?;
        let scale = 10u64
            .checked_pow(exp)
            .ok_or_else(|| format!("{s} overflows 64 bits"))?;
        let full = num
            .checked_mul(scale)
            .ok_or_else(|| format!("{s} overflows 64 bits"))?;
        if full % den != 0 {
            return Err(format!("{s} is not an integer"));
        }
        return Ok(full / den);
    }
    t.parse().map_err(|_| bad())
}

/// Parses `start:stop:step` in decimals into exact exponents.
///
/// All three are put over the common denominator 10^k, k the most decimals
/// used, so the grid points are exact.
pub fn parse_grid(grid: &str) -> Result<Vec<Exponent>, String> {
    let parts: Vec<&str> = grid.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid must be start:stop:step, got {grid:?}"));
    }
    let parsed = parts
        .iter()
        .map(|p| parse_decimal(p.trim()).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let scale = parsed.iter().map(|&(_, d)| d).max().unwrap();
    let scaled: Vec<u64> = parsed.iter().map(|&(n, d)| n * (scale / d)).collect();
    let (start, stop, step) = (scaled[0], scaled[1], scaled[2]);
    if step == 0 {
        return Err("grid step must be positive".into());
    }
    if start > stop {
        return Err(format!("grid start {} exceeds stop {}", parts[0], parts[1]));
    }
    let mut out = Vec::new();
    let mut v = start;
    while v <= stop {
        out.push(Exponent::new(v, scale).map_err(|e| e.to_string())?);
        v += step;
    }
    Ok(out)
}
