use crate::error::{Error, Result};

/// Default bracket width at which bisection stops.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Bisection root of a monotone function with a sign change on `[lo, hi]`.
///
/// Stops once `|g(x)| <= tol` or the bracket is no wider than `tol`
/// (relative to the bracket magnitude once that exceeds one).
pub fn find_root_monotone<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if !(g_lo.signum() != g_hi.signum()) || g_lo.is_nan() || g_hi.is_nan() {
        return Err(Error::NoSignChange { lo, hi, g_lo, g_hi });
    }
    let increasing = g_hi > g_lo;

    loop {
        let mid = 0.5 * (lo + hi);
        let width = hi - lo;
        let g_mid = g(mid);
        if g_mid.abs() <= tol || width <= tol * hi.abs().max(1.0) || mid == lo || mid == hi {
            return Ok(mid);
        }
        if (g_mid > 0.0) == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}
