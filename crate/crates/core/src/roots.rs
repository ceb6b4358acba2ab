//! Bracketing bisection used as the reference for every closed-form
//! critical time.

use crate::error::{Error, Result};

/// Relative tolerance on the crossing time.
pub const CROSSING_RTOL: f64 = 1e-10;

/// Finds `t` in `[lo, hi]` with `r(t) = threshold` by bisection.
///
/// `r(lo) - threshold` and `r(hi) - threshold` must differ in sign. The
/// bracket is halved until its width is below `CROSSING_RTOL * t`.
pub fn brute_force_crossing<F>(r: F, threshold: f64, lo: f64, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let eval = |t: f64| {
        let v = r(t) - threshold;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { t })
        }
    };
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = eval(lo)?;
    let f_hi = eval(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= CROSSING_RTOL * mid.abs() || mid == lo || mid == hi {
            return Ok(mid);
        }
        let f_mid = eval(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
