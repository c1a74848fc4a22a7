//! Bisection on the safety stock factor.

use crate::error::{Error, Result};

pub const LAMBDA_MIN: f64 = -10.0;
pub const LAMBDA_MAX: f64 = 10.0;
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
pub const MAX_ITERATIONS: usize = 200;

/// Finds λ in `[LAMBDA_MIN, LAMBDA_MAX]` with `fill_rate(λ) = target`.
///
/// `fill_rate` must be non-decreasing in λ. Stops once the residual drops
/// below `RESIDUAL_TOLERANCE` or after `MAX_ITERATIONS` halvings.
pub fn bisect_lambda<F>(target: f64, fill_rate: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut lo = LAMBDA_MIN;
    let mut hi = LAMBDA_MAX;
    let at_lo = fill_rate(lo);
    let at_hi = fill_rate(hi);
    if !(at_lo <= target && target <= at_hi) {
        return Err(Error::Unattainable {
            target,
            min: at_lo,
            max: at_hi,
        });
    }
    if (at_lo - target).abs() < RESIDUAL_TOLERANCE {
        return Ok(lo);
    }
    if (at_hi - target).abs() < RESIDUAL_TOLERANCE {
        return Ok(hi);
    }

    let mut mid = 0.5 * (lo + hi);
    for _ in 0..MAX_ITERATIONS {
        mid = 0.5 * (lo + hi);
        let residual = fill_rate(mid) - target;
        if residual.abs() < RESIDUAL_TOLERANCE {
            break;
        }
        if residual < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}
