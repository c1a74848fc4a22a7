//! Continuous-review model: an order is placed the instant the inventory
//! position reaches the reorder point.

use super::solver::bisect_lambda;
use super::{
    check_beta_target, check_quantity, policy_from_lambda, LeadTimeDemandMoments,
    ModelPrediction, UnfulfilledDemandMode,
};
use crate::error::{Error, Result};
use crate::normal::{std_normal_pdf, CdfKind};

/// Expected shortage per cycle, `σ(φ(λ) − λ[1 − Φ(λ)])`.
pub fn expected_shortage(sigma: f64, lambda: f64, cdf: CdfKind) -> f64 {
    if sigma == 0.0 {
        return 0.0;
    }
    sigma * (std_normal_pdf(lambda) - lambda * cdf.upper_tail(lambda))
}

/// Fill rate given the per-cycle expected shortage.
///
/// Backorders use `1 − E/Q`. Lost sales replace `1 − β` with `(1 − β)/β`,
/// which solves to `Q/(Q + E)`.
pub fn beta(q: f64, shortage: f64, mode: UnfulfilledDemandMode) -> Result<f64> {
    check_quantity(q)?;
    Ok(match mode {
        UnfulfilledDemandMode::Backorder => 1.0 - shortage / q,
        UnfulfilledDemandMode::LostSales => q / (q + shortage),
    })
}

pub fn lambda_from_rop(rop: f64, moments: &LeadTimeDemandMoments) -> Result<f64> {
    if moments.sigma <= 0.0 {
        return Err(Error::Degenerate("lead-time demand has zero variance"));
    }
    Ok((rop - moments.mu) / moments.sigma)
}

/// Forward prediction at `rop`.
///
/// λ is taken as `(ROP − μ)/σ`; the cycle stock reported is `ROP − SS`,
/// which is μ. With no variability at all the fill rate is 1 when the
/// reorder point covers mean lead-time demand and the system is
/// rejected as degenerate otherwise.
pub fn predict(
    moments: &LeadTimeDemandMoments,
    rop: f64,
    q: f64,
    mode: UnfulfilledDemandMode,
    cdf: CdfKind,
) -> Result<ModelPrediction> {
    check_quantity(q)?;
    if moments.sigma == 0.0 {
        if rop >= moments.mu {
            return Ok(ModelPrediction {
                lambda: f64::INFINITY,
                expected_shortage: 0.0,
                expected_undershoot: None,
                beta: 1.0,
                cycle_stock: moments.mu,
                safety_stock: rop - moments.mu,
                rop,
            });
        }
        return Err(Error::Degenerate(
            "deterministic demand with reorder point below mean lead-time demand",
        ));
    }
    let lambda = lambda_from_rop(rop, moments)?;
    let shortage = expected_shortage(moments.sigma, lambda, cdf);
    Ok(ModelPrediction {
        lambda,
        expected_shortage: shortage,
        expected_undershoot: None,
        beta: beta(q, shortage, mode)?,
        cycle_stock: moments.mu,
        safety_stock: lambda * moments.sigma,
        rop,
    })
}

/// Safety stock factor that delivers `beta_target`.
pub fn solve_lambda(
    beta_target: f64,
    q: f64,
    moments: &LeadTimeDemandMoments,
    mode: UnfulfilledDemandMode,
    cdf: CdfKind,
) -> Result<f64> {
    check_beta_target(beta_target)?;
    check_quantity(q)?;
    if moments.sigma <= 0.0 {
        return Err(Error::Degenerate("lead-time demand has zero variance"));
    }
    let fill_rate = |lambda: f64| {
        let shortage = expected_shortage(moments.sigma, lambda, cdf);
        match mode {
            UnfulfilledDemandMode::Backorder => 1.0 - shortage / q,
            UnfulfilledDemandMode::LostSales => q / (q + shortage),
        }
    };
    bisect_lambda(beta_target, fill_rate)
}

/// Solve for λ and assemble `CS = max(Q, μ)`, `SS = λσ`, `ROP = CS + SS`.
pub fn solve(
    beta_target: f64,
    q: f64,
    moments: &LeadTimeDemandMoments,
    mode: UnfulfilledDemandMode,
    cdf: CdfKind,
) -> Result<ModelPrediction> {
    let lambda = solve_lambda(beta_target, q, moments, mode, cdf)?;
    let shortage = expected_shortage(moments.sigma, lambda, cdf);
    let policy = policy_from_lambda(lambda, moments, q)?;
    Ok(ModelPrediction {
        lambda,
        expected_shortage: shortage,
        expected_undershoot: None,
        beta: beta(q, shortage, mode)?,
        cycle_stock: policy.cycle_stock,
        safety_stock: policy.safety_stock,
        rop: policy.rop,
    })
}
