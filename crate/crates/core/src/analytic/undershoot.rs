//! Periodic-review model: the inventory position is checked every
//! `review_period` days, so it typically sits below the reorder point by
//! some undershoot when the order is finally placed.

use super::solver::bisect_lambda;
use super::{check_beta_target, check_quantity, ModelPrediction, ReviewMoments, UnfulfilledDemandMode};
use crate::error::{Error, Result};
use crate::normal::{std_normal_pdf, CdfKind};

/// `E_U = (μ_R² + σ_R²) / 2μ_R`.
pub fn expected_undershoot(rm: &ReviewMoments) -> Result<f64> {
    if !(rm.mu_r > 0.0) {
        return Err(Error::Degenerate("zero demand per review period"));
    }
    Ok((rm.mu_r * rm.mu_r + rm.sigma_r * rm.sigma_r) / (2.0 * rm.mu_r))
}

/// Second-order standard normal loss, `(1 + λ²)[1 − Φ(λ)] − λφ(λ)`.
///
/// Under the logistic Φ this goes slightly negative above λ ≈ 2.9; callers
/// that need a shortage clamp at zero.
pub fn second_order_loss(lambda: f64, cdf: CdfKind) -> f64 {
    (1.0 + lambda * lambda) * cdf.upper_tail(lambda) - lambda * std_normal_pdf(lambda)
}

/// Expected shortage per cycle, `(σ_R² + σ_LT²)/2μ_R` times the
/// second-order loss at λ, floored at zero.
pub fn expected_shortage(rm: &ReviewMoments, lambda: f64, cdf: CdfKind) -> Result<f64> {
    if !(rm.mu_r > 0.0) {
        return Err(Error::Degenerate("zero demand per review period"));
    }
    let variance = rm.combined_variance();
    if variance == 0.0 {
        return Ok(0.0);
    }
    Ok((variance / (2.0 * rm.mu_r) * second_order_loss(lambda, cdf)).max(0.0))
}

/// `λ = (ROP − μ_R − μ_LT)/√(σ_R² + σ_LT²)`.
pub fn lambda_from_rop(rop: f64, rm: &ReviewMoments) -> Result<f64> {
    let variance = rm.combined_variance();
    if variance <= 0.0 {
        return Err(Error::Degenerate("review and lead-time demand have zero variance"));
    }
    Ok((rop - rm.mu_r - rm.mu_lt) / variance.sqrt())
}

/// Fill rate from `E = (1 − β)(Q + E_U)`.
///
/// The lost-sales form swaps `1 − β` for `(1 − β)/β`, giving
/// `(Q + E_U)/(Q + E_U + E)`.
pub fn beta(q: f64, undershoot: f64, shortage: f64, mode: UnfulfilledDemandMode) -> Result<f64> {
    check_quantity(q)?;
    let cycle = q + undershoot;
    Ok(match mode {
        UnfulfilledDemandMode::Backorder => 1.0 - shortage / cycle,
        UnfulfilledDemandMode::LostSales => cycle / (cycle + shortage),
    })
}

pub fn predict(
    rm: &ReviewMoments,
    rop: f64,
    q: f64,
    mode: UnfulfilledDemandMode,
    cdf: CdfKind,
) -> Result<ModelPrediction> {
    check_quantity(q)?;
    let undershoot = expected_undershoot(rm)?;
    let mean = rm.mu_r + rm.mu_lt;
    if rm.combined_variance() == 0.0 {
        if rop >= mean {
            return Ok(ModelPrediction {
                lambda: f64::INFINITY,
                expected_shortage: 0.0,
                expected_undershoot: Some(undershoot),
                beta: 1.0,
                cycle_stock: mean,
                safety_stock: rop - mean,
                rop,
            });
        }
        return Err(Error::Degenerate(
            "deterministic demand with reorder point below mean review-plus-lead-time demand",
        ));
    }
    let lambda = lambda_from_rop(rop, rm)?;
    let shortage = expected_shortage(rm, lambda, cdf)?;
    Ok(ModelPrediction {
        lambda,
        expected_shortage: shortage,
        expected_undershoot: Some(undershoot),
        beta: beta(q, undershoot, shortage, mode)?,
        cycle_stock: mean,
        safety_stock: lambda * rm.combined_variance().sqrt(),
        rop,
    })
}

pub fn solve_lambda(
    beta_target: f64,
    q: f64,
    rm: &ReviewMoments,
    mode: UnfulfilledDemandMode,
    cdf: CdfKind,
) -> Result<f64> {
    check_beta_target(beta_target)?;
    check_quantity(q)?;
    let undershoot = expected_undershoot(rm)?;
    if rm.combined_variance() <= 0.0 {
        return Err(Error::Degenerate("review and lead-time demand have zero variance"));
    }
    let cycle = q + undershoot;
    let fill_rate = |lambda: f64| {
        // expected_shortage only fails on mu_r, checked above
        let shortage = expected_shortage(rm, lambda, cdf).unwrap_or(f64::NAN);
        match mode {
            UnfulfilledDemandMode::Backorder => 1.0 - shortage / cycle,
            UnfulfilledDemandMode::LostSales => cycle / (cycle + shortage),
        }
    };
    bisect_lambda(beta_target, fill_rate)
}

/// Solve for λ, then `ROP = μ_R + μ_LT + λ√(σ_R² + σ_LT²)`.
pub fn solve(
    beta_target: f64,
    q: f64,
    rm: &ReviewMoments,
    mode: UnfulfilledDemandMode,
    cdf: CdfKind,
) -> Result<ModelPrediction> {
    let lambda = solve_lambda(beta_target, q, rm, mode, cdf)?;
    let undershoot = expected_undershoot(rm)?;
    let shortage = expected_shortage(rm, lambda, cdf)?;
    let cycle_stock = rm.mu_r + rm.mu_lt;
    let safety_stock = lambda * rm.combined_variance().sqrt();
    Ok(ModelPrediction {
        lambda,
        expected_shortage: shortage,
        expected_undershoot: Some(undershoot),
        beta: beta(q, undershoot, shortage, mode)?,
        cycle_stock,
        safety_stock,
        rop: cycle_stock + safety_stock,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use UnfulfilledDemandMode::*;

    fn rm(sigma_r: f64, sigma_lt: f64) -> ReviewMoments {
        ReviewMoments {
            review_period: 1.0,
            mu_r: 500.0,
            sigma_r,
            mu_lt: 5000.0,
            sigma_lt,
        }
    }

    #[test]
    fn undershoot_values() {
        assert_abs_diff_eq!(expected_undershoot(&rm(200.0, 0.0)).unwrap(), 290.0);
        assert_abs_diff_eq!(expected_undershoot(&rm(600.0, 0.0)).unwrap(), 610.0);
        assert_abs_diff_eq!(expected_undershoot(&rm(0.0, 0.0)).unwrap(), 250.0);
        let mut zero = rm(0.0, 0.0);
        zero.mu_r = 0.0;
        assert!(expected_undershoot(&zero).is_err());
    }

    #[test]
    fn shortage_values() {
        let e = expected_shortage(&rm(200.0, 1072.38), -0.45835, CdfKind::Approx).unwrap();
        assert_abs_diff_eq!(e, 1170.3, epsilon = 0.3);
        let e = expected_shortage(&rm(600.0, 2085.67), -0.23039, CdfKind::Approx).unwrap();
        assert_abs_diff_eq!(e, 3353.5, epsilon = 0.5);
        let far = expected_shortage(&rm(200.0, 1072.38), 9.0, CdfKind::Exact).unwrap();
        assert!((0.0..1e-12).contains(&far));
        let far = expected_shortage(&rm(200.0, 1072.38), 9.0, CdfKind::Approx).unwrap();
        assert_eq!(far, 0.0);
    }

    #[test]
    fn rop_inversion() {
        assert_abs_diff_eq!(lambda_from_rop(5000.0, &rm(200.0, 1072.38)).unwrap(), -0.45835, epsilon = 1e-5);
        assert_abs_diff_eq!(lambda_from_rop(5000.0, &rm(600.0, 2085.67)).unwrap(), -0.23039, epsilon = 1e-5);
        assert_eq!(lambda_from_rop(5500.0, &rm(600.0, 2085.67)).unwrap(), 0.0);
        assert!(lambda_from_rop(5500.0, &rm(0.0, 0.0)).is_err());
    }

    #[test]
    fn beta_values() {
        assert_abs_diff_eq!(beta(1000.0, 290.0, 1170.3, Backorder).unwrap(), 0.093, epsilon = 5e-4);
        assert_abs_diff_eq!(beta(1000.0, 290.0, 1170.3, LostSales).unwrap(), 0.524, epsilon = 5e-4);
        assert_abs_diff_eq!(beta(1000.0, 610.0, 3353.5, Backorder).unwrap(), -1.083, epsilon = 5e-4);
        assert!(beta(0.0, 610.0, 3353.5, Backorder).is_err());
    }

    #[test]
    fn solve_round_trips_table_row() {
        let r = rm(200.0, 1072.380529476361);
        let forward = predict(&r, 5000.0, 1000.0, Backorder, CdfKind::Approx).unwrap();
        assert_abs_diff_eq!(forward.beta, 0.093, epsilon = 5e-4);
        let lambda = solve_lambda(forward.beta, 1000.0, &r, Backorder, CdfKind::Approx).unwrap();
        assert!((lambda - forward.lambda).abs() < 1e-5);
        assert_abs_diff_eq!(lambda, -0.458, epsilon = 1e-3);
    }

    #[test]
    fn solve_reproduces_q6000_forward_value() {
        let r = rm(200.0, 1072.380529476361);
        let forward = predict(&r, 6000.0, 6000.0, Backorder, CdfKind::Approx).unwrap();
        assert_abs_diff_eq!(forward.beta, 0.957, epsilon = 5e-4);
        let sol = solve(forward.beta, 6000.0, &r, Backorder, CdfKind::Approx).unwrap();
        assert!((sol.beta - forward.beta).abs() < 1e-8);
        assert!((sol.rop - 6000.0).abs() < 1e-3);
    }

    #[test]
    fn high_targets_push_lambda_up() {
        let r = rm(200.0, 1072.38);
        let sol = solve(0.999, 1000.0, &r, Backorder, CdfKind::Approx).unwrap();
        assert!(sol.lambda > 1.5);
        assert!(sol.rop > r.mu_r + r.mu_lt);
    }
}
