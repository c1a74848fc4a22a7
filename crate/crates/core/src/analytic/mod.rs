//! Closed-form fill-rate models for a reorder-point system with normally
//! distributed daily demand and uniformly distributed lead time.
//!
//! Two models are provided. [`conventional`] assumes inventory is watched
//! continuously so an order fires exactly at the reorder point.
//! [`undershoot`] accounts for periodic review, where the inventory
//! position can drop below the reorder point before the next check.

pub mod conventional;
pub mod solver;
pub mod undershoot;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::normal::CdfKind;

/// Normally distributed demand per period (day).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemandSpec {
    pub mean_per_period: f64,
    pub std_per_period: f64,
}

impl DemandSpec {
    pub fn new(mean_per_period: f64, std_per_period: f64) -> Result<Self> {
        if !(mean_per_period.is_finite() && mean_per_period > 0.0) {
            return Err(invalid("mean_demand", "must be a positive finite number"));
        }
        if !(std_per_period.is_finite() && std_per_period >= 0.0) {
            return Err(invalid("demand_std", "must be a non-negative finite number"));
        }
        Ok(Self {
            mean_per_period,
            std_per_period,
        })
    }
}

/// Lead time drawn uniformly from `[min_days, max_days]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeadTimeDistribution {
    min_days: f64,
    max_days: f64,
}

impl LeadTimeDistribution {
    pub fn uniform(min_days: f64, max_days: f64) -> Result<Self> {
        if !(min_days.is_finite() && min_days > 0.0) {
            return Err(invalid("lead_time_min", "must be a positive finite number"));
        }
        if !(max_days.is_finite() && max_days >= min_days) {
            return Err(invalid("lead_time_max", "must be finite and at least lead_time_min"));
        }
        Ok(Self { min_days, max_days })
    }

    pub fn fixed(days: f64) -> Result<Self> {
        Self::uniform(days, days)
    }

    pub fn min_days(&self) -> f64 {
        self.min_days
    }

    pub fn max_days(&self) -> f64 {
        self.max_days
    }

    pub fn mean_days(&self) -> f64 {
        0.5 * (self.min_days + self.max_days)
    }

    /// Continuous-uniform standard deviation `(b − a)/√12`.
    pub fn std_days(&self) -> f64 {
        (self.max_days - self.min_days) / 12f64.sqrt()
    }
}

/// Mean and standard deviation of demand over one lead time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeadTimeDemandMoments {
    pub mu: f64,
    pub sigma: f64,
}

pub fn lead_time_demand_moments(
    demand: &DemandSpec,
    lead_time: &LeadTimeDistribution,
) -> LeadTimeDemandMoments {
    let mu_l = lead_time.mean_days();
    let sigma_l = lead_time.std_days();
    let mu_d = demand.mean_per_period;
    let sigma_d = demand.std_per_period;
    LeadTimeDemandMoments {
        mu: mu_d * mu_l,
        sigma: (mu_l * sigma_d * sigma_d + mu_d * mu_d * sigma_l * sigma_l).sqrt(),
    }
}

/// Demand moments over one review period and over one lead time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReviewMoments {
    pub review_period: f64,
    pub mu_r: f64,
    pub sigma_r: f64,
    pub mu_lt: f64,
    pub sigma_lt: f64,
}

impl ReviewMoments {
    /// Variance of demand over review period plus lead time.
    pub fn combined_variance(&self) -> f64 {
        self.sigma_r * self.sigma_r + self.sigma_lt * self.sigma_lt
    }
}

pub fn review_moments(
    demand: &DemandSpec,
    lead_time: &LeadTimeDistribution,
    review_period: f64,
) -> Result<ReviewMoments> {
    if !(review_period.is_finite() && review_period > 0.0) {
        return Err(invalid("review_period", "must be a positive finite number"));
    }
    let lt = lead_time_demand_moments(demand, lead_time);
    Ok(ReviewMoments {
        review_period,
        mu_r: demand.mean_per_period * review_period,
        sigma_r: demand.std_per_period * review_period.sqrt(),
        mu_lt: lt.mu,
        sigma_lt: lt.sigma,
    })
}

/// What happens to demand that cannot be served from stock.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnfulfilledDemandMode {
    Backorder,
    LostSales,
}

impl fmt::Display for UnfulfilledDemandMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Backorder => "backorder",
            Self::LostSales => "lost-sales",
        })
    }
}

impl FromStr for UnfulfilledDemandMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "backorder" => Ok(Self::Backorder),
            "lost-sales" | "lostsales" => Ok(Self::LostSales),
            other => Err(format!("expected `backorder` or `lost-sales`, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Conventional,
    Undershoot,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Conventional => "conventional",
            Self::Undershoot => "undershoot",
        })
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "conventional" => Ok(Self::Conventional),
            "undershoot" => Ok(Self::Undershoot),
            other => Err(format!("expected `conventional` or `undershoot`, got `{other}`")),
        }
    }
}

/// Output of a forward prediction or an inverse solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelPrediction {
    pub lambda: f64,
    pub expected_shortage: f64,
    /// Present for the undershoot model only.
    pub expected_undershoot: Option<f64>,
    /// Not clamped: the undershoot backorder form can go negative.
    pub beta: f64,
    pub cycle_stock: f64,
    pub safety_stock: f64,
    pub rop: f64,
}

/// Cycle stock, safety stock and reorder point for a given λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Policy {
    pub cycle_stock: f64,
    pub safety_stock: f64,
    pub rop: f64,
}

/// `CS = max(Q, μ)`, `SS = λσ`, `ROP = CS + SS`.
pub fn policy_from_lambda(lambda: f64, moments: &LeadTimeDemandMoments, q: f64) -> Result<Policy> {
    check_quantity(q)?;
    let cycle_stock = q.max(moments.mu);
    let safety_stock = lambda * moments.sigma;
    Ok(Policy {
        cycle_stock,
        safety_stock,
        rop: cycle_stock + safety_stock,
    })
}

pub(crate) fn check_quantity(q: f64) -> Result<()> {
    if q.is_finite() && q > 0.0 {
        Ok(())
    } else {
        Err(invalid("roq", "reorder quantity must be positive and finite"))
    }
}

/// Everything a model needs to describe one system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelInputs {
    pub demand: DemandSpec,
    pub lead_time: LeadTimeDistribution,
    pub q: f64,
    pub review_period: f64,
    pub mode: UnfulfilledDemandMode,
    pub cdf: CdfKind,
}

/// Forward prediction of the fill rate at a given reorder point.
pub fn predict(model: ModelKind, inputs: &ModelInputs, rop: f64) -> Result<ModelPrediction> {
    match model {
        ModelKind::Conventional => {
            let m = lead_time_demand_moments(&inputs.demand, &inputs.lead_time);
            conventional::predict(&m, rop, inputs.q, inputs.mode, inputs.cdf)
        }
        ModelKind::Undershoot => {
            let rm = review_moments(&inputs.demand, &inputs.lead_time, inputs.review_period)?;
            undershoot::predict(&rm, rop, inputs.q, inputs.mode, inputs.cdf)
        }
    }
}

/// Inverse problem: the λ and reorder point that deliver `beta_target`.
pub fn solve(model: ModelKind, inputs: &ModelInputs, beta_target: f64) -> Result<ModelPrediction> {
    match model {
        ModelKind::Conventional => {
            let m = lead_time_demand_moments(&inputs.demand, &inputs.lead_time);
            conventional::solve(beta_target, inputs.q, &m, inputs.mode, inputs.cdf)
        }
        ModelKind::Undershoot => {
            let rm = review_moments(&inputs.demand, &inputs.lead_time, inputs.review_period)?;
            undershoot::solve(beta_target, inputs.q, &rm, inputs.mode, inputs.cdf)
        }
    }
}

pub(crate) fn check_beta_target(beta_target: f64) -> Result<()> {
    if beta_target > 0.0 && beta_target < 1.0 {
        Ok(())
    } else {
        Err(invalid("beta_target", "must lie strictly between 0 and 1"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn table_demand(sigma_d: f64) -> DemandSpec {
        DemandSpec::new(500.0, sigma_d).unwrap()
    }

    #[test]
    fn lead_time_moments() {
        let lt = LeadTimeDistribution::uniform(7.0, 13.0).unwrap();
        assert_abs_diff_eq!(lt.mean_days(), 10.0);
        assert_abs_diff_eq!(lt.std_days(), 6.0 / 12f64.sqrt());

        let m = lead_time_demand_moments(&table_demand(200.0), &lt);
        assert_abs_diff_eq!(m.mu, 5000.0);
        assert_abs_diff_eq!(m.sigma, 1072.38, epsilon = 5e-3);

        let m = lead_time_demand_moments(&table_demand(600.0), &lt);
        assert_abs_diff_eq!(m.sigma, 2085.67, epsilon = 5e-3);

        let fixed = LeadTimeDistribution::fixed(10.0).unwrap();
        let m = lead_time_demand_moments(&table_demand(0.0), &fixed);
        assert_eq!(m.sigma, 0.0);
    }

    #[test]
    fn review_period_moments() {
        let lt = LeadTimeDistribution::uniform(7.0, 13.0).unwrap();
        let rm = review_moments(&table_demand(200.0), &lt, 1.0).unwrap();
        assert_abs_diff_eq!(rm.mu_r, 500.0);
        assert_abs_diff_eq!(rm.sigma_r, 200.0);
        let conv = lead_time_demand_moments(&table_demand(200.0), &lt);
        assert_eq!(rm.mu_lt, conv.mu);
        assert_eq!(rm.sigma_lt, conv.sigma);

        let rm = review_moments(&table_demand(200.0), &lt, 4.0).unwrap();
        assert_abs_diff_eq!(rm.mu_r, 2000.0);
        assert_abs_diff_eq!(rm.sigma_r, 400.0);

        let rm = review_moments(&table_demand(0.0), &lt, 4.0).unwrap();
        assert_eq!(rm.sigma_r, 0.0);

        assert!(review_moments(&table_demand(0.0), &lt, 0.0).is_err());
    }

    #[test]
    fn policy_assembly() {
        let m = LeadTimeDemandMoments { mu: 5000.0, sigma: 1072.38 };
        let p = policy_from_lambda(0.0, &m, 1000.0).unwrap();
        assert_eq!((p.cycle_stock, p.safety_stock, p.rop), (5000.0, 0.0, 5000.0));
        let p = policy_from_lambda(0.0, &m, 6000.0).unwrap();
        assert_eq!((p.cycle_stock, p.safety_stock, p.rop), (6000.0, 0.0, 6000.0));
        let m = LeadTimeDemandMoments { mu: 5000.0, sigma: 1000.0 };
        let p = policy_from_lambda(1.0, &m, 1000.0).unwrap();
        assert_eq!(p.rop, 6000.0);
        assert!(policy_from_lambda(1.0, &m, 0.0).is_err());
    }

    #[test]
    fn input_validation() {
        assert!(DemandSpec::new(0.0, 1.0).is_err());
        assert!(DemandSpec::new(500.0, -1.0).is_err());
        assert!(LeadTimeDistribution::uniform(0.0, 3.0).is_err());
        assert!(LeadTimeDistribution::uniform(5.0, 3.0).is_err());
        assert!(LeadTimeDistribution::uniform(5.0, 5.0).is_ok());
    }

    #[test]
    fn mode_and_model_parse() {
        assert_eq!("lost_sales".parse::<UnfulfilledDemandMode>().unwrap(), UnfulfilledDemandMode::LostSales);
        assert_eq!("Backorder".parse::<UnfulfilledDemandMode>().unwrap(), UnfulfilledDemandMode::Backorder);
        assert!("both".parse::<UnfulfilledDemandMode>().is_err());
        assert_eq!("undershoot".parse::<ModelKind>().unwrap(), ModelKind::Undershoot);
    }
}
