//! Replication batches, summary statistics and the two-sigma match rule.

pub mod grid;
pub mod quadrature;
pub mod table;

use serde::{Deserialize, Serialize};

use crate::analytic::{ModelKind, UnfulfilledDemandMode};
use crate::error::{invalid, Result};
use crate::sim::{run_replication_indexed, SimConfig};

pub use grid::{run_grid, simulate_cells, GridOptions, TableId, TableParameters, ValidationRow, ValidationTable};
pub use quadrature::numeric_shortage_oracle;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub model: ModelKind,
    pub mode: UnfulfilledDemandMode,
    pub sim_config: SimConfig,
    pub review_period: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationStats {
    pub n: usize,
    pub mean_beta: f64,
    /// Sample standard deviation (n − 1 denominator); `None` when n < 2.
    pub std_beta: Option<f64>,
    pub per_replication_betas: Vec<f64>,
}

impl ReplicationStats {
    pub fn from_betas(betas: Vec<f64>) -> Self {
        let n = betas.len();
        let mean = betas.iter().sum::<f64>() / n as f64;
        let std = (n >= 2).then(|| {
            let ss: f64 = betas.iter().map(|b| (b - mean).powi(2)).sum();
            (ss / (n - 1) as f64).sqrt()
        });
        Self {
            n,
            mean_beta: mean,
            std_beta: std,
            per_replication_betas: betas,
        }
    }

    /// Two-sigma rule against this batch; `None` without a defined std.
    pub fn matches(&self, model_beta: f64) -> Option<bool> {
        self.std_beta.map(|std| two_sigma_match(model_beta, self.mean_beta, std))
    }
}

/// `|model − mean| ≤ 2·std`.
pub fn two_sigma_match(model_beta: f64, mean_beta: f64, std_beta: f64) -> bool {
    (model_beta - mean_beta).abs() <= 2.0 * std_beta
}

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        Err(invalid("replications", "must be at least 1"))
    } else {
        Ok(())
    }
}

fn seeded(cfg: &SimConfig, master_seed: u64) -> SimConfig {
    SimConfig {
        seed: master_seed,
        ..cfg.clone()
    }
}

/// Replication `i` runs on stream `(master_seed, i)`.
pub fn run_replications_sequential(cfg: &SimConfig, n: usize, master_seed: u64) -> Result<ReplicationStats> {
    check_count(n)?;
    let cfg = seeded(cfg, master_seed);
    let betas = (0..n as u64)
        .map(|i| run_replication_indexed(&cfg, i).map(|r| r.beta))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReplicationStats::from_betas(betas))
}

#[cfg(feature = "parallel")]
pub fn run_replications_parallel(cfg: &SimConfig, n: usize, master_seed: u64) -> Result<ReplicationStats> {
    use rayon::prelude::*;

    check_count(n)?;
    let cfg = seeded(cfg, master_seed);
    let betas = (0..n as u64)
        .into_par_iter()
        .map(|i| run_replication_indexed(&cfg, i).map(|r| r.beta))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReplicationStats::from_betas(betas))
}

/// Parallel when the `parallel` feature is on; identical output either way.
pub fn run_replications(cfg: &SimConfig, n: usize, master_seed: u64) -> Result<ReplicationStats> {
    #[cfg(feature = "parallel")]
    {
        run_replications_parallel(cfg, n, master_seed)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_replications_sequential(cfg, n, master_seed)
    }
}

pub fn run_scenario(scenario: &Scenario, n: usize, master_seed: u64) -> Result<ReplicationStats> {
    if !(scenario.review_period > 0.0) {
        return Err(invalid("review_period", "must be positive"));
    }
    let cfg = SimConfig {
        mode: scenario.mode,
        ..scenario.sim_config.clone()
    };
    run_replications(&cfg, n, master_seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{DemandSpec, LeadTimeDistribution};
    use crate::error::Error;

    fn cfg(sigma_d: f64, q: f64, mode: UnfulfilledDemandMode) -> SimConfig {
        SimConfig::new(
            DemandSpec::new(500.0, sigma_d).unwrap(),
            LeadTimeDistribution::uniform(7.0, 13.0).unwrap(),
            5000.0,
            q,
            mode,
        )
    }

    #[test]
    fn sample_statistics() {
        let s = ReplicationStats::from_betas(vec![0.9, 0.8, 1.0]);
        assert!((s.mean_beta - 0.9).abs() < 1e-15);
        assert!((s.std_beta.unwrap() - 0.1).abs() < 1e-15);
        let single = ReplicationStats::from_betas(vec![0.9]);
        assert_eq!(single.std_beta, None);
        assert_eq!(single.matches(0.9), None);
    }

    #[test]
    fn match_rule() {
        assert!(two_sigma_match(0.929, 0.959, 0.021));
        assert!(!two_sigma_match(0.572, 0.893, 0.027));
        assert!(two_sigma_match(0.5, 0.5, 0.0));
    }

    #[test]
    fn zero_variance_batch() {
        let mut c = cfg(0.0, 1000.0, UnfulfilledDemandMode::Backorder);
        c.lead_time = LeadTimeDistribution::fixed(3.0).unwrap();
        c.rop = 2000.0;
        let s = run_replications(&c, 2, 5).unwrap();
        assert_eq!(s.std_beta, Some(0.0));
        assert_eq!(s.mean_beta, 1.0);
    }

    #[test]
    fn sequential_and_default_agree() {
        let c = cfg(400.0, 2000.0, UnfulfilledDemandMode::LostSales);
        let a = run_replications_sequential(&c, 16, 3).unwrap();
        let b = run_replications(&c, 16, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn undefined_replication_aborts_batch() {
        let mut c = cfg(0.0, 1000.0, UnfulfilledDemandMode::LostSales);
        c.demand = DemandSpec { mean_per_period: 0.0, std_per_period: 0.0 };
        assert!(matches!(run_replications(&c, 4, 1), Err(Error::UndefinedFillRate { .. })));
        assert!(run_replications(&c, 0, 1).is_err());
    }
}
