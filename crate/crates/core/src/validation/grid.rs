//! The 3 × 4 validation grid over demand variability and order quantity.
//!
//! Every table shares one parameter set: mean demand 500/day, lead time
//! Uniform(7, 13) days, reorder point 5000, daily review, one-year
//! horizon. Rows run σ_D ∈ {200, 400, 600} (major) by Q ∈ {1000, 2000,
//! 4000, 6000} (minor).

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{run_replications, ReplicationStats};
use crate::analytic::{
    conventional, lead_time_demand_moments, policy_from_lambda, review_moments, undershoot,
    DemandSpec, LeadTimeDistribution, ModelKind, UnfulfilledDemandMode,
};
use crate::error::{invalid, Result};
use crate::normal::CdfKind;
use crate::sim::rng::replication_rng;
use crate::sim::{DeliveryTiming, SimConfig};

pub const SIGMA_GRID: [f64; 3] = [200.0, 400.0, 600.0];
pub const Q_GRID: [f64; 4] = [1000.0, 2000.0, 4000.0, 6000.0];
pub const CELLS: usize = SIGMA_GRID.len() * Q_GRID.len();

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableId {
    ConvBackorder,
    ConvLostSales,
    UndershootBackorder,
    UndershootLostSales,
}

impl TableId {
    pub const ALL: [TableId; 4] = [
        TableId::ConvBackorder,
        TableId::ConvLostSales,
        TableId::UndershootBackorder,
        TableId::UndershootLostSales,
    ];

    pub fn model(self) -> ModelKind {
        match self {
            TableId::ConvBackorder | TableId::ConvLostSales => ModelKind::Conventional,
            TableId::UndershootBackorder | TableId::UndershootLostSales => ModelKind::Undershoot,
        }
    }

    pub fn mode(self) -> UnfulfilledDemandMode {
        match self {
            TableId::ConvBackorder | TableId::UndershootBackorder => UnfulfilledDemandMode::Backorder,
            TableId::ConvLostSales | TableId::UndershootLostSales => UnfulfilledDemandMode::LostSales,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TableId::ConvBackorder => "conv-backorder",
            TableId::ConvLostSales => "conv-lostsales",
            TableId::UndershootBackorder => "undershoot-backorder",
            TableId::UndershootLostSales => "undershoot-lostsales",
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let key = s.to_ascii_lowercase().replace(['_', ' '], "-");
        let key = key.replace("lost-sales", "lostsales");
        TableId::ALL
            .into_iter()
            .find(|t| t.as_str() == key)
            .ok_or_else(|| {
                format!(
                    "unknown table `{s}`; expected one of conv-backorder, conv-lostsales, \
                     undershoot-backorder, undershoot-lostsales"
                )
            })
    }
}

/// How much stock the facility holds on day zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpeningStock {
    #[default]
    RopPlusRoq,
    Rop,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableParameters {
    pub mean_demand: f64,
    pub lead_time_min: f64,
    pub lead_time_max: f64,
    pub rop: f64,
    pub review_period: f64,
    pub horizon_days: u32,
    pub opening_stock: OpeningStock,
    pub delivery_timing: DeliveryTiming,
    pub truncate_negative_demand: bool,
}

impl Default for TableParameters {
    fn default() -> Self {
        Self {
            mean_demand: 500.0,
            lead_time_min: 7.0,
            lead_time_max: 13.0,
            rop: 5000.0,
            review_period: 1.0,
            horizon_days: crate::sim::DEFAULT_HORIZON_DAYS,
            opening_stock: OpeningStock::RopPlusRoq,
            delivery_timing: DeliveryTiming::BeforeDemand,
            truncate_negative_demand: false,
        }
    }
}

impl TableParameters {
    pub fn demand(&self, sigma_d: f64) -> Result<DemandSpec> {
        DemandSpec::new(self.mean_demand, sigma_d)
    }

    pub fn lead_time(&self) -> Result<LeadTimeDistribution> {
        LeadTimeDistribution::uniform(self.lead_time_min, self.lead_time_max)
    }

    pub fn sim_config(&self, sigma_d: f64, q: f64, mode: UnfulfilledDemandMode) -> Result<SimConfig> {
        let mut cfg = SimConfig::new(self.demand(sigma_d)?, self.lead_time()?, self.rop, q, mode);
        cfg.horizon_days = self.horizon_days;
        cfg.initial_on_hand = match self.opening_stock {
            OpeningStock::RopPlusRoq => self.rop + q,
            OpeningStock::Rop => self.rop,
        };
        cfg.delivery_timing = self.delivery_timing;
        cfg.truncate_negative_demand = self.truncate_negative_demand;
        Ok(cfg)
    }

    /// Forward-predicted fill rate for one cell.
    ///
    /// The conventional model inverts the simulated reorder point for λ.
    /// The undershoot model is evaluated at the reorder point implied by
    /// zero safety stock, `max(Q, μ)`, which departs from the simulated
    /// reorder point only when Q exceeds mean lead-time demand.
    pub fn model_beta(&self, model: ModelKind, mode: UnfulfilledDemandMode, sigma_d: f64, q: f64, cdf: CdfKind) -> Result<f64> {
        let demand = self.demand(sigma_d)?;
        let lead_time = self.lead_time()?;
        let prediction = match model {
            ModelKind::Conventional => {
                let m = lead_time_demand_moments(&demand, &lead_time);
                conventional::predict(&m, self.rop, q, mode, cdf)?
            }
            ModelKind::Undershoot => {
                let m = lead_time_demand_moments(&demand, &lead_time);
                let rop = policy_from_lambda(0.0, &m, q)?.rop.max(self.rop);
                let rm = review_moments(&demand, &lead_time, self.review_period)?;
                undershoot::predict(&rm, rop, q, mode, cdf)?
            }
        };
        Ok(prediction.beta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridOptions {
    pub params: TableParameters,
    pub replications: usize,
    pub master_seed: u64,
    pub cdf: CdfKind,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            params: TableParameters::default(),
            replications: 100,
            master_seed: 20_160_301,
            cdf: CdfKind::Approx,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationRow {
    pub sigma_d: f64,
    pub q: f64,
    pub model_beta: f64,
    pub sim_mean_beta: f64,
    pub sim_std_beta: f64,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationTable {
    pub table_id: TableId,
    pub rows: Vec<ValidationRow>,
}

/// `(σ_D, Q)` in row order.
pub fn grid_cells() -> impl Iterator<Item = (f64, f64)> {
    SIGMA_GRID
        .into_iter()
        .flat_map(|s| Q_GRID.into_iter().map(move |q| (s, q)))
}

fn mode_index(mode: UnfulfilledDemandMode) -> u64 {
    match mode {
        UnfulfilledDemandMode::Backorder => 0,
        UnfulfilledDemandMode::LostSales => 1,
    }
}

/// Master seed for one `(mode, cell)` batch. Depends only on indices, so
/// the conventional and undershoot tables of a mode see the same batches.
pub fn cell_seed(master_seed: u64, mode: UnfulfilledDemandMode, cell: usize) -> u64 {
    let stream = (1u64 << 40) | (mode_index(mode) << 16) | cell as u64;
    replication_rng(master_seed, stream).gen()
}

/// Replication statistics for all 12 cells of one mode.
pub fn simulate_cells(mode: UnfulfilledDemandMode, opts: &GridOptions) -> Result<Vec<ReplicationStats>> {
    if opts.replications < 2 {
        return Err(invalid("replications", "the match rule needs at least 2 replications"));
    }
    let cells: Vec<(usize, f64, f64)> = grid_cells().enumerate().map(|(i, (s, q))| (i, s, q)).collect();
    let run = |&(i, sigma_d, q): &(usize, f64, f64)| {
        let cfg = opts.params.sim_config(sigma_d, q, mode)?;
        run_replications(&cfg, opts.replications, cell_seed(opts.master_seed, mode, i))
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        cells.par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        cells.iter().map(run).collect()
    }
}

/// Analytic column for a table, in row order.
pub fn model_column(table_id: TableId, params: &TableParameters, cdf: CdfKind) -> Result<Vec<f64>> {
    grid_cells()
        .map(|(s, q)| params.model_beta(table_id.model(), table_id.mode(), s, q, cdf))
        .collect()
}

pub fn assemble_table(table_id: TableId, model: &[f64], sims: &[ReplicationStats]) -> ValidationTable {
    let rows = grid_cells()
        .zip(model.iter().zip(sims))
        .map(|((sigma_d, q), (&model_beta, stats))| {
            let std = stats.std_beta.unwrap_or(f64::NAN);
            ValidationRow {
                sigma_d,
                q,
                model_beta,
                sim_mean_beta: stats.mean_beta,
                sim_std_beta: std,
                matches: super::two_sigma_match(model_beta, stats.mean_beta, std),
            }
        })
        .collect();
    ValidationTable { table_id, rows }
}

pub fn run_grid(table_id: TableId, opts: &GridOptions) -> Result<ValidationTable> {
    let model = model_column(table_id, &opts.params, opts.cdf)?;
    let sims = simulate_cells(table_id.mode(), opts)?;
    Ok(assemble_table(table_id, &model, &sims))
}

/// Published values for one cell, in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceCell {
    pub model_pct: f64,
    pub sim_mean_pct: f64,
    pub sim_std_pct: f64,
    pub matches: bool,
}

const BACKORDER_SIM: [(f64, f64); CELLS] = [
    (89.3, 2.7), (89.7, 2.9), (94.8, 1.6), (95.9, 2.1),
    (79.5, 5.5), (80.3, 5.8), (90.1, 3.1), (89.7, 5.2),
    (68.1, 7.1), (70.3, 8.2), (83.7, 5.2), (81.9, 7.9),
];
const LOST_SALES_SIM: [(f64, f64); CELLS] = [
    (93.9, 1.2), (93.9, 1.2), (95.9, 1.2), (96.5, 1.2),
    (89.3, 1.9), (90.0, 1.8), (92.8, 1.8), (93.8, 2.0),
    (84.3, 2.7), (86.1, 2.5), (89.7, 2.4), (90.1, 2.7),
];
const CONV_BACKORDER_MODEL: [f64; CELLS] = [
    57.2, 78.6, 89.3, 92.9, 38.8, 69.4, 84.7, 89.8, 16.8, 58.4, 79.2, 86.1,
];
const CONV_LOST_SALES_MODEL: [f64; CELLS] = [
    70.1, 82.4, 90.3, 93.3, 62.1, 76.6, 86.7, 90.7, 54.6, 70.6, 82.8, 87.8,
];
const UNDERSHOOT_BACKORDER_MODEL: [f64; CELLS] = [
    9.3, 48.9, 72.7, 95.7, -43.5, 16.1, 54.1, 88.5, -108.0, -28.5, 27.2, 75.7,
];
const UNDERSHOOT_LOST_SALES_MODEL: [f64; CELLS] = [
    52.4, 66.2, 78.6, 95.9, 41.1, 54.4, 68.5, 90.0, 32.4, 43.8, 57.9, 84.8,
];
const CONV_BACKORDER_FLAGS: [bool; CELLS] = [
    false, false, false, true, false, true, true, true, false, true, true, true,
];
const Q6000_ONLY_FLAGS: [bool; CELLS] = [
    false, false, false, true, false, false, false, true, false, false, false, true,
];

/// Published table for `table_id`, in row order.
pub fn reference_table(table_id: TableId) -> [ReferenceCell; CELLS] {
    let (model, sim, flags) = match table_id {
        TableId::ConvBackorder => (&CONV_BACKORDER_MODEL, &BACKORDER_SIM, &CONV_BACKORDER_FLAGS),
        TableId::ConvLostSales => (&CONV_LOST_SALES_MODEL, &LOST_SALES_SIM, &Q6000_ONLY_FLAGS),
        TableId::UndershootBackorder => (&UNDERSHOOT_BACKORDER_MODEL, &BACKORDER_SIM, &Q6000_ONLY_FLAGS),
        TableId::UndershootLostSales => (&UNDERSHOOT_LOST_SALES_MODEL, &LOST_SALES_SIM, &Q6000_ONLY_FLAGS),
    };
    std::array::from_fn(|i| ReferenceCell {
        model_pct: model[i],
        sim_mean_pct: sim[i].0,
        sim_std_pct: sim[i].1,
        matches: flags[i],
    })
}

/// Cells whose match flag differs from the published one, as `(σ_D, Q)`.
pub fn flag_flips(table: &ValidationTable) -> Vec<(f64, f64)> {
    let reference = reference_table(table.table_id);
    table
        .rows
        .iter()
        .zip(reference.iter())
        .filter(|(row, r)| row.matches != r.matches)
        .map(|(row, _)| (row.sigma_d, row.q))
        .collect()
}

/// At most this many flag flips per table are tolerated.
pub const MAX_FLAG_FLIPS: usize = 1;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_ids_parse() {
        for t in TableId::ALL {
            assert_eq!(t.as_str().parse::<TableId>().unwrap(), t);
        }
        assert_eq!("conv_lost_sales".parse::<TableId>().unwrap(), TableId::ConvLostSales);
        assert!("table-6".parse::<TableId>().is_err());
    }

    #[test]
    fn grid_is_complete_factorial() {
        let cells: Vec<_> = grid_cells().collect();
        assert_eq!(cells.len(), 12);
        for s in SIGMA_GRID {
            for q in Q_GRID {
                assert_eq!(cells.iter().filter(|&&c| c == (s, q)).count(), 1);
            }
        }
        assert_eq!(cells[0], (200.0, 1000.0));
        assert_eq!(cells[11], (600.0, 6000.0));
    }

    #[test]
    fn conventional_backorder_model_column() {
        let col = model_column(TableId::ConvBackorder, &TableParameters::default(), CdfKind::Approx).unwrap();
        for (got, want) in col.iter().zip(CONV_BACKORDER_MODEL) {
            assert!((100.0 * got - want).abs() < 0.06, "{got} vs {want}");
        }
    }

    #[test]
    fn cell_seeds_differ() {
        let a = cell_seed(1, UnfulfilledDemandMode::Backorder, 0);
        let b = cell_seed(1, UnfulfilledDemandMode::Backorder, 1);
        let c = cell_seed(1, UnfulfilledDemandMode::LostSales, 0);
        assert!(a != b && a != c && b != c);
        assert_eq!(a, cell_seed(1, UnfulfilledDemandMode::Backorder, 0));
    }

    #[test]
    fn opening_stock_choice() {
        let mut p = TableParameters::default();
        let cfg = p.sim_config(200.0, 2000.0, UnfulfilledDemandMode::Backorder).unwrap();
        assert_eq!(cfg.initial_on_hand, 7000.0);
        p.opening_stock = OpeningStock::Rop;
        let cfg = p.sim_config(200.0, 2000.0, UnfulfilledDemandMode::Backorder).unwrap();
        assert_eq!(cfg.initial_on_hand, 5000.0);
    }

    #[test]
    fn too_few_replications() {
        let opts = GridOptions { replications: 1, ..GridOptions::default() };
        assert!(simulate_cells(UnfulfilledDemandMode::Backorder, &opts).is_err());
    }
}
