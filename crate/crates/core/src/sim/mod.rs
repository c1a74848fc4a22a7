//! Day-stepped simulation of one stocking facility under a reorder-point
//! policy.
//!
//! Each day: receive due orders, draw demand, ship what stock allows,
//! then reorder `roq` units if the inventory position is at or below
//! `1.01 × rop`. Backorder mode carries unmet demand forward and ships it
//! once stock arrives; lost-sales mode drops it.

pub mod rng;
pub mod trace;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::{DemandSpec, LeadTimeDistribution, UnfulfilledDemandMode};
use crate::error::{invalid, Error, Result};
use rng::{draw_demand, draw_lead_time, replication_rng};

pub use rng::SimRng;
pub use trace::{DayRecord, TraceWriter};

pub const DEFAULT_HORIZON_DAYS: u32 = 365;
/// Orders fire when the position is within 1% above the reorder point.
pub const REORDER_TRIGGER_FACTOR: f64 = 1.01;

/// When same-day deliveries are booked relative to that day's demand.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeliveryTiming {
    #[default]
    BeforeDemand,
    AfterDemand,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub demand: DemandSpec,
    pub lead_time: LeadTimeDistribution,
    pub rop: f64,
    pub roq: f64,
    pub mode: UnfulfilledDemandMode,
    pub horizon_days: u32,
    pub initial_on_hand: f64,
    pub truncate_negative_demand: bool,
    pub delivery_timing: DeliveryTiming,
    pub seed: u64,
}

impl SimConfig {
    /// Defaults: 365-day horizon, opening stock `rop + roq`, no demand
    /// truncation, deliveries before demand, seed 0.
    pub fn new(
        demand: DemandSpec,
        lead_time: LeadTimeDistribution,
        rop: f64,
        roq: f64,
        mode: UnfulfilledDemandMode,
    ) -> Self {
        Self {
            demand,
            lead_time,
            rop,
            roq,
            mode,
            horizon_days: DEFAULT_HORIZON_DAYS,
            initial_on_hand: rop + roq,
            truncate_negative_demand: false,
            delivery_timing: DeliveryTiming::BeforeDemand,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon_days == 0 {
            return Err(invalid("horizon_days", "must be at least 1"));
        }
        if !(self.roq.is_finite() && self.roq > 0.0) {
            return Err(invalid("roq", "must be positive and finite"));
        }
        if !(self.rop.is_finite() && self.rop >= 0.0) {
            return Err(invalid("rop", "must be non-negative and finite"));
        }
        if !(self.initial_on_hand.is_finite() && self.initial_on_hand >= 0.0) {
            return Err(invalid("initial_on_hand", "must be non-negative and finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PendingOrder {
    pub due_day: u32,
    pub qty: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacilityState {
    pub day: u32,
    pub on_hand: f64,
    pub inventory_position: f64,
    /// Outstanding backlog; stays zero in lost-sales mode.
    pub backorder_total: f64,
    pub pending_orders: Vec<PendingOrder>,
    pub total_demand: f64,
    /// Demand not served on the day it arrived (backorder mode).
    pub total_late_sales: f64,
    /// Everything shipped, including late backlog shipments.
    pub total_shipped: f64,
}

impl FacilityState {
    pub fn initial(cfg: &SimConfig) -> Self {
        Self {
            day: 0,
            on_hand: cfg.initial_on_hand,
            inventory_position: cfg.initial_on_hand,
            backorder_total: 0.0,
            pending_orders: Vec::new(),
            total_demand: 0.0,
            total_late_sales: 0.0,
            total_shipped: 0.0,
        }
    }

    pub fn on_order(&self) -> f64 {
        self.pending_orders.iter().map(|o| o.qty).sum()
    }

    /// `inventory_position − on_hand − on_order`; zero up to rounding.
    pub fn conservation_gap(&self) -> f64 {
        self.inventory_position - self.on_hand - self.on_order()
    }

    fn receive_due(&mut self) -> f64 {
        let day = self.day;
        let mut received = 0.0;
        self.pending_orders.retain(|o| {
            if o.due_day <= day {
                received += o.qty;
                false
            } else {
                true
            }
        });
        self.on_hand += received;
        received
    }

    /// Advance one day. Returns what happened, for tracing.
    pub fn step_day<R: Rng + ?Sized>(&mut self, cfg: &SimConfig, rng: &mut R) -> DayRecord {
        self.day += 1;

        let mut deliveries = 0.0;
        if cfg.delivery_timing == DeliveryTiming::BeforeDemand {
            deliveries += self.receive_due();
        }

        let demand = draw_demand(rng, &cfg.demand, cfg.truncate_negative_demand);
        let shipment = match cfg.mode {
            UnfulfilledDemandMode::Backorder => {
                let owed = demand + self.backorder_total;
                let shipment = owed.min(self.on_hand);
                // owed − shipment rather than backlog += demand − shipment:
                // same value, but it cannot round below zero.
                self.backorder_total = owed - shipment;
                self.total_late_sales += (demand - shipment).max(0.0);
                shipment
            }
            UnfulfilledDemandMode::LostSales => demand.min(self.on_hand),
        };
        self.total_shipped += shipment;
        self.on_hand -= shipment;
        self.inventory_position -= shipment;
        self.total_demand += demand;

        if cfg.delivery_timing == DeliveryTiming::AfterDemand {
            deliveries += self.receive_due();
        }

        let mut orders_placed = 0;
        if self.inventory_position <= REORDER_TRIGGER_FACTOR * cfg.rop {
            let lead = draw_lead_time(rng, &cfg.lead_time);
            self.pending_orders.push(PendingOrder {
                due_day: self.day + lead,
                qty: cfg.roq,
            });
            self.inventory_position += cfg.roq;
            orders_placed = 1;
            if lead == 0 {
                deliveries += self.receive_due();
            }
        }

        debug_assert!(self.on_hand >= 0.0, "negative on-hand {}", self.on_hand);
        debug_assert!(self.backorder_total >= 0.0);

        DayRecord {
            day: self.day,
            demand,
            shipment,
            on_hand: self.on_hand,
            position: self.inventory_position,
            backorder_total: self.backorder_total,
            orders_placed,
            deliveries,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub beta: f64,
    pub total_demand: f64,
    pub total_late_sales: f64,
    pub total_shipped: f64,
    pub final_state: FacilityState,
}

/// Fill rate from end-of-horizon totals.
pub fn fill_rate(state: &FacilityState, mode: UnfulfilledDemandMode) -> Option<f64> {
    if !(state.total_demand > 0.0) {
        return None;
    }
    Some(match mode {
        UnfulfilledDemandMode::Backorder => 1.0 - state.total_late_sales / state.total_demand,
        UnfulfilledDemandMode::LostSales => state.total_shipped / state.total_demand,
    })
}

/// Runs one replication on the supplied stream, calling `observe` after
/// every day.
pub fn run_with<R, F>(cfg: &SimConfig, rng: &mut R, replication: u64, mut observe: F) -> Result<SimResult>
where
    R: Rng + ?Sized,
    F: FnMut(&FacilityState, &DayRecord),
{
    cfg.validate()?;
    let mut state = FacilityState::initial(cfg);
    for _ in 0..cfg.horizon_days {
        let record = state.step_day(cfg, rng);
        observe(&state, &record);
    }
    let beta = fill_rate(&state, cfg.mode).ok_or(Error::UndefinedFillRate { replication })?;
    Ok(SimResult {
        beta,
        total_demand: state.total_demand,
        total_late_sales: state.total_late_sales,
        total_shipped: state.total_shipped,
        final_state: state,
    })
}

/// One replication of `cfg.horizon_days` days on stream `(seed, replication)`.
pub fn run_replication_indexed(cfg: &SimConfig, replication: u64) -> Result<SimResult> {
    let mut rng = replication_rng(cfg.seed, replication);
    run_with(cfg, &mut rng, replication, |_, _| {})
}

/// One replication seeded from `cfg.seed` alone.
pub fn run_replication(cfg: &SimConfig) -> Result<SimResult> {
    run_replication_indexed(cfg, 0)
}
