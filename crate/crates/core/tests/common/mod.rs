//! Randomized engine exercise shared by the property and acceptance suites.
#![allow(dead_code)]

use fillrate::analytic::{DemandSpec, LeadTimeDistribution, UnfulfilledDemandMode};
use fillrate::sim::rng::replication_rng;
use fillrate::sim::{run_replication, run_with, DayRecord, DeliveryTiming, FacilityState, SimConfig, REORDER_TRIGGER_FACTOR};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_config(rng: &mut impl Rng) -> SimConfig {
    let mean = rng.gen_range(10.0..1000.0);
    let std = mean * rng.gen_range(0.0..1.5);
    let lo = rng.gen_range(1.0..15.0);
    let hi = lo + rng.gen_range(0.0..10.0);
    let mode = if rng.gen() {
        UnfulfilledDemandMode::Backorder
    } else {
        UnfulfilledDemandMode::LostSales
    };
    let rop = mean * rng.gen_range(0.0..20.0);
    let roq = mean * rng.gen_range(0.5..15.0);
    let mut cfg = SimConfig::new(
        DemandSpec::new(mean, std).unwrap(),
        LeadTimeDistribution::uniform(lo, hi).unwrap(),
        rop,
        roq,
        mode,
    );
    cfg.initial_on_hand = rng.gen_range(0.0..(rop + roq + 1.0));
    cfg.truncate_negative_demand = rng.gen_bool(0.2);
    cfg.delivery_timing = if rng.gen_bool(0.5) {
        DeliveryTiming::BeforeDemand
    } else {
        DeliveryTiming::AfterDemand
    };
    cfg.seed = rng.gen();
    cfg
}

#[derive(Default)]
struct Ledger {
    demand: f64,
    shipped: f64,
    late: f64,
    delivered: f64,
    orders: u32,
}

fn check_day(cfg: &SimConfig, state: &FacilityState, rec: &DayRecord, ledger: &mut Ledger) -> Result<(), String> {
    let scale = 1.0 + state.inventory_position.abs() + state.on_hand + state.on_order();
    if state.conservation_gap().abs() > 1e-9 * scale {
        return Err(format!("day {}: conservation gap {}", rec.day, state.conservation_gap()));
    }
    if state.on_hand < 0.0 {
        return Err(format!("day {}: on-hand {}", rec.day, state.on_hand));
    }
    if state.backorder_total < 0.0 {
        return Err(format!("day {}: backlog {}", rec.day, state.backorder_total));
    }
    if rec.orders_placed > 1 {
        return Err("more than one order in a day".into());
    }
    let before_order = rec.position - cfg.roq * rec.orders_placed as f64;
    let should_order = before_order <= REORDER_TRIGGER_FACTOR * cfg.rop;
    // Position is only rounded once here, so compare with a hair of slack.
    let near = (before_order - REORDER_TRIGGER_FACTOR * cfg.rop).abs() < 1e-9 * scale;
    if !near && should_order != (rec.orders_placed == 1) {
        return Err(format!("day {}: trigger mismatch", rec.day));
    }
    ledger.demand += rec.demand;
    ledger.shipped += rec.shipment;
    ledger.delivered += rec.deliveries;
    ledger.orders += rec.orders_placed;
    if cfg.mode == UnfulfilledDemandMode::Backorder {
        ledger.late += (rec.demand - rec.shipment).max(0.0);
    }
    Ok(())
}

/// Runs randomized replications until `days` simulated days have passed.
pub fn exercise(days: u64, seed: u64) -> (u64, Vec<String>) {
    let mut meta = ChaCha8Rng::seed_from_u64(seed);
    let mut simulated = 0u64;
    let mut violations = Vec::new();
    while simulated < days {
        let mut cfg = random_config(&mut meta);
        cfg.horizon_days = meta.gen_range(30..730);
        let mut ledger = Ledger::default();
        let mut first_error = None;
        let mut rng = replication_rng(cfg.seed, 0);
        let outcome = run_with(&cfg, &mut rng, 0, |state, rec| {
            if first_error.is_none() {
                first_error = check_day(&cfg, state, rec, &mut ledger).err();
            }
        });
        simulated += cfg.horizon_days as u64;
        if let Some(e) = first_error {
            violations.push(e);
            continue;
        }
        let Ok(result) = &outcome else { continue };
        let fs = &result.final_state;
        let tol = 1e-7 * (1.0 + ledger.demand.abs() + ledger.delivered);
        if (fs.total_demand - ledger.demand).abs() > tol {
            violations.push("demand ledger".into());
        }
        if (fs.total_shipped - ledger.shipped).abs() > tol {
            violations.push("shipment ledger".into());
        }
        if (fs.on_hand - (cfg.initial_on_hand + ledger.delivered - ledger.shipped)).abs() > tol {
            violations.push("on-hand ledger".into());
        }
        if (fs.inventory_position - (cfg.initial_on_hand + cfg.roq * ledger.orders as f64 - ledger.shipped)).abs() > tol {
            violations.push("position ledger".into());
        }
        if cfg.mode == UnfulfilledDemandMode::Backorder {
            if (fs.total_late_sales - ledger.late).abs() > tol {
                violations.push("late-sales ledger".into());
            }
            if (fs.backorder_total - (ledger.demand - ledger.shipped)).abs() > tol {
                violations.push("backlog ledger".into());
            }
            if result.beta > 1.0 {
                violations.push("backorder beta above 1".into());
            }
        } else {
            if result.beta > 1.0 + 1e-12 {
                violations.push("lost-sales beta above 1".into());
            }
            if cfg.truncate_negative_demand && result.beta < 0.0 {
                violations.push("truncated lost-sales beta below 0".into());
            }
            if fs.backorder_total != 0.0 {
                violations.push("backlog in lost-sales mode".into());
            }
        }
        if run_replication(&cfg) != outcome {
            violations.push("non-deterministic replay".into());
        }
    }
    (simulated, violations)
}

