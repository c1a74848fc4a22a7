//! Per-replication random streams.
//!
//! Each replication gets its own ChaCha stream keyed by the master seed
//! and selected by the replication index, so results depend only on
//! `(master_seed, index)` and never on scheduling order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::analytic::{DemandSpec, LeadTimeDistribution};

pub type SimRng = ChaCha8Rng;

pub fn replication_rng(master_seed: u64, replication: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replication);
    rng
}

/// One normal demand draw. Negative values pass through unless `truncate`.
pub fn draw_demand<R: Rng + ?Sized>(rng: &mut R, demand: &DemandSpec, truncate: bool) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    let d = demand.mean_per_period + demand.std_per_period * z;
    if truncate {
        d.max(0.0)
    } else {
        d
    }
}

/// Floor of a continuous uniform draw on `[min_days, max_days)`.
pub fn draw_lead_time<R: Rng + ?Sized>(rng: &mut R, lead_time: &LeadTimeDistribution) -> u32 {
    let u: f64 = rng.gen();
    let span = lead_time.max_days() - lead_time.min_days();
    (lead_time.min_days() + span * u).floor() as u32
}
