//! Best-effort (full-buffer) reference throughput.

use crate::config::{ScenarioConfig, SchedulerKind, TrafficMode};
use crate::error::Result;
use crate::mac::{run_simulation, RunOptions};

/// Mean decoded network throughput with every buffer permanently full.
pub fn be_baseline(cfg: &ScenarioConfig, scheduler: SchedulerKind, replication: u32) -> Result<f64> {
    let mut cfg = cfg.clone();
    cfg.traffic_mode = TrafficMode::BestEffort;
    cfg.scheduler = scheduler;
    let out = run_simulation(
        &cfg,
        &RunOptions {
            replication,
            ..RunOptions::default()
        },
    )?;
    Ok(out.mean_throughput_bps())
}
