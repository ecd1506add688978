//! Cartesian sweeps of capacity queries, run in parallel.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::baseline::be_baseline;
use super::capacity::{capacity_search, CapacityQuery, SearchStatus};
use crate::config::{ScenarioConfig, SchedulerKind};
use crate::error::{Error, Result};
use crate::kpi::throughput_cost;

/// Environment variable holding the number of sweep worker threads.
pub const WORKERS_ENV: &str = "URLLC_SIM_WORKERS";

pub const SWEEP_HEADER: &str = "phi_ms,rho,payload_B,scheduler,omega_star_mbps,psi_pct,status";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: ScenarioConfig,
    pub phis_ms: Vec<f64>,
    pub rhos: Vec<f64>,
    pub payloads: Vec<u32>,
    pub schedulers: Vec<SchedulerKind>,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub rel_tol: f64,
    /// Measured packets per probe; 0 picks the minimum each outage level needs.
    pub min_packets: u64,
}

impl SweepSpec {
    pub fn cells(&self) -> Vec<(f64, f64, u32, SchedulerKind)> {
        let mut out = Vec::new();
        for &phi in &self.phis_ms {
            for &rho in &self.rhos {
                for &b in &self.payloads {
                    for &s in &self.schedulers {
                        out.push((phi, rho, b, s));
                    }
                }
            }
        }
        out
    }

    fn query(&self, phi_ms: f64, rho: f64, payload: u32, scheduler: SchedulerKind) -> CapacityQuery {
        let mut base = self.base.clone();
        base.payload_bytes = payload;
        base.scheduler = scheduler;
        let mut q = CapacityQuery::new(base, phi_ms * 1e-3, rho);
        q.lambda_lo = self.lambda_lo;
        q.lambda_hi = self.lambda_hi;
        q.rel_tol = self.rel_tol;
        if self.min_packets > 0 {
            q.min_packets = self.min_packets;
        }
        q
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Ok,
    UpperBound,
    Noisy,
    Infeasible,
    InsufficientSamples,
}

impl CellStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Ok => "ok",
            Self::UpperBound => "upper_bound",
            Self::Noisy => "noisy",
            Self::Infeasible => "infeasible",
            Self::InsufficientSamples => "insufficient_samples",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub phi_ms: f64,
    pub rho: f64,
    pub payload_bytes: u32,
    pub scheduler: SchedulerKind,
    pub omega_star_bps: Option<f64>,
    pub psi_pct: Option<f64>,
    pub status: CellStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Best-effort throughput per scheduler used for the cost column.
    pub baselines: Vec<(SchedulerKind, f64)>,
    pub scenario_hash: String,
    pub seed: u64,
    pub runtime_s: f64,
}

/// Worker count from [`WORKERS_ENV`], else rayon's default.
pub fn worker_count() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

fn pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = worker_count() {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::Infeasible(format!("thread pool: {e}")))
}

fn run_cell(spec: &SweepSpec, cell: (f64, f64, u32, SchedulerKind)) -> Result<(Option<f64>, CellStatus)> {
    let (phi, rho, b, s) = cell;
    match capacity_search(&spec.query(phi, rho, b, s)) {
        Ok(r) => {
            let status = match (r.noisy, r.status) {
                (true, _) => CellStatus::Noisy,
                (false, SearchStatus::UpperBound) => CellStatus::UpperBound,
                (false, SearchStatus::Converged) => CellStatus::Ok,
            };
            Ok((Some(r.omega_star_bps), status))
        }
        Err(Error::Infeasible(_)) => Ok((None, CellStatus::Infeasible)),
        Err(Error::InsufficientSamples { .. }) => Ok((None, CellStatus::InsufficientSamples)),
        Err(e) => Err(e),
    }
}

/// Runs every grid cell (and one best-effort baseline per scheduler) in
/// parallel. Rows come back in grid order whatever the execution order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let start = std::time::Instant::now();
    spec.base.validate()?;
    let cells = spec.cells();
    let pool = pool()?;
    let (baselines, outcomes) = pool.install(|| {
        let baselines: Result<Vec<(SchedulerKind, f64)>> = spec
            .schedulers
            .par_iter()
            .map(|&s| be_baseline(&spec.base, s, 0).map(|mu| (s, mu)))
            .collect();
        let outcomes: Result<Vec<_>> = cells.par_iter().map(|&c| run_cell(spec, c)).collect();
        (baselines, outcomes)
    });
    let baselines = baselines?;
    let rows = cells
        .iter()
        .zip(outcomes?)
        .map(|(&(phi, rho, b, s), (omega, status))| {
            let mu_be = baselines.iter().find(|(k, _)| *k == s).map(|(_, mu)| *mu);
            let psi = omega.zip(mu_be).and_then(|(o, be)| throughput_cost(o, be).ok());
            SweepRow {
                phi_ms: phi,
                rho,
                payload_bytes: b,
                scheduler: s,
                omega_star_bps: omega,
                psi_pct: psi,
                status,
            }
        })
        .collect();
    Ok(SweepResult {
        rows,
        baselines,
        scenario_hash: spec.base.hash(),
        seed: spec.base.seed,
        runtime_s: start.elapsed().as_secs_f64(),
    })
}

pub fn write_sweep_csv<W: Write>(result: &SweepResult, mut w: W) -> std::io::Result<()> {
    writeln!(w, "# scenario_hash={} seed={}", result.scenario_hash, result.seed)?;
    writeln!(w, "{SWEEP_HEADER}")?;
    let opt = |v: Option<f64>| v.map_or_else(String::new, |x| format!("{x}"));
    for r in &result.rows {
        writeln!(
            w,
            "{},{:e},{},{},{},{},{}",
            r.phi_ms,
            r.rho,
            r.payload_bytes,
            r.scheduler,
            opt(r.omega_star_bps.map(|o| o / 1e6)),
            opt(r.psi_pct),
            r.status.as_str()
        )?;
    }
    Ok(())
}
