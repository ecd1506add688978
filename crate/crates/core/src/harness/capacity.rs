//! Largest per-UE arrival rate whose outage latency still meets a target.

use serde::Serialize;

use crate::config::{ScenarioConfig, TrafficMode};
use crate::error::{ConfigError, Error, Result};
use crate::kpi::summary::{outage_latency, required_samples, violation_budget};
use crate::mac::{run_simulation, RunOptions, ViolationLimit};

/// Replication offset used to re-run a probe that broke monotonicity.
const RERUN_REPLICATION_OFFSET: u32 = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityQuery {
    pub base: ScenarioConfig,
    /// Latency target, seconds.
    pub phi_s: f64,
    /// Outage probability.
    pub rho: f64,
    /// Search bracket on the per-UE arrival rate, packets/s.
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub rel_tol: f64,
    /// Measured packets per probe.
    pub min_packets: u64,
    pub replication: u32,
}

impl CapacityQuery {
    /// A query over `base` with the bracket and tolerance defaults.
    pub fn new(base: ScenarioConfig, phi_s: f64, rho: f64) -> Self {
        let min_packets = base.target_packets.max(required_samples(rho));
        Self {
            base,
            phi_s,
            rho,
            lambda_lo: 1.0,
            lambda_hi: 5000.0,
            rel_tol: 0.05,
            min_packets,
            replication: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &'static str, message: &str| {
            Err(Error::Config(ConfigError::Validation {
                field,
                message: message.to_string(),
            }))
        };
        if !(self.lambda_lo > 0.0 && self.lambda_lo < self.lambda_hi && self.lambda_hi.is_finite()) {
            return bad("lambda", "bounds must satisfy 0 < lo < hi < inf");
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 0.5) {
            return bad("tolerance", "must lie in (0, 0.5)");
        }
        if !(self.phi_s > 0.0) {
            return bad("phi", "latency target must be positive");
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return bad("rho", "must lie in (0, 1)");
        }
        self.base.validate()?;
        Ok(())
    }

    /// Scenario evaluated at rate `lambda`.
    pub fn scenario_at(&self, lambda: f64) -> ScenarioConfig {
        let mut cfg = self.base.clone();
        cfg.traffic_mode = TrafficMode::UrllcFtp3;
        cfg.arrival_rate_pps = lambda;
        cfg.target_packets = self.min_packets;
        cfg.latency_target_ms = self.phi_s * 1e3;
        cfg.outage_prob = self.rho;
        // leave room for the packet target at this load, with margin
        let fill_s = 2.0 * self.min_packets as f64 / (lambda * cfg.total_ues() as f64);
        let needed = cfg.warmup_ttis as f64 * cfg.tti_duration_s() + fill_s + 1.0;
        cfg.horizon_s = cfg.horizon_s.max(needed);
        cfg
    }

    pub fn offered_load_bps(&self, lambda: f64) -> f64 {
        crate::config::offered_load(
            self.base.num_cells,
            self.base.ues_per_cell,
            self.base.payload_bytes,
            lambda,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Probe {
    pub lambda: f64,
    pub passed: bool,
    /// `inf` when the probe stopped early or lost too many packets.
    pub outage_latency_s: f64,
    pub n_packets: u64,
    pub early_stopped: bool,
    pub replication: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Converged,
    /// The constraint held at the upper bound; the true capacity may be higher.
    UpperBound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityResult {
    pub lambda_star: f64,
    pub omega_star_bps: f64,
    pub status: SearchStatus,
    /// Some pair of probes passed above a failure even after re-running.
    pub noisy: bool,
    pub probes: Vec<Probe>,
}

/// Runs one probe: does the outage latency at `lambda` meet the target?
pub fn evaluate(query: &CapacityQuery, lambda: f64, replication: u32) -> Result<Probe> {
    let cfg = query.scenario_at(lambda);
    let opts = RunOptions {
        replication,
        violation_limit: Some(ViolationLimit {
            latency_s: query.phi_s,
            max_violations: violation_budget(query.min_packets, query.rho),
        }),
        ..RunOptions::default()
    };
    let out = run_simulation(&cfg, &opts)?;
    let n = out.records.len() as u64;
    let latency = if out.early_stopped || n == 0 {
        f64::INFINITY
    } else {
        outage_latency(&out.records, query.rho)?.value
    };
    Ok(Probe {
        lambda,
        passed: !out.early_stopped && n >= query.min_packets && latency <= query.phi_s,
        outage_latency_s: latency,
        n_packets: n,
        early_stopped: out.early_stopped,
        replication,
    })
}

fn precheck(query: &CapacityQuery) -> Result<()> {
    query.validate()?;
    let required = required_samples(query.rho);
    if query.min_packets < required {
        return Err(Error::InsufficientSamples {
            required,
            available: query.min_packets,
        });
    }
    Ok(())
}

/// Bisection on the per-UE arrival rate with common random numbers across
/// probes. Stops once the bracket's relative width drops below the
/// tolerance and reports the offered load at the largest passing rate.
pub fn capacity_search(query: &CapacityQuery) -> Result<CapacityResult> {
    precheck(query)?;
    bisect(query, |lambda| evaluate(query, lambda, query.replication))
}

/// The bisection behind [`capacity_search`] over an arbitrary probe oracle.
pub fn bisect<F>(query: &CapacityQuery, mut probe: F) -> Result<CapacityResult>
where
    F: FnMut(f64) -> Result<Probe>,
{
    if query.phi_s.is_infinite() {
        return Ok(CapacityResult {
            lambda_star: query.lambda_hi,
            omega_star_bps: query.offered_load_bps(query.lambda_hi),
            status: SearchStatus::UpperBound,
            noisy: false,
            probes: Vec::new(),
        });
    }
    let mut probes = Vec::new();
    let lo_probe = probe(query.lambda_lo)?;
    probes.push(lo_probe);
    if !lo_probe.passed {
        return Err(Error::Infeasible(format!(
            "outage latency {:.3e} s exceeds the {:.3e} s target already at {} packets/s per UE",
            lo_probe.outage_latency_s, query.phi_s, query.lambda_lo
        )));
    }
    let hi_probe = probe(query.lambda_hi)?;
    probes.push(hi_probe);
    if hi_probe.passed {
        return Ok(CapacityResult {
            lambda_star: query.lambda_hi,
            omega_star_bps: query.offered_load_bps(query.lambda_hi),
            status: SearchStatus::UpperBound,
            noisy: false,
            probes,
        });
    }
    let (mut lo, mut hi) = (query.lambda_lo, query.lambda_hi);
    while (hi - lo) / lo >= query.rel_tol {
        let mid = 0.5 * (lo + hi);
        let p = probe(mid)?;
        probes.push(p);
        if p.passed {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CapacityResult {
        lambda_star: lo,
        omega_star_bps: query.offered_load_bps(lo),
        status: SearchStatus::Converged,
        noisy: false,
        probes,
    })
}

/// Index pairs `(i, j)` with `lambda_i < lambda_j` where `j` passed and `i` failed.
pub fn monotone_violations(probes: &[Probe]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, a) in probes.iter().enumerate() {
        for (j, b) in probes.iter().enumerate() {
            if a.lambda < b.lambda && !a.passed && b.passed {
                out.push((i, j));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResult {
    /// Largest rate below which every probe passed; `None` if the first failed.
    pub lambda_star: Option<f64>,
    pub omega_star_bps: Option<f64>,
    pub noisy: bool,
    pub probes: Vec<Probe>,
}

/// Exhaustive evaluation of `points` evenly spaced rates in `[lo, hi]`.
/// Probes that break monotonicity are re-run once on a fresh replication;
/// the result is flagged noisy if a violation survives.
pub fn grid_search(query: &CapacityQuery, lo: f64, hi: f64, points: usize) -> Result<GridResult> {
    precheck(query)?;
    grid_with(query, lo, hi, points, &mut |l, rep| evaluate(query, l, rep))
}

fn grid_with<F>(query: &CapacityQuery, lo: f64, hi: f64, points: usize, probe: &mut F) -> Result<GridResult>
where
    F: FnMut(f64, u32) -> Result<Probe>,
{
    let points = points.max(2);
    let mut probes: Vec<Probe> = (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .map(|l| probe(l, query.replication))
        .collect::<Result<_>>()?;
    let mut noisy = false;
    let violations = monotone_violations(&probes);
    if !violations.is_empty() {
        let mut suspects: Vec<usize> = violations.iter().flat_map(|&(i, j)| [i, j]).collect();
        suspects.sort_unstable();
        suspects.dedup();
        for i in suspects {
            probes[i] = probe(probes[i].lambda, query.replication + RERUN_REPLICATION_OFFSET)?;
        }
        noisy = !monotone_violations(&probes).is_empty();
    }
    let lambda_star = probes
        .iter()
        .take_while(|p| p.passed)
        .last()
        .map(|p| p.lambda);
    Ok(GridResult {
        lambda_star,
        omega_star_bps: lambda_star.map(|l| query.offered_load_bps(l)),
        noisy,
        probes,
    })
}

/// Repeated exhaustive search: a `points`-point grid over the bracket, then
/// grids of the same size between the last pass and the first failure until
/// that interval is within the query's relative tolerance.
pub fn zoomed_grid_search(query: &CapacityQuery, points: usize) -> Result<GridResult> {
    precheck(query)?;
    zoom_with(query, points, |l, rep| evaluate(query, l, rep))
}

fn zoom_with<F>(query: &CapacityQuery, points: usize, mut probe: F) -> Result<GridResult>
where
    F: FnMut(f64, u32) -> Result<Probe>,
{
    let mut all = Vec::new();
    let mut noisy = false;
    let (mut lo, mut hi) = (query.lambda_lo, query.lambda_hi);
    loop {
        let mut stage = grid_with(query, lo, hi, points, &mut probe)?;
        noisy |= stage.noisy;
        all.append(&mut stage.probes);
        let fail = stage
            .lambda_star
            .and_then(|pass| all.iter().filter(|p| p.lambda > pass && !p.passed).map(|p| p.lambda).reduce(f64::min));
        match (stage.lambda_star, fail) {
            (Some(pass), Some(fail)) if (fail - pass) / pass > query.rel_tol => (lo, hi) = (pass, fail),
            _ => {
                stage.noisy = noisy;
                stage.probes = all;
                return Ok(stage);
            }
        }
    }
}
