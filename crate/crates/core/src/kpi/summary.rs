//! Ledger-level KPIs: outage latency, throughput, the throughput cost of a
//! URLLC target, and the JSON summary.

use std::collections::BTreeMap;

use serde::Serialize;

use super::ecdf::{nearest_rank, EcdfAccumulator};
use crate::error::KpiError;
use crate::mac::{Outcome, PacketRecord, SimOutput};

/// Samples needed before a `(1 - rho)` quantile is trusted: `100 / rho`.
pub fn required_samples(rho: f64) -> u64 {
    (100.0 / rho - 1e-9).ceil() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutageLatency {
    /// Nearest-rank `(1 - rho)` latency quantile, seconds; `inf` when that
    /// many packets were lost.
    pub value: f64,
    pub reliable: bool,
    pub samples: u64,
    pub required: u64,
}

/// Latency that all but a `rho` fraction of packets meet. Lost packets count
/// as infinitely late.
pub fn outage_latency(records: &[PacketRecord], rho: f64) -> Result<OutageLatency, KpiError> {
    if records.is_empty() {
        return Err(KpiError::EmptyLedger);
    }
    let mut lat: Vec<f64> = records.iter().map(PacketRecord::latency).collect();
    let rank = nearest_rank(1.0 - rho, lat.len());
    let (_, value, _) = lat.select_nth_unstable_by(rank - 1, f64::total_cmp);
    let required = required_samples(rho);
    Ok(OutageLatency {
        value: *value,
        reliable: records.len() as u64 >= required,
        samples: records.len() as u64,
        required,
    })
}

/// Packets allowed to miss the latency target among `n` at outage `rho`.
pub fn violation_budget(n: u64, rho: f64) -> u64 {
    n - nearest_rank(1.0 - rho, n as usize) as u64
}

/// Relative throughput given up to meet a URLLC target, in percent.
pub fn throughput_cost(mu_urllc_bps: f64, mu_be_bps: f64) -> Result<f64, KpiError> {
    if !(mu_be_bps > 0.0) {
        return Err(KpiError::Undefined("best-effort throughput must be positive"));
    }
    Ok((1.0 - mu_urllc_bps / mu_be_bps) * 100.0)
}

/// Total PRBs (all segments and retransmissions) of every decoded packet.
pub fn prb_ecdf(records: &[PacketRecord]) -> EcdfAccumulator {
    records
        .iter()
        .filter(|r| r.is_decoded())
        .map(|r| r.total_prbs as f64)
        .collect()
}

pub fn latency_ecdf(records: &[PacketRecord]) -> EcdfAccumulator {
    records.iter().map(PacketRecord::latency).collect()
}

/// Decoded payload bits over a window, independent of record order.
pub fn mean_throughput(records: &[PacketRecord], window_s: f64) -> f64 {
    if window_s <= 0.0 {
        return 0.0;
    }
    let bits: f64 = records
        .iter()
        .filter(|r| r.is_decoded())
        .map(|r| r.size_bytes as f64 * 8.0)
        .sum();
    bits / window_s
}

/// Map key for an outage probability, e.g. `1e-2`.
pub fn rho_key(rho: f64) -> String {
    format!("{rho:e}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KpiSummary {
    pub mu_bps: f64,
    /// `null` when the quantile is unreliable (too few samples) or infinite.
    pub outage_latency_s: BTreeMap<String, Option<f64>>,
    pub drop_rate: f64,
    pub realized_bler: Option<f64>,
    pub n_packets: u64,
    pub n_decoded: u64,
    pub n_dropped: u64,
    pub n_in_flight: u64,
    /// Outage probabilities whose quantile lacks the required sample count.
    pub insufficient_samples: Vec<String>,
    pub scenario_hash: String,
    pub seed: u64,
}

impl KpiSummary {
    pub fn from_output(out: &SimOutput, rhos: &[f64]) -> Self {
        let recs = &out.records;
        let count = |o: Outcome| recs.iter().filter(|r| r.outcome == o).count() as u64;
        let mut outage = BTreeMap::new();
        let mut insufficient = Vec::new();
        for &rho in rhos {
            let key = rho_key(rho);
            let value = match outage_latency(recs, rho) {
                Ok(o) => {
                    if !o.reliable {
                        insufficient.push(key.clone());
                    }
                    (o.reliable && o.value.is_finite()).then_some(o.value)
                }
                Err(_) => {
                    insufficient.push(key.clone());
                    None
                }
            };
            outage.insert(key, value);
        }
        let n = recs.len() as u64;
        let dropped = count(Outcome::Dropped);
        Self {
            mu_bps: out.mean_throughput_bps(),
            outage_latency_s: outage,
            drop_rate: if n > 0 { dropped as f64 / n as f64 } else { 0.0 },
            realized_bler: out.realized_bler(),
            n_packets: n,
            n_decoded: count(Outcome::Decoded),
            n_dropped: dropped,
            n_in_flight: count(Outcome::InFlight),
            insufficient_samples: insufficient,
            scenario_hash: out.scenario_hash.clone(),
            seed: out.seed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}
