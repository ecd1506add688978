//! KPIs computed from packet ledgers.

pub mod ecdf;
pub mod summary;

pub use ecdf::EcdfAccumulator;
pub use summary::{
    latency_ecdf, mean_throughput, outage_latency, prb_ecdf, required_samples, throughput_cost, KpiSummary,
    OutageLatency,
};
