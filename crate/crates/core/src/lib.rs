//! System-level simulator for 5G NR downlink URLLC and best-effort traffic in
//! an indoor factory, with the capacity search that finds the largest offered
//! load meeting a latency/outage target.

pub mod channel;
pub mod cli;
pub mod config;
pub mod deployment;
pub mod error;
pub mod harness;
pub mod kpi;
pub mod mac;
pub mod phy;
pub mod seed;

pub use config::{load_scenario, offered_load, symbol_duration, ScenarioConfig, SchedulerKind, TrafficMode};
pub use error::{ConfigError, Error, KpiError, PhyError, Result};
