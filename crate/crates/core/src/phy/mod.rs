//! Physical-layer abstraction: MCS table, link model and CQI reporting.

pub mod cqi;
pub mod link;
pub mod mcs;

pub use link::{bler, decode, effective_sinr, select_mcs, select_mcs_for_prbs, McsChoice, SinrMapping, CRC_BITS};
pub use mcs::{McsEntry, McsTable};
