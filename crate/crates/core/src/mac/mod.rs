//! MAC layer: traffic, scheduling, HARQ and the simulation engine.

pub mod engine;
pub mod harq;
pub mod ledger;
pub mod scheduler;
pub mod traffic;

pub use engine::{run_simulation, PacketCounts, RunOptions, SimOutput, ViolationLimit};
pub use ledger::{DelayBreakdown, Outcome, PacketRecord};
