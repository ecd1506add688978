//! Capacity search, best-effort baselines and parameter sweeps.

pub mod baseline;
pub mod capacity;
pub mod sweep;

pub use baseline::be_baseline;
pub use capacity::{capacity_search, grid_search, zoomed_grid_search, CapacityQuery, CapacityResult, Probe, SearchStatus};
pub use sweep::{run_sweep, write_sweep_csv, SweepResult, SweepRow, SweepSpec};
