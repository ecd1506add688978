//! Periodic wideband channel-quality reports.

use std::collections::VecDeque;

use super::link::effective_sinr;
use super::mcs::McsTable;
use crate::channel::RadioEnv;
use crate::config::lin_to_db;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CqiReport {
    pub ue: usize,
    /// Wideband effective SINR (linear).
    pub sinr: f64,
    pub sinr_db: f64,
    /// The SINR quantised to the table.
    pub mcs_index: usize,
    pub generated_tti: u64,
    pub delivered_tti: u64,
}

/// Generation TTI of the newest report visible at `now_tti`.
///
/// Reports are generated every `period` TTIs and become readable `delay` TTIs
/// later. Before the first delivery the scheduler works from the TTI-0 report.
pub fn visible_generation(now_tti: u64, period: u32, delay: u32) -> u64 {
    let (period, delay) = (period as u64, delay as u64);
    if now_tti < delay {
        0
    } else {
        (now_tti - delay) / period * period
    }
}

/// Interference a UE measured during its recent transmissions.
#[derive(Debug, Clone, Default)]
pub struct InterferenceHistory {
    samples: VecDeque<(u64, f64)>,
}

impl InterferenceHistory {
    pub fn record(&mut self, tti: u64, interference_mw: f64, keep_ttis: u64) {
        self.samples.push_back((tti, interference_mw));
        while self.samples.len() >= 2 && self.samples[1].0 + keep_ttis <= tti {
            self.samples.pop_front();
        }
    }

    /// Interference of the most recent transmission at or before `tti`;
    /// zero (noise-only) when the UE has not been scheduled yet.
    pub fn latest_at_or_before(&self, tti: u64) -> f64 {
        self.samples
            .iter()
            .rev()
            .find(|(t, _)| *t <= tti)
            .map_or(0.0, |&(_, i)| i)
    }
}

/// Exponentially weighted fraction of TTIs in which one cell transmitted.
///
/// Idle gaps decay lazily, so the engine only reports active TTIs.
#[derive(Debug, Clone)]
pub struct ActivityAverage {
    beta: f64,
    /// `(tti, value just after that TTI)`, newest last.
    points: VecDeque<(u64, f64)>,
}

impl ActivityAverage {
    pub fn new(window_tti: f64) -> Self {
        Self {
            beta: 1.0 - 1.0 / window_tti,
            points: VecDeque::new(),
        }
    }

    /// Marks `tti` active. TTIs must be non-decreasing; history older than
    /// `keep_ttis` is discarded.
    pub fn record_active(&mut self, tti: u64, keep_ttis: u64) {
        let prev = self.at(tti.saturating_sub(1)).filter(|_| tti > 0).unwrap_or(0.0);
        let v = self.beta * prev + (1.0 - self.beta);
        self.points.push_back((tti, v));
        while self.points.len() >= 2 && self.points[1].0 + keep_ttis <= tti {
            self.points.pop_front();
        }
    }

    fn at(&self, tti: u64) -> Option<f64> {
        let &(t, v) = self.points.iter().rev().find(|(t, _)| *t <= tti)?;
        Some(v * self.beta.powi((tti - t).min(i32::MAX as u64) as i32))
    }

    /// Average as known at the end of `tti`.
    pub fn value_at(&self, tti: u64) -> f64 {
        self.at(tti).unwrap_or(0.0)
    }
}

/// Interference assumed when a report is generated.
#[derive(Debug, Clone, PartialEq)]
pub enum Interference {
    /// Every other cell transmitting at the reference power on every PRB.
    FullLoad,
    /// Full-load interference from each cell scaled by its activity factor.
    Weighted(Vec<f64>),
    /// A measured per-PRB interference power, mW.
    Measured(f64),
}

/// Wideband effective SINR `ue` reports at `tti`: serving power spread over
/// the full band and fading at report time.
#[allow(clippy::too_many_arguments)]
pub fn measure(
    env: &RadioEnv,
    ue: usize,
    tti: u64,
    tti_s: f64,
    prb_count: usize,
    interference: Interference,
    table: &McsTable,
    delay: u32,
) -> CqiReport {
    let t = tti as f64 * tti_s;
    let serving = env.topology.serving_cell(ue);
    let ref_power = env.tx_power_mw / prb_count as f64;
    let block_sinr = |first: usize| {
        let full = |c: usize| ref_power * env.topology.gain(c, ue) * env.links.fading(c, ue, first, t);
        let others = (0..env.topology.num_cells()).filter(|&c| c != serving);
        let i: f64 = match &interference {
            Interference::Measured(i) => *i,
            Interference::FullLoad => others.map(full).sum(),
            Interference::Weighted(w) => others.map(|c| w[c] * full(c)).sum(),
        };
        env.signal_mw(ue, serving, first, t, ref_power) / (env.noise_mw + i)
    };
    let blocks = env.links.block_layout(prb_count);
    let sinr = if blocks.len() == 1 {
        block_sinr(0)
    } else {
        let per_prb: Vec<f64> = blocks
            .iter()
            .flat_map(|&(first, count)| std::iter::repeat_n(block_sinr(first), count))
            .collect();
        effective_sinr(&per_prb)
    };
    CqiReport {
        ue,
        sinr,
        sinr_db: lin_to_db(sinr),
        mcs_index: table.cqi_index(sinr),
        generated_tti: tti,
        delivered_tti: tti + delay as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_visibility() {
        assert_eq!(visible_generation(0, 5, 2), 0);
        assert_eq!(visible_generation(6, 5, 2), 0);
        assert_eq!(visible_generation(7, 5, 2), 5);
        assert_eq!(visible_generation(11, 5, 2), 5);
        assert_eq!(visible_generation(12, 5, 2), 10);
        // ideal reporting: the current TTI's report
        assert_eq!(visible_generation(9, 1, 0), 9);
    }

    #[test]
    fn history_returns_latest_not_after() {
        let mut h = InterferenceHistory::default();
        assert_eq!(h.latest_at_or_before(10), 0.0);
        h.record(3, 1.0, 8);
        h.record(6, 2.0, 8);
        h.record(20, 3.0, 8);
        assert_eq!(h.latest_at_or_before(19), 2.0);
        assert_eq!(h.latest_at_or_before(20), 3.0);
    }

    #[test]
    fn activity_average_decays_over_gaps() {
        let mut a = ActivityAverage::new(10.0);
        assert_eq!(a.value_at(5), 0.0);
        a.record_active(0, 100);
        assert!((a.value_at(0) - 0.1).abs() < 1e-12);
        a.record_active(1, 100);
        assert!((a.value_at(1) - 0.19).abs() < 1e-12);
        // two idle TTIs between 1 and 4
        a.record_active(4, 100);
        let expect = 0.19 * 0.9f64.powi(3) + 0.1;
        assert!((a.value_at(4) - expect).abs() < 1e-12);
        assert!((a.value_at(2) - 0.19 * 0.9).abs() < 1e-12);
        let mut busy = ActivityAverage::new(10.0);
        for t in 0..500 {
            busy.record_active(t, 20);
        }
        assert!((busy.value_at(499) - 1.0).abs() < 1e-9);
    }
}
