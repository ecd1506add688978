//! Per-cell, per-TTI resource allocation.
//!
//! [`schedule_tti`] is a pure function: it takes the retransmissions and new
//! data that are eligible in one cell at one TTI and returns PRB grants. The
//! engine owns all state and applies the grants.

use crate::config::SchedulerKind;
use crate::phy::link::{select_mcs, select_mcs_for_prbs, CRC_BITS};
use crate::phy::McsTable;

/// Scheduling priority of a UE with new data.
///
/// PF ranks by `rate / avg_throughput`; ET ignores the rate and always serves
/// the UE with the lowest average throughput first.
pub fn pf_metric(kind: SchedulerKind, rate_bps: f64, avg_throughput_bps: f64) -> f64 {
    debug_assert!(avg_throughput_bps > 0.0);
    match kind {
        SchedulerKind::Pf => rate_bps / avg_throughput_bps,
        SchedulerKind::Et => 1.0 / avg_throughput_bps,
    }
}

/// Exponentially weighted per-UE served throughput, decayed lazily so idle
/// TTIs cost nothing.
#[derive(Debug, Clone)]
pub struct SchedulerState {
    kind: SchedulerKind,
    tau_ttis: f64,
    floor_bps: f64,
    avg: Vec<(f64, u64)>,
}

impl SchedulerState {
    pub fn new(kind: SchedulerKind, n_ues: usize, tau_ttis: f64, init_bps: f64) -> Self {
        Self {
            kind,
            tau_ttis,
            floor_bps: init_bps,
            avg: vec![(init_bps, 0); n_ues],
        }
    }

    pub fn kind(&self) -> SchedulerKind {
        self.kind
    }

    /// Average throughput of `ue` as seen at the start of `tti`.
    pub fn avg_throughput(&self, ue: usize, tti: u64) -> f64 {
        let (value, at) = self.avg[ue];
        let idle = tti.saturating_sub(at);
        let decayed = value * (1.0 - 1.0 / self.tau_ttis).powf(idle as f64);
        decayed.max(self.floor_bps)
    }

    pub fn metric(&self, ue: usize, rate_bps: f64, tti: u64) -> f64 {
        pf_metric(self.kind, rate_bps, self.avg_throughput(ue, tti))
    }

    /// Folds the bits served to `ue` in `tti` into its average. Call at most
    /// once per UE per TTI; UEs not served simply decay.
    pub fn served(&mut self, ue: usize, tti: u64, bits: u64, tti_s: f64) {
        let beta = 1.0 / self.tau_ttis;
        let (value, at) = self.avg[ue];
        // decay through the previous TTI, then apply this TTI's update
        let steps = tti.saturating_sub(at) as f64;
        let prior = value * (1.0 - beta).powf(steps);
        let updated = (1.0 - beta) * prior + beta * bits as f64 / tti_s;
        self.avg[ue] = (updated.max(self.floor_bps), tti + 1);
    }
}

/// A HARQ process waiting for its next attempt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetxCandidate {
    pub ue: usize,
    pub process: usize,
    pub n_prb: usize,
    pub mcs: usize,
    pub tb_bits: u64,
    pub eligible_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Pending {
    /// Unscheduled payload bits of each eligible queued packet, head first.
    Packets(Vec<u64>),
    FullBuffer,
}

/// A UE with new data in the current TTI.
#[derive(Debug, Clone, PartialEq)]
pub struct NewDataCandidate {
    pub ue: usize,
    pub metric: f64,
    /// Effective SINR of the CQI report driving link adaptation.
    pub cqi_sinr: f64,
    pub pending: Pending,
    /// HARQ processes available for new transport blocks.
    pub free_processes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrantKind {
    Retx { process: usize },
    /// New transport block carrying `payload_bits` of queued packet
    /// `queue_pos`; `completes` when this is the packet's last piece.
    New {
        queue_pos: usize,
        payload_bits: u64,
        completes: bool,
    },
    FullBuffer { payload_bits: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grant {
    pub ue: usize,
    pub kind: GrantKind,
    pub first_prb: usize,
    pub n_prb: usize,
    pub mcs: usize,
    pub tb_bits: u64,
    pub predicted_bler: f64,
}

impl Grant {
    pub fn prbs(&self) -> std::ops::Range<usize> {
        self.first_prb..self.first_prb + self.n_prb
    }
}

/// Link-adaptation parameters shared by every cell.
#[derive(Debug, Clone, Copy)]
pub struct LinkAdaptation<'a> {
    pub table: &'a McsTable,
    pub bler_target: f64,
    pub res_per_prb: usize,
}

/// Allocates one cell's PRBs for one TTI.
///
/// Retransmissions go first, oldest eligibility first, with their original
/// size and MCS; one that no longer fits waits. New data follows in
/// descending metric order (ties to the lower UE index). A packet larger than
/// the remaining PRBs is segmented to fill them. PRBs are handed out
/// contiguously from the lowest free index and never double-booked.
pub fn schedule_tti(
    prb_count: usize,
    retx: &[RetxCandidate],
    new_data: &[NewDataCandidate],
    la: LinkAdaptation<'_>,
) -> Vec<Grant> {
    let mut grants = Vec::new();
    let mut next_free = 0;

    let mut retx: Vec<&RetxCandidate> = retx.iter().collect();
    retx.sort_by(|a, b| {
        a.eligible_time
            .total_cmp(&b.eligible_time)
            .then(a.ue.cmp(&b.ue))
            .then(a.process.cmp(&b.process))
    });
    for r in retx {
        if r.n_prb > prb_count - next_free {
            continue;
        }
        grants.push(Grant {
            ue: r.ue,
            kind: GrantKind::Retx { process: r.process },
            first_prb: next_free,
            n_prb: r.n_prb,
            mcs: r.mcs,
            tb_bits: r.tb_bits,
            predicted_bler: f64::NAN,
        });
        next_free += r.n_prb;
    }

    let mut order: Vec<&NewDataCandidate> = new_data.iter().collect();
    order.sort_by(|a, b| b.metric.total_cmp(&a.metric).then(a.ue.cmp(&b.ue)));
    for cand in order {
        let mut processes = cand.free_processes;
        match &cand.pending {
            Pending::FullBuffer => {
                let budget = prb_count - next_free;
                if processes == 0 || budget == 0 {
                    continue;
                }
                let Some(c) = select_mcs_for_prbs(cand.cqi_sinr, la.bler_target, budget, la.table, la.res_per_prb)
                else {
                    continue;
                };
                grants.push(Grant {
                    ue: cand.ue,
                    kind: GrantKind::FullBuffer {
                        payload_bits: c.tb_bits - CRC_BITS,
                    },
                    first_prb: next_free,
                    n_prb: c.n_prb,
                    mcs: c.mcs,
                    tb_bits: c.tb_bits,
                    predicted_bler: c.predicted_bler,
                });
                next_free += c.n_prb;
            }
            Pending::Packets(bits) => {
                for (pos, &payload) in bits.iter().enumerate() {
                    let budget = prb_count - next_free;
                    if processes == 0 || budget == 0 {
                        break;
                    }
                    let whole = select_mcs(
                        cand.cqi_sinr,
                        la.bler_target,
                        budget,
                        payload + CRC_BITS,
                        la.table,
                        la.res_per_prb,
                    );
                    let (choice, payload_bits, completes) = match whole {
                        Ok(c) => (c, payload, true),
                        Err(_) => {
                            let Some(c) = select_mcs_for_prbs(
                                cand.cqi_sinr,
                                la.bler_target,
                                budget,
                                la.table,
                                la.res_per_prb,
                            ) else {
                                break;
                            };
                            let carried = (c.tb_bits - CRC_BITS).min(payload);
                            (c, carried, carried == payload)
                        }
                    };
                    grants.push(Grant {
                        ue: cand.ue,
                        kind: GrantKind::New {
                            queue_pos: pos,
                            payload_bits,
                            completes,
                        },
                        first_prb: next_free,
                        n_prb: choice.n_prb,
                        mcs: choice.mcs,
                        tb_bits: choice.tb_bits,
                        predicted_bler: choice.predicted_bler,
                    });
                    next_free += choice.n_prb;
                    processes -= 1;
                    if !completes {
                        // the remainder of a segmented packet waits for the next TTI
                        break;
                    }
                }
            }
        }
    }
    debug_assert!(next_free <= prb_count);
    grants
}
