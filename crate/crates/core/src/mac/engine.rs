//! The TTI-stepped discrete-event engine.
//!
//! Time is continuous (seconds) but transmissions start on TTI boundaries:
//! TTI `k` occupies `[kT, (k+1)T)`. A packet arriving at `t` becomes
//! schedulable in the first TTI starting at or after `t + prep`. A transport
//! block sent in TTI `k` is decoded at `(k+1)T + decode`; after a NACK it may
//! be resent from the first TTI starting at or after
//! `(k+1)T + decode + feedback + prep`. TTIs without any pending work are
//! skipped.

use std::collections::VecDeque;

use serde::Serialize;

use super::harq::{HarqEntity, HarqProcess};
use super::ledger::{DelayBreakdown, Outcome, PacketRecord, UtilizationRow};
use super::scheduler::{
    schedule_tti, Grant, GrantKind, LinkAdaptation, NewDataCandidate, Pending, RetxCandidate, SchedulerState,
};
use super::traffic::{sources, PoissonSource};
use crate::channel::{RadioEnv, TtiActivity};
use crate::config::{CqiInterference, ScenarioConfig, TrafficMode};
use crate::deployment::drop_topology;
use crate::error::Result;
use crate::phy::cqi::{self, ActivityAverage, CqiReport, InterferenceHistory};
use crate::phy::link::{decode, effective_sinr};
use crate::phy::McsTable;
use crate::seed::{SeedPolicy, StreamRng};

/// Tolerance when aligning continuous times to TTI boundaries.
const ALIGN_EPS: f64 = 1e-9;

/// Stop as soon as more than `max_violations` measured packets have missed
/// `latency_s` (drops included). Lets a capacity probe fail fast.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViolationLimit {
    pub latency_s: f64,
    pub max_violations: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    /// Selects an independent set of random streams for the same master seed.
    pub replication: u32,
    pub record_utilization: bool,
    pub violation_limit: Option<ViolationLimit>,
    /// Test hook: the first `forced_nacks` attempts of every transport block fail.
    pub forced_nacks: u32,
}

/// Fate of every packet the run generated, warm-up included.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PacketCounts {
    pub generated: u64,
    pub decoded: u64,
    pub dropped: u64,
    pub in_flight: u64,
}

#[derive(Debug, Clone)]
pub struct SimOutput {
    /// Measured packets (arrived after warm-up), in arrival-admission order.
    pub records: Vec<PacketRecord>,
    pub counts: PacketCounts,
    /// First transmissions and their failures after warm-up.
    pub first_tx: u64,
    pub first_tx_failures: u64,
    /// Payload bits decoded in the measurement window, network-wide, per
    /// cell and per UE.
    pub decoded_bits: f64,
    pub cell_decoded_bits: Vec<f64>,
    pub ue_decoded_bits: Vec<f64>,
    pub window_s: f64,
    pub utilization: Vec<UtilizationRow>,
    /// Cell-TTIs that granted nothing although a grantable backlog existed.
    pub idle_with_backlog: u64,
    pub ttis_simulated: u64,
    pub end_time_s: f64,
    pub early_stopped: bool,
    pub num_cells: usize,
    pub scenario_hash: String,
    pub seed: u64,
    pub replication: u32,
}

impl SimOutput {
    pub fn mean_throughput_bps(&self) -> f64 {
        if self.window_s > 0.0 {
            self.decoded_bits / self.window_s
        } else {
            0.0
        }
    }

    /// Fraction of first transmissions that failed to decode.
    pub fn realized_bler(&self) -> Option<f64> {
        (self.first_tx > 0).then(|| self.first_tx_failures as f64 / self.first_tx as f64)
    }
}

#[derive(Debug, Clone)]
struct Packet {
    ue: usize,
    bytes: u32,
    t_arrival: f64,
    unscheduled_bits: u64,
    outstanding: u32,
    segments: u32,
    measured: bool,
    first_grant: Option<f64>,
    n_tx: u32,
    prbs: u64,
    done_at: f64,
    harq_extra: f64,
    outcome: Option<Outcome>,
}

struct UeState {
    cell: usize,
    queue: VecDeque<usize>,
    harq: HarqEntity,
    history: InterferenceHistory,
    cqi: Option<CqiReport>,
    decode_rng: StreamRng,
}

struct Engine<'a> {
    cfg: &'a ScenarioConfig,
    opts: &'a RunOptions,
    env: RadioEnv,
    table: McsTable,
    tti_s: f64,
    prep_s: f64,
    decode_s: f64,
    feedback_s: f64,
    warmup_s: f64,
    res_per_prb: usize,
    full_buffer: bool,
    ues: Vec<UeState>,
    sources: Vec<PoissonSource>,
    packets: Vec<Packet>,
    measured_ids: Vec<usize>,
    measured_resolved: u64,
    violations: u64,
    sched: SchedulerState,
    activity: TtiActivity,
    cell_load: Vec<ActivityAverage>,
    counts: PacketCounts,
    first_tx: u64,
    first_tx_failures: u64,
    decoded_bits: f64,
    cell_decoded_bits: Vec<f64>,
    ue_decoded_bits: Vec<f64>,
    utilization: Vec<UtilizationRow>,
    idle_with_backlog: u64,
    early_stopped: bool,
    end_tti: u64,
}

/// Runs one simulation of `cfg` to completion.
///
/// URLLC runs collect `target_packets` measured arrivals (0 = no target),
/// keep the offered load running until each is decoded or dropped, and stop
/// at the horizon at the latest. Best-effort runs last until the horizon.
pub fn run_simulation(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<SimOutput> {
    cfg.validate()?;
    let table = McsTable::from_config_value(&cfg.mcs_table)?;
    let seeds = SeedPolicy::new(cfg.seed, opts.replication);
    let topology = drop_topology(cfg, &seeds);
    let env = RadioEnv::new(cfg, topology, &seeds);
    let mut engine = Engine::new(cfg, opts, env, table, &seeds);
    engine.run();
    Ok(engine.finish())
}

impl<'a> Engine<'a> {
    fn new(cfg: &'a ScenarioConfig, opts: &'a RunOptions, env: RadioEnv, table: McsTable, seeds: &SeedPolicy) -> Self {
        let n_ues = env.topology.num_ues();
        let n_cells = env.topology.num_cells();
        let ues = (0..n_ues)
            .map(|ue| UeState {
                cell: env.topology.serving_cell(ue),
                queue: VecDeque::new(),
                harq: HarqEntity::new(cfg.harq_processes),
                history: InterferenceHistory::default(),
                cqi: None,
                decode_rng: seeds.rng(&format!("decode/{ue}")),
            })
            .collect();
        let tti_s = cfg.tti_duration_s();
        Self {
            cfg,
            opts,
            table,
            tti_s,
            prep_s: cfg.prep_delay_s(),
            decode_s: cfg.decode_delay_s(),
            feedback_s: cfg.harq_feedback_delay_s(),
            warmup_s: cfg.warmup_ttis as f64 * tti_s,
            res_per_prb: cfg.data_res_per_prb(),
            full_buffer: cfg.traffic_mode == TrafficMode::BestEffort,
            ues,
            sources: sources(cfg, seeds),
            packets: Vec::new(),
            measured_ids: Vec::new(),
            measured_resolved: 0,
            violations: 0,
            sched: SchedulerState::new(cfg.scheduler, n_ues, cfg.pf_ewma_ttis, cfg.pf_init_bps),
            activity: TtiActivity::new(n_cells, cfg.prb_count),
            cell_load: (0..n_cells).map(|_| ActivityAverage::new(cfg.cqi_load_window_tti)).collect(),
            counts: PacketCounts::default(),
            first_tx: 0,
            first_tx_failures: 0,
            decoded_bits: 0.0,
            cell_decoded_bits: vec![0.0; n_cells],
            ue_decoded_bits: vec![0.0; n_ues],
            utilization: Vec::new(),
            idle_with_backlog: 0,
            early_stopped: false,
            end_tti: 0,
            env,
        }
    }

    /// First TTI starting at or after `t`.
    fn tti_at_or_after(&self, t: f64) -> u64 {
        (t / self.tti_s - ALIGN_EPS).ceil().max(0.0) as u64
    }

    fn horizon_tti(&self) -> u64 {
        self.tti_at_or_after(self.cfg.horizon_s)
    }

    fn target_met(&self) -> bool {
        let target = self.cfg.target_packets;
        !self.full_buffer
            && target > 0
            && self.measured_ids.len() as u64 >= target
            && self.measured_resolved >= target
    }

    fn run(&mut self) {
        let horizon = self.horizon_tti();
        let mut tti = 0;
        while tti < horizon && !self.target_met() && !self.early_stopped {
            self.admit_arrivals(tti);
            self.step(tti);
            match self.next_tti(tti) {
                Some(next) => tti = next,
                None => break,
            }
        }
        self.end_tti = tti.min(horizon);
    }

    fn admit_arrivals(&mut self, tti: u64) {
        for ue in 0..self.sources.len() {
            loop {
                let t = self.sources[ue].peek();
                if !t.is_finite() || self.tti_at_or_after(t + self.prep_s) > tti {
                    break;
                }
                let a = self.sources[ue].pop();
                let target = self.cfg.target_packets;
                let measured = a.time >= self.warmup_s
                    && (target == 0 || (self.measured_ids.len() as u64) < target);
                let id = self.packets.len();
                self.packets.push(Packet {
                    ue,
                    bytes: a.bytes,
                    t_arrival: a.time,
                    unscheduled_bits: a.bytes as u64 * 8,
                    outstanding: 0,
                    segments: 0,
                    measured,
                    first_grant: None,
                    n_tx: 0,
                    prbs: 0,
                    done_at: f64::NEG_INFINITY,
                    harq_extra: 0.0,
                    outcome: None,
                });
                if measured {
                    self.measured_ids.push(id);
                }
                self.counts.generated += 1;
                self.ues[ue].queue.push_back(id);
            }
        }
    }

    fn next_tti(&self, tti: u64) -> Option<u64> {
        if self.full_buffer || self.ues.iter().any(|u| !u.queue.is_empty()) {
            return Some(tti + 1);
        }
        let arrivals = self
            .sources
            .iter()
            .map(|s| s.peek())
            .filter(|t| t.is_finite())
            .map(|t| self.tti_at_or_after(t + self.prep_s));
        let retx = self.ues.iter().filter_map(|u| u.harq.next_retx_tti());
        arrivals.chain(retx).min().map(|next| next.max(tti + 1))
    }

    fn cqi_report(&mut self, ue: usize, tti: u64) -> CqiReport {
        let gen = cqi::visible_generation(tti, self.cfg.cqi_period_tti, self.cfg.cqi_delay_tti);
        if let Some(r) = self.ues[ue].cqi {
            if r.generated_tti == gen {
                return r;
            }
        }
        let interference = match self.cfg.cqi_interference {
            CqiInterference::FullLoad => cqi::Interference::FullLoad,
            CqiInterference::LastScheduled => {
                cqi::Interference::Measured(self.ues[ue].history.latest_at_or_before(gen))
            }
            CqiInterference::LoadAveraged => {
                cqi::Interference::Weighted(self.cell_load.iter().map(|a| a.value_at(gen)).collect())
            }
        };
        let r = cqi::measure(
            &self.env,
            ue,
            gen,
            self.tti_s,
            self.cfg.prb_count,
            interference,
            &self.table,
            self.cfg.cqi_delay_tti,
        );
        self.ues[ue].cqi = Some(r);
        r
    }

    fn step(&mut self, tti: u64) {
        let n_cells = self.env.topology.num_cells();
        let mut cell_grants: Vec<Vec<Grant>> = Vec::with_capacity(n_cells);
        for cell in 0..n_cells {
            let grants = self.schedule_cell(cell, tti);
            cell_grants.push(grants);
        }

        self.activity.clear();
        let mut used = vec![0usize; n_cells];
        for (cell, grants) in cell_grants.iter().enumerate() {
            let n: usize = grants.iter().map(|g| g.n_prb).sum();
            used[cell] = n;
            if n == 0 {
                continue;
            }
            let per_prb = self.env.tx_power_mw / n as f64;
            for g in grants {
                for prb in g.prbs() {
                    self.activity.set(cell, prb, per_prb);
                }
            }
        }
        if self.opts.record_utilization && used.iter().any(|&n| n > 0) {
            self.utilization.push(UtilizationRow {
                tti,
                prbs_per_cell: used.clone(),
            });
        }

        let t = tti as f64 * self.tti_s;
        let keep = (self.cfg.cqi_period_tti + self.cfg.cqi_delay_tti) as u64 + 1;
        for (load, &n) in self.cell_load.iter_mut().zip(&used) {
            if n > 0 {
                load.record_active(tti, keep);
            }
        }
        let mut served: Vec<(usize, u64)> = Vec::new();
        for (cell, grants) in cell_grants.into_iter().enumerate() {
            let mut i = 0;
            while i < grants.len() {
                let ue = grants[i].ue;
                let mut j = i;
                let mut interference = 0.0;
                let mut prbs = 0usize;
                let mut new_bits = 0u64;
                while j < grants.len() && grants[j].ue == ue {
                    j += 1;
                }
                // resolve queue positions before any grant mutates the queue
                let targets: Vec<Option<usize>> = grants[i..j]
                    .iter()
                    .map(|g| match g.kind {
                        GrantKind::New { queue_pos, .. } => Some(self.ues[ue].queue[queue_pos]),
                        _ => None,
                    })
                    .collect();
                for (g, pid) in grants[i..j].iter().zip(targets) {
                    let (i_sum, bits) = self.transmit(cell, g, pid, tti, t);
                    interference += i_sum;
                    prbs += g.n_prb;
                    new_bits += bits;
                }
                self.ues[ue].history.record(tti, interference / prbs as f64, keep);
                let packets = &self.packets;
                self.ues[ue]
                    .queue
                    .retain(|&p| packets[p].unscheduled_bits > 0 && packets[p].outcome.is_none());
                served.push((ue, new_bits));
                i = j;
            }
        }
        for (ue, bits) in served {
            self.sched.served(ue, tti, bits, self.tti_s);
        }
    }

    fn schedule_cell(&mut self, cell: usize, tti: u64) -> Vec<Grant> {
        let ues: Vec<usize> = self.env.topology.ues_of(cell).collect();
        let mut retx = Vec::new();
        let mut new_data = Vec::new();
        for &ue in &ues {
            retx.extend(self.ues[ue].harq.eligible(tti).map(|(slot, p)| RetxCandidate {
                ue,
                process: slot,
                n_prb: p.n_prb,
                mcs: p.mcs,
                tb_bits: p.tb_bits,
                eligible_time: p.next_eligible_time,
            }));
            let has_data = self.full_buffer || !self.ues[ue].queue.is_empty();
            if !has_data {
                continue;
            }
            let free = self.ues[ue].harq.free(tti);
            if free == 0 {
                continue;
            }
            let report = self.cqi_report(ue, tti);
            let se = self.table.get(report.mcs_index).spectral_efficiency;
            let rate = se * (self.res_per_prb * self.cfg.prb_count) as f64 / self.tti_s;
            let pending = if self.full_buffer {
                Pending::FullBuffer
            } else {
                Pending::Packets(
                    self.ues[ue]
                        .queue
                        .iter()
                        .take(free)
                        .map(|&p| self.packets[p].unscheduled_bits)
                        .collect(),
                )
            };
            new_data.push(NewDataCandidate {
                ue,
                metric: self.sched.metric(ue, rate, tti),
                cqi_sinr: report.sinr,
                pending,
                free_processes: free,
            });
        }
        let la = LinkAdaptation {
            table: &self.table,
            bler_target: self.cfg.bler_target,
            res_per_prb: self.res_per_prb,
        };
        let mut grants = schedule_tti(self.cfg.prb_count, &retx, &new_data, la);
        let backlog = !new_data.is_empty() || retx.iter().any(|r| r.n_prb <= self.cfg.prb_count);
        if grants.is_empty() && backlog {
            self.idle_with_backlog += 1;
        }
        // group each UE's grants together, keeping their relative order
        grants.sort_by_key(|g| g.ue);
        grants
    }

    /// Per-PRB SINR of a grant; returns the SINRs and the summed interference.
    fn grant_sinrs(&self, cell: usize, grant: &Grant, t: f64) -> (Vec<f64>, f64) {
        let topo = &self.env.topology;
        let links = &self.env.links;
        let n_cells = topo.num_cells();
        let blocks = links.num_blocks();
        // fading of every cell towards this UE, per frequency block
        let mut fade = vec![f64::NAN; n_cells * blocks];
        let mut fading = |c: usize, prb: usize| {
            let b = links.block_of(prb);
            let slot = &mut fade[c * blocks + b];
            if slot.is_nan() {
                *slot = links.fading(c, grant.ue, prb, t);
            }
            *slot
        };
        let mut sinrs = Vec::with_capacity(grant.n_prb);
        let mut i_total = 0.0;
        for prb in grant.prbs() {
            let p = self.activity.power(cell, prb);
            let s = p * topo.gain(cell, grant.ue) * fading(cell, prb) * self.env.rx_gain;
            let mut i = 0.0;
            for c in 0..n_cells {
                if c != cell && self.activity.is_active(c, prb) {
                    i += self.activity.power(c, prb) * topo.gain(c, grant.ue) * fading(c, prb);
                }
            }
            i_total += i;
            sinrs.push(s / (self.env.noise_mw + i));
        }
        (sinrs, i_total)
    }

    /// Sends one grant; `pid` is the packet a new transport block carries.
    /// Returns the interference summed over its PRBs and the new payload
    /// bits it carried.
    fn transmit(&mut self, cell: usize, grant: &Grant, pid: Option<usize>, tti: u64, t: f64) -> (f64, u64) {
        let (sinrs, interference) = self.grant_sinrs(cell, grant, t);
        let s_eff = effective_sinr(&sinrs);
        let tx_end = t + self.tti_s;
        let ue = grant.ue;

        let (mut process, new_bits) = match grant.kind {
            GrantKind::Retx { process } => {
                let mut p = self.ues[ue].harq.take(process);
                p.attempts.push(s_eff);
                (p, 0)
            }
            GrantKind::New {
                payload_bits,
                completes,
                ..
            } => {
                let pid = pid.expect("new data grant targets a packet");
                let pkt = &mut self.packets[pid];
                pkt.first_grant.get_or_insert(t);
                pkt.unscheduled_bits -= payload_bits;
                pkt.outstanding += 1;
                pkt.segments += 1;
                debug_assert_eq!(completes, pkt.unscheduled_bits == 0);
                let p = HarqProcess {
                    packet: Some(pid),
                    segment: pkt.segments - 1,
                    payload_bits,
                    tb_bits: grant.tb_bits,
                    mcs: grant.mcs,
                    n_prb: grant.n_prb,
                    attempts: vec![s_eff],
                    first_tx_end: tx_end,
                    next_eligible_time: 0.0,
                    next_eligible_tti: 0,
                };
                (p, payload_bits)
            }
            GrantKind::FullBuffer { payload_bits } => {
                let p = HarqProcess {
                    packet: None,
                    segment: 0,
                    payload_bits,
                    tb_bits: grant.tb_bits,
                    mcs: grant.mcs,
                    n_prb: grant.n_prb,
                    attempts: vec![s_eff],
                    first_tx_end: tx_end,
                    next_eligible_time: 0.0,
                    next_eligible_tti: 0,
                };
                (p, payload_bits)
            }
        };

        if let Some(pid) = process.packet {
            let pkt = &mut self.packets[pid];
            pkt.n_tx += 1;
            pkt.prbs += grant.n_prb as u64;
        }

        let attempt = process.attempt_count();
        let ok = if attempt <= self.opts.forced_nacks {
            false
        } else {
            let n_re = process.n_prb * self.res_per_prb;
            let rng = &mut self.ues[ue].decode_rng;
            decode(&process.attempts, self.table.get(process.mcs), process.tb_bits, n_re, rng)
        };
        if attempt == 1 && tti >= self.cfg.warmup_ttis {
            self.first_tx += 1;
            self.first_tx_failures += u64::from(!ok);
        }

        let decoded_at = tx_end + self.decode_s;
        let ack_tti = self.tti_at_or_after(decoded_at + self.feedback_s);
        if ok {
            self.ues[ue].harq.hold(ack_tti);
            self.delivered(cell, ue, &process, decoded_at);
        } else if attempt <= self.cfg.max_harq_retx {
            process.next_eligible_time = decoded_at + self.feedback_s + self.prep_s;
            process.next_eligible_tti = self.tti_at_or_after(process.next_eligible_time);
            self.ues[ue].harq.push_retx(process);
        } else {
            self.ues[ue].harq.hold(ack_tti);
            if let Some(pid) = process.packet {
                self.resolve(pid, Outcome::Dropped);
            }
        }
        (interference, new_bits)
    }

    fn delivered(&mut self, cell: usize, ue: usize, process: &HarqProcess, decoded_at: f64) {
        let Some(pid) = process.packet else {
            if decoded_at >= self.warmup_s && decoded_at <= self.cfg.horizon_s {
                self.decoded_bits += process.payload_bits as f64;
                self.cell_decoded_bits[cell] += process.payload_bits as f64;
                self.ue_decoded_bits[ue] += process.payload_bits as f64;
            }
            return;
        };
        let decode_s = self.decode_s;
        let pkt = &mut self.packets[pid];
        pkt.outstanding -= 1;
        if decoded_at >= pkt.done_at {
            pkt.done_at = decoded_at;
            pkt.harq_extra = decoded_at - (process.first_tx_end + decode_s);
        }
        if pkt.outcome.is_none() && pkt.unscheduled_bits == 0 && pkt.outstanding == 0 {
            if pkt.measured {
                let bits = pkt.bytes as f64 * 8.0;
                self.decoded_bits += bits;
                self.cell_decoded_bits[cell] += bits;
                self.ue_decoded_bits[ue] += bits;
            }
            self.resolve(pid, Outcome::Decoded);
        }
    }

    fn resolve(&mut self, pid: usize, outcome: Outcome) {
        let pkt = &mut self.packets[pid];
        if pkt.outcome.is_some() {
            return;
        }
        pkt.outcome = Some(outcome);
        match outcome {
            Outcome::Decoded => self.counts.decoded += 1,
            Outcome::Dropped => self.counts.dropped += 1,
            Outcome::InFlight => unreachable!(),
        }
        if !pkt.measured {
            return;
        }
        self.measured_resolved += 1;
        if let Some(limit) = self.opts.violation_limit {
            let late = outcome == Outcome::Dropped || pkt.done_at - pkt.t_arrival > limit.latency_s;
            if late {
                self.violations += 1;
                if self.violations > limit.max_violations {
                    self.early_stopped = true;
                }
            }
        }
    }

    fn finish(self) -> SimOutput {
        let end_time_s = self.end_tti as f64 * self.tti_s;
        let records: Vec<PacketRecord> = self
            .measured_ids
            .iter()
            .map(|&pid| self.record(pid))
            .collect();
        let mut counts = self.counts;
        counts.in_flight = counts.generated - counts.decoded - counts.dropped;
        let window_s = if self.full_buffer {
            (end_time_s.min(self.cfg.horizon_s) - self.warmup_s).max(0.0)
        } else {
            records
                .last()
                .map_or(0.0, |r| (r.t_arrival - self.warmup_s).max(0.0))
        };
        SimOutput {
            records,
            counts,
            first_tx: self.first_tx,
            first_tx_failures: self.first_tx_failures,
            decoded_bits: self.decoded_bits,
            cell_decoded_bits: self.cell_decoded_bits,
            ue_decoded_bits: self.ue_decoded_bits,
            window_s,
            utilization: self.utilization,
            idle_with_backlog: self.idle_with_backlog,
            ttis_simulated: self.end_tti,
            end_time_s,
            early_stopped: self.early_stopped,
            num_cells: self.env.topology.num_cells(),
            scenario_hash: self.cfg.hash(),
            seed: self.cfg.seed,
            replication: self.opts.replication,
        }
    }

    fn record(&self, pid: usize) -> PacketRecord {
        let p = &self.packets[pid];
        let outcome = p.outcome.unwrap_or(Outcome::InFlight);
        let t_decoded = (outcome == Outcome::Decoded).then_some(p.done_at);
        let delays = t_decoded.map(|done| {
            let first = p.first_grant.expect("decoded packets were granted");
            let total = done - p.t_arrival;
            let queue = first - p.t_arrival - self.prep_s;
            let tx = total - self.prep_s - queue - self.decode_s - p.harq_extra;
            DelayBreakdown {
                prep: self.prep_s,
                queue,
                tx,
                decode: self.decode_s,
                harq: p.harq_extra,
            }
        });
        PacketRecord {
            id: pid as u64,
            ue: p.ue,
            cell: self.ues[p.ue].cell,
            size_bytes: p.bytes,
            t_arrival: p.t_arrival,
            t_first_grant: p.first_grant,
            t_decoded,
            outcome,
            n_transmissions: p.n_tx,
            total_prbs: p.prbs,
            delays,
        }
    }
}
