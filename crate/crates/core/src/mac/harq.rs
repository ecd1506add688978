//! Per-UE HARQ entity: a fixed pool of stop-and-wait processes.

/// One transport block in flight.
#[derive(Debug, Clone, PartialEq)]
pub struct HarqProcess {
    /// Owning packet; `None` for full-buffer data.
    pub packet: Option<usize>,
    pub segment: u32,
    pub payload_bits: u64,
    pub tb_bits: u64,
    pub mcs: usize,
    pub n_prb: usize,
    /// Effective SINR of every attempt so far, in order.
    pub attempts: Vec<f64>,
    pub first_tx_end: f64,
    /// Earliest start of the next attempt: last tx end + decode + feedback + prep.
    pub next_eligible_time: f64,
    pub next_eligible_tti: u64,
}

impl HarqProcess {
    pub fn attempt_count(&self) -> u32 {
        self.attempts.len() as u32
    }
}

#[derive(Debug, Clone)]
pub struct HarqEntity {
    capacity: usize,
    /// Processes waiting to retransmit. Slots are reused.
    pending: Vec<Option<HarqProcess>>,
    /// Release TTIs of processes waiting for an ACK or a final NACK.
    held: Vec<u64>,
}

impl HarqEntity {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            pending: Vec::new(),
            held: Vec::new(),
        }
    }

    fn busy(&mut self, tti: u64) -> usize {
        self.held.retain(|&release| release > tti);
        self.pending.iter().filter(|p| p.is_some()).count() + self.held.len()
    }

    /// Processes that can start a new transport block at `tti`.
    pub fn free(&mut self, tti: u64) -> usize {
        self.capacity.saturating_sub(self.busy(tti))
    }

    /// Keeps one process busy until `release_tti` (exclusive).
    pub fn hold(&mut self, release_tti: u64) {
        self.held.push(release_tti);
    }

    pub fn push_retx(&mut self, p: HarqProcess) -> usize {
        match self.pending.iter().position(Option::is_none) {
            Some(slot) => {
                self.pending[slot] = Some(p);
                slot
            }
            None => {
                self.pending.push(Some(p));
                self.pending.len() - 1
            }
        }
    }

    /// `(slot, process)` pairs eligible to retransmit at `tti`.
    pub fn eligible(&self, tti: u64) -> impl Iterator<Item = (usize, &HarqProcess)> {
        self.pending
            .iter()
            .enumerate()
            .filter_map(move |(i, p)| p.as_ref().filter(|p| p.next_eligible_tti <= tti).map(|p| (i, p)))
    }

    pub fn take(&mut self, slot: usize) -> HarqProcess {
        self.pending[slot].take().expect("scheduled HARQ slot is pending")
    }

    /// Earliest TTI at which any pending retransmission becomes eligible.
    pub fn next_retx_tti(&self) -> Option<u64> {
        self.pending.iter().flatten().map(|p| p.next_eligible_tti).min()
    }

    pub fn has_pending(&self) -> bool {
        self.pending.iter().any(Option::is_some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn proc(tti: u64) -> HarqProcess {
        HarqProcess {
            packet: Some(0),
            segment: 0,
            payload_bits: 400,
            tb_bits: 424,
            mcs: 3,
            n_prb: 4,
            attempts: vec![1.0],
            first_tx_end: 0.0,
            next_eligible_time: tti as f64,
            next_eligible_tti: tti,
        }
    }

    #[test]
    fn pool_accounting() {
        let mut h = HarqEntity::new(3);
        assert_eq!(h.free(0), 3);
        h.hold(5);
        let slot = h.push_retx(proc(4));
        assert_eq!(h.free(0), 1);
        assert_eq!(h.eligible(3).count(), 0);
        assert_eq!(h.eligible(4).count(), 1);
        assert_eq!(h.next_retx_tti(), Some(4));
        // the held process releases at TTI 5
        assert_eq!(h.free(5), 2);
        h.take(slot);
        assert!(!h.has_pending());
        assert_eq!(h.free(5), 3);
        assert_eq!(h.push_retx(proc(9)), slot);
    }
}
