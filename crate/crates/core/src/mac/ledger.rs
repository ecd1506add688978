//! Per-packet outcomes and the CSV dumps built from them.

use std::io::Write;

use serde::Serialize;

/// Schema tag written as the first line of every packet ledger.
pub const LEDGER_SCHEMA: &str = "# urllc-sim packet ledger v1";
pub const LEDGER_HEADER: &str = "pkt_id,ue,cell,bytes,t_arrival,t_decoded,latency_s,n_tx,prbs_total,dropped";
pub const UTILIZATION_SCHEMA: &str = "# urllc-sim prb utilization v1 (TTIs without any grant are omitted)";

/// Where a decoded packet's latency went. The parts sum to the total.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct DelayBreakdown {
    pub prep: f64,
    /// From the end of preparation to the start of the first grant.
    pub queue: f64,
    /// Air time plus waiting for the remaining segments' grants.
    pub tx: f64,
    pub decode: f64,
    /// Extra time the last transport block spent in retransmissions.
    pub harq: f64,
}

impl DelayBreakdown {
    pub fn total(&self) -> f64 {
        self.prep + self.queue + self.tx + self.decode + self.harq
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Decoded,
    /// A transport block exhausted its HARQ attempts.
    Dropped,
    /// Still unresolved when the run stopped.
    InFlight,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PacketRecord {
    pub id: u64,
    pub ue: usize,
    pub cell: usize,
    pub size_bytes: u32,
    pub t_arrival: f64,
    pub t_first_grant: Option<f64>,
    pub t_decoded: Option<f64>,
    pub outcome: Outcome,
    pub n_transmissions: u32,
    pub total_prbs: u64,
    pub delays: Option<DelayBreakdown>,
}

impl PacketRecord {
    /// One-way latency; infinite unless decoded.
    pub fn latency(&self) -> f64 {
        match self.t_decoded {
            Some(t) if self.outcome == Outcome::Decoded => t - self.t_arrival,
            _ => f64::INFINITY,
        }
    }

    pub fn is_decoded(&self) -> bool {
        self.outcome == Outcome::Decoded
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |t| format!("{t:.9}"))
}

pub fn write_ledger_csv<W: Write>(records: &[PacketRecord], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{LEDGER_SCHEMA}")?;
    writeln!(w, "{LEDGER_HEADER}")?;
    for r in records {
        let latency = r.latency();
        let latency = if latency.is_finite() {
            format!("{latency:.9}")
        } else {
            "inf".to_string()
        };
        writeln!(
            w,
            "{},{},{},{},{:.9},{},{},{},{},{}",
            r.id,
            r.ue,
            r.cell,
            r.size_bytes,
            r.t_arrival,
            opt(r.t_decoded),
            latency,
            r.n_transmissions,
            r.total_prbs,
            u8::from(r.outcome == Outcome::Dropped),
        )?;
    }
    Ok(())
}

/// PRBs granted per cell in one TTI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UtilizationRow {
    pub tti: u64,
    pub prbs_per_cell: Vec<usize>,
}

pub fn write_utilization_csv<W: Write>(rows: &[UtilizationRow], cells: usize, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{UTILIZATION_SCHEMA}")?;
    let header: Vec<String> = (0..cells).map(|c| format!("cell{c}")).collect();
    writeln!(w, "tti,{}", header.join(","))?;
    for row in rows {
        let cols: Vec<String> = row.prbs_per_cell.iter().map(usize::to_string).collect();
        writeln!(w, "{},{}", row.tti, cols.join(","))?;
    }
    Ok(())
}
