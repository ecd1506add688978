//! Command-line front end: single runs, capacity queries, sweeps, baselines
//! and plot data.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{ScenarioConfig, SchedulerKind, TrafficMode};
use crate::error::{Error, Result};
use crate::harness::{be_baseline, capacity_search, run_sweep, write_sweep_csv, CapacityQuery, CapacityResult, SweepSpec};
use crate::kpi::{latency_ecdf, prb_ecdf, KpiSummary};
use crate::mac::ledger::{write_ledger_csv, write_utilization_csv};
use crate::mac::{run_simulation, RunOptions, SimOutput};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
/// The query has no answer: infeasible, too few samples, or an undefined KPI.
pub const EXIT_ANALYSIS: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "urllc-sim", version, about = "Downlink URLLC capacity simulator for indoor factories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One simulation: packet ledger and KPI summary.
    Run {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Outage probabilities reported in the summary.
        #[arg(long, value_delimiter = ',', default_values_t = [1e-2, 1e-3])]
        rho: Vec<f64>,
        /// Also write per-TTI PRB usage.
        #[arg(long)]
        utilization: bool,
    },
    /// Largest offered load meeting one latency/outage target.
    Capacity {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        phi_ms: f64,
        #[arg(long)]
        rho: f64,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Capacity over a grid of targets, payloads and schedulers.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        phi_ms: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        rho: Vec<f64>,
        /// Payload sizes in bytes; defaults to the scenario's.
        #[arg(long, value_delimiter = ',')]
        payload: Vec<u32>,
        #[arg(long, value_delimiter = ',', value_parser = scheduler_arg, default_values_t = [SchedulerKind::Pf])]
        scheduler: Vec<SchedulerKind>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Full-buffer throughput per scheduler.
    Baseline {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_delimiter = ',', value_parser = scheduler_arg, default_values_t = [SchedulerKind::Pf, SchedulerKind::Et])]
        scheduler: Vec<SchedulerKind>,
    },
    /// Latency and PRBs-per-packet distributions as CSV.
    Plotdata {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Payload sizes in bytes; one pair of files per size.
        #[arg(long, value_delimiter = ',')]
        payload: Vec<u32>,
    },
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// Scenario file; the built-in defaults when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// `key=value` overrides applied after the file, in order.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

impl ScenarioArgs {
    fn load(&self) -> Result<ScenarioConfig> {
        let mut cfg = match &self.scenario {
            Some(path) => ScenarioConfig::from_file(path)?,
            None => ScenarioConfig::default(),
        };
        for o in &self.overrides {
            cfg.apply_override(o)?;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        Ok(cfg)
    }

    fn out_dir(&self) -> Result<&Path> {
        fs::create_dir_all(&self.out)?;
        Ok(&self.out)
    }
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    lambda_lo: Option<f64>,
    #[arg(long)]
    lambda_hi: Option<f64>,
    /// Relative bracket width at which bisection stops.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    min_packets: Option<u64>,
}

impl SearchArgs {
    fn apply(&self, q: &mut CapacityQuery) {
        if let Some(v) = self.lambda_lo {
            q.lambda_lo = v;
        }
        if let Some(v) = self.lambda_hi {
            q.lambda_hi = v;
        }
        if let Some(v) = self.tol {
            q.rel_tol = v;
        }
        if let Some(v) = self.min_packets {
            q.min_packets = v;
        }
    }
}

#[derive(Serialize)]
struct CapacityReport<'a> {
    phi_ms: f64,
    rho: f64,
    omega_star_mbps: f64,
    #[serde(flatten)]
    result: &'a CapacityResult,
    scenario_hash: String,
    seed: u64,
}

#[derive(Serialize)]
struct BaselineReport {
    throughput_mbps: Vec<(SchedulerKind, f64)>,
    scenario_hash: String,
    seed: u64,
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => EXIT_VALIDATION,
        Error::Infeasible(_) | Error::InsufficientSamples { .. } | Error::Kpi(_) => EXIT_ANALYSIS,
        Error::Io(_) | Error::Json(_) => EXIT_USAGE,
    }
}

fn provenance(out: &SimOutput) -> String {
    format!("# scenario_hash={} seed={}", out.scenario_hash, out.seed)
}

fn scheduler_arg(s: &str) -> std::result::Result<SchedulerKind, String> {
    s.parse().map_err(|()| format!("unknown scheduler `{s}` (expected pf or et)"))
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut w = create(dir, name)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Run {
            scenario,
            rho,
            utilization,
        } => {
            let cfg = scenario.load()?;
            let dir = scenario.out_dir()?;
            let opts = RunOptions {
                record_utilization: utilization,
                ..RunOptions::default()
            };
            let out = run_simulation(&cfg, &opts)?;
            let summary = KpiSummary::from_output(&out, &rho);
            let mut w = create(dir, "ledger.csv")?;
            writeln!(w, "{}", provenance(&out))?;
            write_ledger_csv(&out.records, &mut w)?;
            w.flush()?;
            if utilization {
                let mut w = create(dir, "utilization.csv")?;
                writeln!(w, "{}", provenance(&out))?;
                write_utilization_csv(&out.utilization, out.num_cells, &mut w)?;
                w.flush()?;
            }
            write_json(dir, "kpi.json", &summary)?;
            println!("{}", summary.to_json());
        }
        Command::Capacity {
            scenario,
            phi_ms,
            rho,
            search,
        } => {
            let cfg = scenario.load()?;
            let dir = scenario.out_dir()?;
            let mut q = CapacityQuery::new(cfg.clone(), phi_ms * 1e-3, rho);
            search.apply(&mut q);
            let result = capacity_search(&q)?;
            println!(
                "omega* = {:.4} Mbps (lambda* = {:.3} pkt/s per UE, {:?}{})",
                result.omega_star_bps / 1e6,
                result.lambda_star,
                result.status,
                if result.noisy { ", noisy" } else { "" }
            );
            let report = CapacityReport {
                phi_ms,
                rho,
                omega_star_mbps: result.omega_star_bps / 1e6,
                result: &result,
                scenario_hash: cfg.hash(),
                seed: cfg.seed,
            };
            write_json(dir, "capacity.json", &report)?;
        }
        Command::Sweep {
            scenario,
            phi_ms,
            rho,
            payload,
            scheduler,
            search,
        } => {
            let cfg = scenario.load()?;
            let dir = scenario.out_dir()?;
            let mut q = CapacityQuery::new(cfg.clone(), 1e-3, rho[0]);
            search.apply(&mut q);
            let spec = SweepSpec {
                payloads: if payload.is_empty() { vec![cfg.payload_bytes] } else { payload },
                base: cfg,
                phis_ms: phi_ms,
                rhos: rho,
                schedulers: scheduler,
                lambda_lo: q.lambda_lo,
                lambda_hi: q.lambda_hi,
                rel_tol: q.rel_tol,
                min_packets: search.min_packets.unwrap_or(0),
            };
            let result = run_sweep(&spec)?;
            let mut w = create(dir, "sweep.csv")?;
            write_sweep_csv(&result, &mut w)?;
            w.flush()?;
            write_sweep_csv(&result, std::io::stdout().lock())?;
        }
        Command::Baseline { scenario, scheduler } => {
            let cfg = scenario.load()?;
            let dir = scenario.out_dir()?;
            let mut rows = Vec::new();
            for s in scheduler {
                let mu = be_baseline(&cfg, s, 0)?;
                println!("{s}: {:.4} Mbps", mu / 1e6);
                rows.push((s, mu / 1e6));
            }
            let report = BaselineReport {
                throughput_mbps: rows,
                scenario_hash: cfg.hash(),
                seed: cfg.seed,
            };
            write_json(dir, "baseline.json", &report)?;
        }
        Command::Plotdata { scenario, payload } => {
            let mut cfg = scenario.load()?;
            let dir = scenario.out_dir()?;
            cfg.traffic_mode = TrafficMode::UrllcFtp3;
            let payloads = if payload.is_empty() { vec![cfg.payload_bytes] } else { payload };
            for b in payloads {
                cfg.set("payload_B", &b.to_string())?;
                let out = run_simulation(&cfg, &RunOptions::default())?;
                let tag = provenance(&out);
                for (name, mut ecdf) in [("latency", latency_ecdf(&out.records)), ("prbs", prb_ecdf(&out.records))] {
                    let file = format!("ecdf_{name}_{b}B.csv");
                    let mut w = create(dir, &file)?;
                    writeln!(w, "{tag}")?;
                    ecdf.write_csv(&mut w)?;
                    w.flush()?;
                    println!("{}", dir.join(&file).display());
                }
            }
        }
    }
    Ok(())
}
