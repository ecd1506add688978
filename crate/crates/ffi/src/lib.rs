//! C ABI over the simulator.
//!
//! Scenarios and runs cross the boundary as opaque handles that the caller
//! frees with the matching `*_free` function. Every fallible call returns a
//! [`UrllcStatus`]; the message of the last failure on the calling thread is
//! available from [`urllc_last_error`]. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use urllc_sim::harness::{capacity_search, CapacityQuery, SearchStatus};
use urllc_sim::kpi::summary::outage_latency;
use urllc_sim::mac::ledger::write_ledger_csv;
use urllc_sim::mac::{run_simulation, RunOptions, SimOutput};
use urllc_sim::{Error, ScenarioConfig};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UrllcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Unknown key, unparsable value or failed validation.
    Config = 3,
    /// No rate in the bracket meets the target.
    Infeasible = 4,
    InsufficientSamples = 5,
    /// A KPI with no defined value, e.g. on an empty ledger.
    Kpi = 6,
    Io = 7,
    Panic = 8,
}

/// Scenario description. Created by [`urllc_scenario_new`] or
/// [`urllc_scenario_parse`].
pub struct UrllcScenario {
    cfg: ScenarioConfig,
}

/// Completed simulation run. Created by [`urllc_run`].
pub struct UrllcRun {
    out: SimOutput,
}

/// Packet outcomes of a run.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UrllcCounts {
    pub generated: u64,
    pub decoded: u64,
    pub dropped: u64,
    pub in_flight: u64,
}

/// Answer of a capacity query.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UrllcCapacity {
    /// Largest passing per-UE arrival rate, packets/s.
    pub lambda_star: f64,
    /// Offered load at that rate, bit/s.
    pub omega_star_bps: f64,
    /// False when the target still held at the top of the bracket.
    pub converged: bool,
    /// Some probe passed above a failing one even after a re-run.
    pub noisy: bool,
    pub probes: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(UrllcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Config(_) => UrllcStatus::Config,
            Error::Infeasible(_) => UrllcStatus::Infeasible,
            Error::InsufficientSamples { .. } => UrllcStatus::InsufficientSamples,
            Error::Kpi(_) => UrllcStatus::Kpi,
            Error::Io(_) | Error::Json(_) => UrllcStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

impl From<urllc_sim::ConfigError> for Failure {
    fn from(e: urllc_sim::ConfigError) -> Self {
        Error::from(e).into()
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

/// Runs `body`, converting failures and panics into status codes.
fn guard<F>(body: F) -> UrllcStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => UrllcStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("panic: {msg}"));
            UrllcStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(UrllcStatus::NullPointer, "null handle".into()))
}

unsafe fn deref_mut<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(UrllcStatus::NullPointer, "null handle".into()))
}

unsafe fn out_ptr<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(UrllcStatus::NullPointer, "null output pointer".into()))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(UrllcStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(UrllcStatus::InvalidUtf8, e.to_string()))
}

/// Message of the last failed call on this thread, or null if none failed.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn urllc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Offered load in bit/s of `cells * ues_per_cell` UEs, each sending
/// `payload_bytes` packets at `rate_pps`.
#[no_mangle]
pub extern "C" fn urllc_offered_load(cells: u32, ues_per_cell: u32, payload_bytes: u32, rate_pps: f64) -> f64 {
    urllc_sim::offered_load(cells as usize, ues_per_cell as usize, payload_bytes, rate_pps)
}

/// Scenario with every key at its default.
///
/// # Safety
/// `out` must be null or point to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn urllc_scenario_new(out: *mut *mut UrllcScenario) -> UrllcStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = Box::into_raw(Box::new(UrllcScenario {
            cfg: ScenarioConfig::default(),
        }));
        Ok(())
    })
}

/// Scenario from `key = value` text; unspecified keys keep their defaults.
///
/// # Safety
/// `text` must be null or a nul-terminated string; `out` as for
/// [`urllc_scenario_new`].
#[no_mangle]
pub unsafe extern "C" fn urllc_scenario_parse(src: *const c_char, out: *mut *mut UrllcScenario) -> UrllcStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let cfg = ScenarioConfig::from_text(text(src)?)?;
        *out = Box::into_raw(Box::new(UrllcScenario { cfg }));
        Ok(())
    })
}

/// Sets one key. The scenario is left unchanged when the value is rejected.
///
/// # Safety
/// `scenario` must be null or a live handle; `key` and `value` null or
/// nul-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn urllc_scenario_set(
    scenario: *mut UrllcScenario,
    key: *const c_char,
    value: *const c_char,
) -> UrllcStatus {
    guard(|| {
        let s = deref_mut(scenario)?;
        let (key, value) = (text(key)?, text(value)?);
        let mut next = s.cfg.clone();
        next.set(key, value)?;
        next.validate()?;
        s.cfg = next;
        Ok(())
    })
}

/// Copies the scenario hash, nul-terminated, into `buf` of `len` bytes.
/// Fails with `Io` when the buffer is too small.
///
/// # Safety
/// `scenario` must be null or a live handle; `buf` must hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn urllc_scenario_hash(scenario: *const UrllcScenario, buf: *mut c_char, len: usize) -> UrllcStatus {
    guard(|| {
        let s = deref(scenario)?;
        if buf.is_null() {
            return Err(Failure(UrllcStatus::NullPointer, "null buffer".into()));
        }
        let h = s.cfg.hash();
        if h.len() + 1 > len {
            return Err(Failure(UrllcStatus::Io, format!("buffer needs {} bytes", h.len() + 1)));
        }
        ptr::copy_nonoverlapping(h.as_ptr().cast::<c_char>(), buf, h.len());
        *buf.add(h.len()) = 0;
        Ok(())
    })
}

/// # Safety
/// `scenario` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn urllc_scenario_free(scenario: *mut UrllcScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Simulates the scenario to its horizon or packet target.
///
/// # Safety
/// `scenario` must be null or a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn urllc_run(scenario: *const UrllcScenario, out: *mut *mut UrllcRun) -> UrllcStatus {
    guard(|| {
        let s = deref(scenario)?;
        let out = out_ptr(out)?;
        let sim = run_simulation(&s.cfg, &RunOptions::default())?;
        *out = Box::into_raw(Box::new(UrllcRun { out: sim }));
        Ok(())
    })
}

/// # Safety
/// `run` must be null or a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn urllc_run_counts(run: *const UrllcRun, out: *mut UrllcCounts) -> UrllcStatus {
    guard(|| {
        let c = deref(run)?.out.counts;
        *out_ptr(out)? = UrllcCounts {
            generated: c.generated,
            decoded: c.decoded,
            dropped: c.dropped,
            in_flight: c.in_flight,
        };
        Ok(())
    })
}

/// Latency met by all but a `rho` fraction of packets, seconds. Lost
/// packets count as infinitely late, so the value may be `inf`.
///
/// # Safety
/// `run` must be null or a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn urllc_run_outage_latency(run: *const UrllcRun, rho: f64, out: *mut f64) -> UrllcStatus {
    guard(|| {
        let r = deref(run)?;
        let out = out_ptr(out)?;
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Failure(UrllcStatus::Config, "rho must lie in (0, 1)".into()));
        }
        *out = outage_latency(&r.out.records, rho).map_err(Error::from)?.value;
        Ok(())
    })
}

/// Decoded bits per second over the measurement window.
///
/// # Safety
/// `run` must be null or a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn urllc_run_throughput(run: *const UrllcRun, out: *mut f64) -> UrllcStatus {
    guard(|| {
        let r = deref(run)?;
        *out_ptr(out)? = r.out.mean_throughput_bps();
        Ok(())
    })
}

/// Writes the packet ledger as CSV to `path`.
///
/// # Safety
/// `run` must be null or a live handle; `path` null or nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn urllc_run_write_ledger(run: *const UrllcRun, path: *const c_char) -> UrllcStatus {
    guard(|| {
        let r = deref(run)?;
        let mut w = BufWriter::new(File::create(text(path)?)?);
        writeln!(w, "# scenario_hash={} seed={}", r.out.scenario_hash, r.out.seed)?;
        write_ledger_csv(&r.out.records, &mut w)?;
        w.flush()?;
        Ok(())
    })
}

/// # Safety
/// `run` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn urllc_run_free(run: *mut UrllcRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Largest offered load whose outage latency at `rho` stays within
/// `phi_s` seconds. A zero `min_packets` keeps the default sample count.
///
/// # Safety
/// `scenario` must be null or a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn urllc_capacity(
    scenario: *const UrllcScenario,
    phi_s: f64,
    rho: f64,
    lambda_lo: f64,
    lambda_hi: f64,
    min_packets: u64,
    out: *mut UrllcCapacity,
) -> UrllcStatus {
    guard(|| {
        let s = deref(scenario)?;
        let out = out_ptr(out)?;
        let mut q = CapacityQuery::new(s.cfg.clone(), phi_s, rho);
        q.lambda_lo = lambda_lo;
        q.lambda_hi = lambda_hi;
        if min_packets > 0 {
            q.min_packets = min_packets;
        }
        let r = capacity_search(&q)?;
        *out = UrllcCapacity {
            lambda_star: r.lambda_star,
            omega_star_bps: r.omega_star_bps,
            converged: r.status == SearchStatus::Converged,
            noisy: r.noisy,
            probes: r.probes.len() as u32,
        };
        Ok(())
    })
}
