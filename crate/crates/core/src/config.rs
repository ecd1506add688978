//! Scenario description: the flat `key = value` file format, validation,
//! unit conversions and the reproducibility hash.
//!
//! Every key has a default; an empty file yields the reference indoor-factory
//! scenario (12 cells on a 20 m grid, 10 UEs per cell, 40 MHz at 30 kHz SCS,
//! 4-symbol TTIs, 25 dBm, 4 GHz). Keys carry their unit in the name where the
//! unit is not obvious (`latency_target_ms`, `prep_delay_sym`, ...).

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::ConfigError;

/// Symbols per slot for every supported numerology.
pub const SYMBOLS_PER_SLOT: f64 = 14.0;
/// Subcarriers per PRB.
pub const SUBCARRIERS_PER_PRB: usize = 12;
/// Thermal noise density at 290 K.
pub const THERMAL_NOISE_DBM_HZ: f64 = -174.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrafficMode {
    UrllcFtp3,
    BestEffort,
}

impl FromStr for TrafficMode {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "urllc_ftp3" | "ftp3" => Ok(Self::UrllcFtp3),
            "best_effort" | "be" => Ok(Self::BestEffort),
            _ => Err(()),
        }
    }
}

impl fmt::Display for TrafficMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::UrllcFtp3 => "urllc_ftp3",
            Self::BestEffort => "best_effort",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchedulerKind {
    /// Proportional fair: instantaneous rate over average throughput.
    Pf,
    /// Equal throughput: inverse average throughput, rate-blind.
    Et,
}

impl FromStr for SchedulerKind {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "pf" => Ok(Self::Pf),
            "et" => Ok(Self::Et),
            _ => Err(()),
        }
    }
}

impl fmt::Display for SchedulerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pf => "pf",
            Self::Et => "et",
        })
    }
}

/// Interference a UE assumes when it generates a CQI report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CqiInterference {
    /// All other cells active on every PRB at the reference power.
    FullLoad,
    /// What the UE saw in its most recent scheduled TTI, noise-only before that.
    LastScheduled,
    /// Each other cell weighted by its recent fraction of active TTIs.
    LoadAveraged,
}

impl FromStr for CqiInterference {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "full_load" => Ok(Self::FullLoad),
            "last_scheduled" => Ok(Self::LastScheduled),
            "load_averaged" => Ok(Self::LoadAveraged),
            _ => Err(()),
        }
    }
}

impl fmt::Display for CqiInterference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::FullLoad => "full_load",
            Self::LastScheduled => "last_scheduled",
            Self::LoadAveraged => "load_averaged",
        })
    }
}

/// A value type that can appear on the right-hand side of a scenario line.
trait ConfigValue: Sized {
    const EXPECTED: &'static str;
    fn parse_value(s: &str) -> Option<Self>;
    fn render(&self) -> String;
}

macro_rules! numeric_value {
    ($($t:ty => $name:literal),*) => {$(
        impl ConfigValue for $t {
            const EXPECTED: &'static str = $name;
            fn parse_value(s: &str) -> Option<Self> {
                s.replace('_', "").parse().ok()
            }
            fn render(&self) -> String {
                format!("{:?}", self)
            }
        }
    )*};
}

numeric_value!(usize => "a non-negative integer", u32 => "a non-negative integer", u64 => "a non-negative integer");

impl ConfigValue for f64 {
    const EXPECTED: &'static str = "a number";
    fn parse_value(s: &str) -> Option<Self> {
        match s {
            "inf" | "infinity" => Some(f64::INFINITY),
            _ => s.parse().ok().filter(|v: &f64| !v.is_nan()),
        }
    }
    fn render(&self) -> String {
        format!("{:?}", self)
    }
}

impl ConfigValue for Option<f64> {
    const EXPECTED: &'static str = "a number or `none`";
    fn parse_value(s: &str) -> Option<Self> {
        if s == "none" {
            Some(None)
        } else {
            f64::parse_value(s).map(Some)
        }
    }
    fn render(&self) -> String {
        self.map_or_else(|| "none".to_string(), |v| v.render())
    }
}

impl ConfigValue for bool {
    const EXPECTED: &'static str = "on/off";
    fn parse_value(s: &str) -> Option<Self> {
        match s {
            "on" | "true" | "yes" | "1" => Some(true),
            "off" | "false" | "no" | "0" => Some(false),
            _ => None,
        }
    }
    fn render(&self) -> String {
        if *self { "on" } else { "off" }.to_string()
    }
}

impl ConfigValue for String {
    const EXPECTED: &'static str = "a string";
    fn parse_value(s: &str) -> Option<Self> {
        Some(s.to_string())
    }
    fn render(&self) -> String {
        self.clone()
    }
}

macro_rules! enum_value {
    ($($t:ty => $name:literal),*) => {$(
        impl ConfigValue for $t {
            const EXPECTED: &'static str = $name;
            fn parse_value(s: &str) -> Option<Self> {
                s.parse().ok()
            }
            fn render(&self) -> String {
                self.to_string()
            }
        }
    )*};
}

enum_value!(
    TrafficMode => "urllc_ftp3 or best_effort",
    SchedulerKind => "pf or et",
    CqiInterference => "full_load, last_scheduled or load_averaged"
);

macro_rules! scenario_keys {
    ($( $(#[$doc:meta])* $field:ident : $ty:ty = $default:expr, $key:literal; )*) => {
        /// Full declarative description of one simulation.
        ///
        /// Immutable once loaded; share it freely across threads.
        #[derive(Debug, Clone, PartialEq, Serialize)]
        pub struct ScenarioConfig {
            $( $(#[$doc])* pub $field: $ty, )*
        }

        impl Default for ScenarioConfig {
            fn default() -> Self {
                Self { $( $field: $default, )* }
            }
        }

        impl ScenarioConfig {
            /// All recognised keys, in canonical order.
            pub const KEYS: &'static [&'static str] = &[$($key),*];

            fn set_raw(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
                match key {
                    $( $key => {
                        self.$field = <$ty as ConfigValue>::parse_value(value).ok_or_else(|| {
                            ConfigError::InvalidValue {
                                key: key.to_string(),
                                value: value.to_string(),
                                expected: <$ty as ConfigValue>::EXPECTED,
                            }
                        })?;
                        Ok(())
                    } )*
                    _ => Err(ConfigError::UnknownKey(key.to_string())),
                }
            }

            /// Canonical `(key, value)` listing; the input to [`ScenarioConfig::hash`].
            pub fn entries(&self) -> Vec<(&'static str, String)> {
                vec![$( ($key, self.$field.render()), )*]
            }
        }
    };
}

scenario_keys! {
    num_cells: usize = 12, "num_cells";
    ues_per_cell: usize = 10, "ues_per_cell";
    inter_site_distance_m: f64 = 20.0, "inter_site_distance_m";
    /// Free space between the outermost base stations and the hall walls.
    hall_margin_m: f64 = 10.0, "hall_margin_m";
    bs_height_m: f64 = 10.0, "bs_height_m";
    ue_height_m: f64 = 1.5, "ue_height_m";
    carrier_freq_hz: f64 = 4.0e9, "carrier_freq_hz";
    bandwidth_hz: f64 = 40.0e6, "bandwidth_hz";
    scs_khz: u32 = 30, "scs_khz";
    prb_count: usize = 100, "prb_count";
    tti_symbols: u32 = 4, "tti_symbols";
    /// Control/reference-signal symbols per TTI that carry no PDSCH data.
    overhead_symbols: u32 = 1, "overhead_symbols";
    payload_bytes: u32 = 50, "payload_B";
    /// Mean FTP3 packet arrival rate per UE.
    arrival_rate_pps: f64 = 100.0, "arrival_rate_pps";
    traffic_mode: TrafficMode = TrafficMode::UrllcFtp3, "traffic_mode";
    scheduler: SchedulerKind = SchedulerKind::Pf, "scheduler";
    bler_target: f64 = 0.01, "bler_target";
    latency_target_ms: f64 = 1.0, "latency_target_ms";
    outage_prob: f64 = 1e-5, "outage_prob";
    prep_delay_sym: f64 = 2.5, "prep_delay_sym";
    decode_delay_sym: f64 = 4.5, "decode_delay_sym";
    harq_feedback_delay_sym: f64 = 4.5, "harq_feedback_delay_sym";
    max_harq_retx: u32 = 4, "max_harq_retx";
    harq_processes: usize = 16, "harq_processes";
    cqi_period_tti: u32 = 5, "cqi_period_tti";
    cqi_delay_tti: u32 = 2, "cqi_delay_tti";
    cqi_interference: CqiInterference = CqiInterference::FullLoad, "cqi_interference";
    /// Averaging constant of the cell activity seen by `load_averaged` reports.
    cqi_load_window_tti: f64 = 100.0, "cqi_load_window_tti";
    tx_power_dbm: f64 = 25.0, "tx_power_dbm";
    noise_figure_db: f64 = 9.0, "noise_figure_db";
    antenna_gain_dbi: f64 = 0.0, "antenna_gain_dbi";
    /// Receive combining gain standing in for the 2x2 receiver.
    rx_gain_db: f64 = 3.0, "rx_gain_db";
    pathloss_model: String = "inf-dh-nlos".to_string(), "pathloss_model";
    pathloss_a_db: Option<f64> = None, "pathloss_a_db";
    pathloss_b_db: Option<f64> = None, "pathloss_b_db";
    pathloss_e_db: Option<f64> = None, "pathloss_e_db";
    shadowing_std_db: Option<f64> = None, "shadowing_std_db";
    fading: bool = true, "fading";
    /// Drives the Doppler spread of the small-scale fading.
    ue_speed_kmh: f64 = 3.0, "ue_speed_kmh";
    fading_sinusoids: usize = 16, "fading_sinusoids";
    /// PRBs per independently faded block; 0 means frequency-flat.
    fading_prb_block: usize = 1, "fading_prb_block";
    pf_ewma_ttis: f64 = 100.0, "pf_ewma_ttis";
    pf_init_bps: f64 = 1000.0, "pf_init_bps";
    warmup_ttis: u64 = 2000, "warmup_ttis";
    horizon_s: f64 = 60.0, "horizon_s";
    /// Measured packets to collect before the run drains and stops; 0 = horizon only.
    target_packets: u64 = 100_000, "target_packets";
    mcs_table: String = "builtin".to_string(), "mcs_table";
    seed: u64 = 1, "seed";
}

/// Parses a scenario file into a validated configuration.
pub fn load_scenario(text: &str) -> Result<ScenarioConfig, ConfigError> {
    ScenarioConfig::from_text(text)
}

/// Splits one `key = value` line, stripping comments and optional quotes.
/// Returns `Ok(None)` for blank and comment-only lines.
fn split_line(raw: &str, line: usize) -> Result<Option<(&str, &str)>, ConfigError> {
    let content = raw.split('#').next().unwrap_or("").trim();
    if content.is_empty() {
        return Ok(None);
    }
    let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Parse {
        line,
        message: format!("expected `key = value`, found `{content}`"),
    })?;
    let key = key.trim();
    let mut value = value.trim();
    if key.is_empty() || key.contains(char::is_whitespace) {
        return Err(ConfigError::Parse {
            line,
            message: format!("malformed key `{key}`"),
        });
    }
    if value.len() >= 2 && value.starts_with('"') && value.ends_with('"') {
        value = &value[1..value.len() - 1];
    }
    if value.is_empty() {
        return Err(ConfigError::Parse {
            line,
            message: format!("missing value for `{key}`"),
        });
    }
    Ok(Some((key, value)))
}

impl ScenarioConfig {
    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        let mut seen: Vec<&str> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let Some((key, value)) = split_line(raw, idx + 1)? else {
                continue;
            };
            if seen.contains(&key) {
                return Err(ConfigError::Parse {
                    line: idx + 1,
                    message: format!("duplicate key `{key}`"),
                });
            }
            seen.push(key);
            cfg.set_raw(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Parse {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        Self::from_text(&text)
    }

    /// Applies one `key=value` override and re-validates.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, value) = split_line(assignment, 0)?.ok_or_else(|| ConfigError::Parse {
            line: 0,
            message: "empty override".to_string(),
        })?;
        self.set(key, value)
    }

    /// Sets a single key and re-validates the whole config.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let mut next = self.clone();
        next.set_raw(key, value)?;
        next.validate()?;
        *self = next;
        Ok(())
    }

    /// Renders the config back into the scenario file format.
    pub fn to_text(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    /// Short content hash of the canonical rendering.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        fn fail(field: &'static str, message: impl Into<String>) -> Result<(), ConfigError> {
            Err(ConfigError::Validation {
                field,
                message: message.into(),
            })
        }
        if self.num_cells < 1 {
            return fail("num_cells", "must be at least 1");
        }
        if self.ues_per_cell < 1 {
            return fail("ues_per_cell", "must be at least 1");
        }
        if self.prb_count < 1 {
            return fail("prb_count", "must be at least 1");
        }
        if self.tti_symbols < 1 {
            return fail("tti_symbols", "must be at least 1");
        }
        if self.overhead_symbols >= self.tti_symbols {
            return fail(
                "overhead_symbols",
                format!("must be below tti_symbols ({})", self.tti_symbols),
            );
        }
        if !(self.bler_target > 0.0 && self.bler_target < 1.0) {
            return fail("bler_target", "must lie in (0, 1)");
        }
        if !(self.outage_prob > 0.0 && self.outage_prob < 1.0) {
            return fail("outage_prob", "must lie in (0, 1)");
        }
        if !(self.latency_target_ms > 0.0) {
            return fail("latency_target_ms", "must be positive");
        }
        if !(self.arrival_rate_pps >= 0.0 && self.arrival_rate_pps.is_finite()) {
            return fail("arrival_rate_pps", "must be finite and non-negative");
        }
        if ![15, 30, 60, 120].contains(&self.scs_khz) {
            return fail("scs_khz", "must be one of 15, 30, 60, 120");
        }
        if self.prb_count as f64 * self.prb_bandwidth_hz() > self.bandwidth_hz {
            return fail(
                "prb_count",
                format!(
                    "{} PRBs of {} kHz exceed the {} Hz channel",
                    self.prb_count,
                    12 * self.scs_khz,
                    self.bandwidth_hz
                ),
            );
        }
        if self.payload_bytes < 1 {
            return fail("payload_B", "must be at least 1 byte");
        }
        if !(self.inter_site_distance_m > 0.0) {
            return fail("inter_site_distance_m", "must be positive");
        }
        if !(self.hall_margin_m >= 0.0) {
            return fail("hall_margin_m", "must be non-negative");
        }
        for (field, v) in [
            ("prep_delay_sym", self.prep_delay_sym),
            ("decode_delay_sym", self.decode_delay_sym),
            ("harq_feedback_delay_sym", self.harq_feedback_delay_sym),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return fail(field, "must be finite and non-negative");
            }
        }
        if self.harq_processes < 1 {
            return fail("harq_processes", "must be at least 1");
        }
        if self.cqi_period_tti < 1 {
            return fail("cqi_period_tti", "must be at least 1");
        }
        if !(self.cqi_load_window_tti >= 1.0) {
            return fail("cqi_load_window_tti", "must be at least 1");
        }
        if !(self.pf_ewma_ttis >= 1.0) {
            return fail("pf_ewma_ttis", "must be at least 1");
        }
        if !(self.pf_init_bps > 0.0) {
            return fail("pf_init_bps", "must be positive");
        }
        if !(self.horizon_s > 0.0 && self.horizon_s.is_finite()) {
            return fail("horizon_s", "must be positive and finite");
        }
        if self.fading && self.fading_sinusoids < 1 {
            return fail("fading_sinusoids", "must be at least 1");
        }
        if !(self.ue_speed_kmh >= 0.0) {
            return fail("ue_speed_kmh", "must be non-negative");
        }
        if let Some(s) = self.shadowing_std_db {
            if !(s >= 0.0) {
                return fail("shadowing_std_db", "must be non-negative");
            }
        }
        if crate::deployment::PathlossModel::lookup(&self.pathloss_model).is_none() {
            return fail(
                "pathloss_model",
                format!("unknown coefficient set `{}`", self.pathloss_model),
            );
        }
        Ok(())
    }

    /// Average OFDM symbol duration including cyclic prefix.
    pub fn symbol_duration_s(&self) -> f64 {
        symbol_duration(self.scs_khz)
    }

    pub fn tti_duration_s(&self) -> f64 {
        self.tti_symbols as f64 * self.symbol_duration_s()
    }

    pub fn prep_delay_s(&self) -> f64 {
        self.prep_delay_sym * self.symbol_duration_s()
    }

    pub fn decode_delay_s(&self) -> f64 {
        self.decode_delay_sym * self.symbol_duration_s()
    }

    pub fn harq_feedback_delay_s(&self) -> f64 {
        self.harq_feedback_delay_sym * self.symbol_duration_s()
    }

    pub fn latency_target_s(&self) -> f64 {
        self.latency_target_ms * 1e-3
    }

    pub fn prb_bandwidth_hz(&self) -> f64 {
        SUBCARRIERS_PER_PRB as f64 * self.scs_khz as f64 * 1e3
    }

    /// Data resource elements per PRB per TTI after control overhead.
    pub fn data_res_per_prb(&self) -> usize {
        SUBCARRIERS_PER_PRB * (self.tti_symbols - self.overhead_symbols) as usize
    }

    pub fn total_ues(&self) -> usize {
        self.num_cells * self.ues_per_cell
    }

    /// Thermal noise plus noise figure over one PRB, in mW.
    pub fn noise_per_prb_mw(&self) -> f64 {
        db_to_lin(
            THERMAL_NOISE_DBM_HZ + 10.0 * self.prb_bandwidth_hz().log10() + self.noise_figure_db,
        )
    }

    /// Total offered network load in bits/s: cells x UEs x payload bits x rate.
    pub fn offered_load_bps(&self) -> Result<f64, ConfigError> {
        match self.traffic_mode {
            TrafficMode::UrllcFtp3 => Ok(offered_load(
                self.num_cells,
                self.ues_per_cell,
                self.payload_bytes,
                self.arrival_rate_pps,
            )),
            TrafficMode::BestEffort => Err(ConfigError::Validation {
                field: "traffic_mode",
                message: "offered load is undefined for best-effort (infinite) traffic"
                    .to_string(),
            }),
        }
    }
}

/// Symbol duration for a subcarrier spacing: a 0.5 ms, 14-symbol slot at 30 kHz,
/// scaled inversely with the spacing.
pub fn symbol_duration(scs_khz: u32) -> f64 {
    0.5e-3 / SYMBOLS_PER_SLOT * (30.0 / scs_khz as f64)
}

pub fn offered_load(cells: usize, ues_per_cell: usize, payload_bytes: u32, rate_pps: f64) -> f64 {
    cells as f64 * (ues_per_cell as f64 * payload_bytes as f64 * 8.0 * rate_pps)
}

pub fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn lin_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn payload_override_keeps_reference_defaults() {
        let cfg = load_scenario("payload_B = 1500\n").unwrap();
        assert_eq!(cfg.payload_bytes, 1500);
        assert_eq!(cfg.num_cells, 12);
        assert_eq!(cfg.ues_per_cell, 10);
        assert_eq!(cfg.scs_khz, 30);
        assert_eq!(cfg.prb_count, 100);
    }

    #[test]
    fn overhead_must_stay_below_tti() {
        let err = load_scenario("overhead_symbols = 4\ntti_symbols = 4\n").unwrap_err();
        assert!(matches!(
            err,
            ConfigError::Validation {
                field: "overhead_symbols",
                ..
            }
        ));
    }

    #[test]
    fn empty_file_is_the_default_scenario() {
        let a = load_scenario("").unwrap();
        let b = load_scenario("# only a comment\n\n").unwrap();
        assert_eq!(a, ScenarioConfig::default());
        assert_eq!(a.to_text(), b.to_text());
        assert_eq!(a.hash(), b.hash());
    }

    #[test]
    fn unknown_and_malformed_lines_are_rejected() {
        assert_eq!(
            load_scenario("cells = 3").unwrap_err(),
            ConfigError::UnknownKey("cells".into())
        );
        assert!(matches!(
            load_scenario("num_cells 3").unwrap_err(),
            ConfigError::Parse { line: 1, .. }
        ));
        assert!(matches!(
            load_scenario("num_cells = three").unwrap_err(),
            ConfigError::InvalidValue { .. }
        ));
        assert!(matches!(
            load_scenario("seed = 1\nseed = 2").unwrap_err(),
            ConfigError::Parse { line: 2, .. }
        ));
    }

    #[test]
    fn comments_quotes_and_enums() {
        let cfg = load_scenario(
            "traffic_mode = best_effort  # full buffer\nscheduler = \"et\"\nfading = off\n",
        )
        .unwrap();
        assert_eq!(cfg.traffic_mode, TrafficMode::BestEffort);
        assert_eq!(cfg.scheduler, SchedulerKind::Et);
        assert!(!cfg.fading);
    }

    #[test]
    fn numerology_bounds() {
        assert!(load_scenario("scs_khz = 45").is_err());
        // 100 PRBs at 120 kHz need 144 MHz.
        assert!(load_scenario("scs_khz = 120").is_err());
        assert!(load_scenario("scs_khz = 15\nprb_count = 200").is_ok());
    }

    #[test]
    fn text_round_trip() {
        let mut cfg = ScenarioConfig::default();
        cfg.apply_override("latency_target_ms=3").unwrap();
        cfg.apply_override("shadowing_std_db = 0").unwrap();
        let back = load_scenario(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
        assert!(cfg.apply_override("bler_target=1.5").is_err());
        assert_eq!(cfg.bler_target, 0.01);
    }

    #[test]
    fn symbol_and_tti_durations() {
        assert_relative_eq!(symbol_duration(30), 0.0005 / 14.0, max_relative = 1e-12);
        assert_relative_eq!(symbol_duration(30) * 1e6, 35.714, epsilon = 1e-3);
        assert_relative_eq!(symbol_duration(15) * 1e6, 71.429, epsilon = 1e-3);
        let cfg = ScenarioConfig::default();
        assert_relative_eq!(cfg.tti_duration_s() * 1e6, 142.857, epsilon = 1e-3);
        for scs in [15u32, 30, 60, 120] {
            let slot_count = SYMBOLS_PER_SLOT * scs as f64 / 15.0;
            assert_relative_eq!(symbol_duration(scs) * slot_count, 1e-3, max_relative = 1e-12);
        }
    }

    #[test]
    fn offered_load_arithmetic() {
        assert_relative_eq!(offered_load(12, 10, 1500, 10.0), 14.4e6);
        assert_relative_eq!(offered_load(12, 10, 50, 100.0), 4.8e6);
        assert_eq!(offered_load(12, 10, 50, 0.0), 0.0);
        let cfg = load_scenario("traffic_mode = best_effort").unwrap();
        assert!(cfg.offered_load_bps().is_err());
    }

    #[test]
    fn resource_accounting_defaults() {
        let cfg = ScenarioConfig::default();
        assert_eq!(cfg.data_res_per_prb(), 36);
        // -174 dBm/Hz + 10log10(360 kHz) + 9 dB
        assert_relative_eq!(lin_to_db(cfg.noise_per_prb_mw()), -109.436, epsilon = 1e-3);
    }
}
