use std::path::Path;

use crate::error::ConfigError;

const BUILTIN_TABLE: &str = include_str!("../../data/mcs_cqi_256qam.csv");

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McsEntry {
    pub index: usize,
    /// Bits per modulation symbol (2 = QPSK ... 8 = 256QAM).
    pub mod_order: u32,
    pub code_rate: f64,
    /// Information bits per resource element.
    pub spectral_efficiency: f64,
}

/// Ordered modulation and coding schemes, strictly increasing in efficiency.
#[derive(Debug, Clone, PartialEq)]
pub struct McsTable {
    entries: Vec<McsEntry>,
}

impl McsTable {
    pub fn builtin() -> Self {
        Self::from_csv(BUILTIN_TABLE).expect("shipped MCS table is valid")
    }

    /// Resolves the `mcs_table` scenario key: `builtin` or a CSV path.
    pub fn from_config_value(value: &str) -> Result<Self, ConfigError> {
        if value == "builtin" {
            return Ok(Self::builtin());
        }
        let text = std::fs::read_to_string(Path::new(value))
            .map_err(|e| ConfigError::Table(format!("{value}: {e}")))?;
        Self::from_csv(&text)
    }

    /// Parses `index,mod_order,code_rate,se` rows; `#` lines and the header are skipped.
    pub fn from_csv(text: &str) -> Result<Self, ConfigError> {
        let mut entries = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("index") {
                continue;
            }
            let bad = || ConfigError::Table(format!("MCS table line {}: `{line}`", n + 1));
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 4 {
                return Err(bad());
            }
            entries.push(McsEntry {
                index: cols[0].parse().map_err(|_| bad())?,
                mod_order: cols[1].parse().map_err(|_| bad())?,
                code_rate: cols[2].parse().map_err(|_| bad())?,
                spectral_efficiency: cols[3].parse().map_err(|_| bad())?,
            });
        }
        Self::new(entries)
    }

    pub fn new(entries: Vec<McsEntry>) -> Result<Self, ConfigError> {
        if entries.is_empty() {
            return Err(ConfigError::Table("MCS table is empty".into()));
        }
        for (i, e) in entries.iter().enumerate() {
            if e.index != i {
                return Err(ConfigError::Table(format!("MCS index {} out of order", e.index)));
            }
            if !(e.spectral_efficiency > 0.0) || e.mod_order == 0 {
                return Err(ConfigError::Table(format!("MCS {i} has non-positive efficiency")));
            }
            if i > 0 && e.spectral_efficiency <= entries[i - 1].spectral_efficiency {
                return Err(ConfigError::Table(format!(
                    "MCS {i} efficiency not strictly increasing"
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> &McsEntry {
        &self.entries[index]
    }

    pub fn entries(&self) -> &[McsEntry] {
        &self.entries
    }

    pub fn highest(&self) -> &McsEntry {
        self.entries.last().expect("non-empty")
    }

    /// Highest entry whose efficiency does not exceed the Shannon capacity of
    /// `sinr`; entry 0 when none does.
    pub fn cqi_index(&self, sinr: f64) -> usize {
        let cap = (1.0 + sinr.max(0.0)).log2();
        self.entries
            .iter()
            .rposition(|e| e.spectral_efficiency <= cap)
            .unwrap_or(0)
    }
}
