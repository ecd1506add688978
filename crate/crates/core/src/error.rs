use thiserror::Error;

/// Errors raised while reading or validating a scenario description.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown key `{0}`")]
    UnknownKey(String),

    #[error("key `{key}`: cannot parse `{value}` as {expected}")]
    InvalidValue {
        key: String,
        value: String,
        expected: &'static str,
    },

    #[error("invalid `{field}`: {message}")]
    Validation { field: &'static str, message: String },

    #[error("{0}")]
    Table(String),
}

/// Link-adaptation failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhyError {
    #[error("allocation needs {needed} PRBs but only {budget} are free")]
    AllocationInfeasible { needed: usize, budget: usize },
}

/// KPI computations with no defined value.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum KpiError {
    #[error("{0}")]
    Undefined(&'static str),

    #[error("empty ledger")]
    EmptyLedger,
}

/// Crate-level error used by the harness, the CLI and the C ABI.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Kpi(#[from] KpiError),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("insufficient samples: {available} packets available, {required} required")]
    InsufficientSamples { required: u64, available: u64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
