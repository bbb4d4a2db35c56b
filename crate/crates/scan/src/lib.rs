//! Grid sweeps, table output and the invariant suite for
//! `complementarity-core`.

pub mod cli;
pub mod config;
pub mod emit;
pub mod sweep;
pub mod verify;

pub use config::{Format, PGrid, SweepConfig};
pub use emit::{emit, parse_csv, rows, write_csv, write_json, Cell, Row, COLUMNS};
pub use sweep::{grid, run_sweep, GridPoint};
pub use verify::{run_verify, Check, VerifyOutcome};

#[derive(Debug, thiserror::Error)]
pub enum ScanError {
    #[error("invalid `{field}`: {message}")]
    Config { field: &'static str, message: String },
    #[error(transparent)]
    Core(#[from] complementarity_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed table: {0}")]
    Csv(String),
}
