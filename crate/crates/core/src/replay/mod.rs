//! `.frlog` replay logs and the APM/EPM/camera metrics computed from them.

mod log;
mod metrics;
mod table;
mod verify;

use thiserror::Error;

pub use log::{
    is_camera_kind, read_log, write_log, ActionRecord, LogHeader, ReplayLog, Side, ACTION_KINDS, FRLOG_MAGIC,
    FRLOG_VERSION,
};
pub use metrics::{
    aggregate, analyze_log, apm_epm_ratio, camera_stats, compute_apm, compute_epm, instant_series, ncr_from_counts,
    non_camera_epm, side_metrics, Aggregate, MetricsReport, RatioEstimates, SideMetrics,
};
pub use table::{ingest_table_csv, ingest_table_reader, reports, TableRow, TABLE_COLUMNS};
pub use verify::{verify_table_dir, verify_tables, Check, Race, TableSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("degenerate log: {0}")]
    DegenerateLog(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("io: {0}")]
    Io(String),
}
