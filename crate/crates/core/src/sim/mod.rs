//! Monte-Carlo error-rate simulation and sweep reports.

mod report;
mod trials;

pub use report::{
    confidence_interval, emit_report, parse_csv_report, report_to_string, run_sweep, CellReport, CrcMode,
    CsvRow, Report, ReportFormat, SweepConfig, CSV_HEADER,
};
pub use trials::{run_point, PointConfig, TrialStats, BATCH};
