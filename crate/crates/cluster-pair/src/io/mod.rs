//! File formats: label files, contingency CSV, and result reports.
//! All formats are UTF-8 with LF newlines.

mod labels;
mod matrix;
mod report;

pub use labels::{read_features, read_labels, write_labels, ColumnSpec, LabelFormat, RawLabels};
pub use matrix::{read_contingency, write_contingency};
pub use report::{
    read_report, write_report, ReportFormat, ReportRecord, REPORT_SCHEMA_VERSION,
};
