//! Batch tooling around the `vknot-core` invariants: table ingestion, the
//! tabulation pipeline, and result/summary serialization.

pub mod record;
pub mod table;

pub use record::{
    records_from_csv, records_to_csv, records_to_json, summarize, summary_to_csv, summary_to_json,
    tabulate, CrossingSummary, KnotRecord, Status, SummaryCounts, TabConfig,
};
pub use table::load_table;
