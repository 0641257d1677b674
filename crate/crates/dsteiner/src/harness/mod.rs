//! Experiment drivers and reports.

pub mod experiments;
pub mod oracle;
pub mod report;

pub use experiments::{default_params, dsn_source, run_experiment, HarnessError, CANONICAL_SIZES, EXPERIMENTS};
pub use oracle::{connector_oracle, main_oracle, OracleOutcome};
pub use report::{CaseOutcome, CaseRecord, ExperimentParams, ExperimentReport, Verdict};
