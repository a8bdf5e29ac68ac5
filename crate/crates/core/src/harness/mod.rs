//! Experiment orchestration for the CLI: configuration, suites, and
//! report emission.

pub mod config;
pub mod report;
pub mod suites;

pub use config::{ExperimentConfig, OutputFormat, Suite, ThetaGrid};
pub use report::{parse_json, sort_rows, to_csv, to_json, write_report, ReportRow, CSV_HEADER};
pub use suites::{
    kolmogorov_distance, run_asymptotics_suite, run_couplings_suite, run_moments_suite,
    run_profile_suite, run_verify_all, SuiteOutcome,
};
