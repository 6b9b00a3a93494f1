//! Scenario configuration, orchestration and plotting.

pub mod analysis;
pub mod config;
pub mod run;
pub mod spectra;
pub mod svg;

pub use analysis::{
    arrival, convergence_check, scan_fit, transition_scan, variance_depth, ArrivalSummary, ConvergenceCheck, Direction,
};
pub use config::{parse_config, OutputFormat, Resolved, Scenario, ScenarioConfig, Selection};
pub use run::run_scenario;
pub use spectra::{roots_for, Spectrum};
