//! Analytic bounds, the exhaustive oracle, and Monte Carlo sweeps.

pub mod bounds;
pub mod oracle;
pub mod sweep;

use thiserror::Error;

pub use bounds::{epsilon_of, janson_report, seqdep_bound, wilson_interval, JansonReport};
pub use oracle::{oracle_contains, ORACLE_MAX_FACTOR_N, ORACLE_MAX_N};
pub use sweep::{
    compare_models, host_for, rows_to_csv, rows_to_svg, sweep, trial_seed, ArmStats, ModelComparison, SweepGrid,
    SweepRow, Tally, CSV_HEADER, Z95,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("oracle supports at most {cap} vertices, got {n}")]
    OracleTooLarge { n: usize, cap: usize },
    #[error("internal error: {0}")]
    Internal(String),
}
