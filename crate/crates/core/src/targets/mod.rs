//! Target structures, their suitable families, and density parameters.

pub mod density;
pub mod family;
pub mod independent;
pub mod powers;
pub mod spec;

use thiserror::Error;

pub use density::{
    dense_threshold, density_report, is_dense, is_minimally_dense, DensityError, DensityOptions, DensityReport,
};

pub use family::{slack_budgets, suitable_family, FamilyKind, SuitableFamily};
pub use independent::{is_two_independent, two_independent_set};
pub use powers::{connector_gadget, cycle_power, path_factor_plan, path_power, ConnectorGadget, PathFactorPlan};
pub use spec::{FactorShape, TargetKind, TargetSpec, TreeShape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TargetError {
    #[error("cannot parse target spec {spec:?}: {message}")]
    Parse { spec: String, message: String },
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("infeasible plan: {0}")]
    InfeasiblePlan(String),
    #[error("unrealizable target: {0}")]
    Unrealizable(String),
    #[error("slack budget floor(eps n / (s_h^2 k)) = 0 for class {class} (s_h = {s_h}, classes = {classes})")]
    ZeroBudget { class: usize, s_h: usize, classes: usize },
    #[error("decomposition failed: {0}")]
    Decomposition(String),
}
