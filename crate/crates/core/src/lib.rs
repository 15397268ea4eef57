//! Randomly perturbed graphs `G_alpha ∪ G(n, p)`: generators, target
//! structures, reservoir-set switching, the multi-round embedding pipeline,
//! analytic bounds and Monte Carlo sweeps.

pub mod absorption;
pub mod decomposition;
pub mod embedder;
pub mod graph;
pub mod harness;
pub mod rng;
pub mod targets;

/// Exact rational used for density parameters.
pub type Density = num_rational::Ratio<i64>;

/// Janson bound report in double precision.
pub type JansonReportF64 = harness::JansonReport<f64>;

pub use harness::bounds::{epsilon_of, janson_report, seqdep_bound, wilson_interval};
