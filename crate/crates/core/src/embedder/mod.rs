//! Multi-round exposure, round-1 search, connection hypergraphs, rainbow
//! matchings and the assembled pipeline.

pub mod config;
pub mod connect;
pub mod matching;
pub mod pipeline;
pub mod schedule;
pub mod search;

use thiserror::Error;

use crate::graph::GraphError;
use crate::targets::TargetError;

pub use config::EmbedConfig;
pub use connect::{
    build_connection_hypergraphs, connector_sites, spot_site, ConnectionContext, ConnectionHypergraph, HyperEdge, Site,
    SiteKind,
};
pub use matching::{
    hall_condition_check, is_rainbow, rainbow_matching, HallError, HallVerdict, MatchingFailure, MatchingOptions,
    RainbowSelection,
};
pub use pipeline::{
    embed_almost_spanning, embed_perturbed, project_second_round, AlmostSpanning, Outcome, PipelineReport,
    PipelineResult, Round1Mode, Stage,
};
pub use schedule::{Round, RoundPurpose, RoundSchedule};
pub use search::{extend_embedding, SearchFailure};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmbedError {
    #[error(transparent)]
    Target(#[from] TargetError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("config: {0}")]
    Config(String),
    #[error("round schedule: {0}")]
    Schedule(String),
    #[error("internal error: {0}")]
    Internal(String),
}
