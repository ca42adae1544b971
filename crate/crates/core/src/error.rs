//! Error types shared across the crate.

use std::path::PathBuf;

/// Errors produced while loading scenarios or running the engine.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A decision graph needs at least one candidate channel.
    #[error("channel set is empty")]
    EmptyChannelSet,

    /// Channel ids must be unique within one scenario.
    #[error("duplicate channel id `{id}`")]
    DuplicateChannelId { id: String },

    /// Criteria operations need at least one edge.
    #[error("edge set is empty")]
    EmptyEdgeSet,

    /// Evaporation bounds must satisfy 0 < rho_min < rho_max < 1.
    #[error("invalid evaporation bounds: rho_min={min}, rho_max={max} (need 0 < min < max < 1)")]
    InvalidRhoBounds { min: f64, max: f64 },

    /// Every channel has zero visibility; no ant can select anything.
    #[error("no feasible channel: every channel has zero visibility")]
    NoFeasibleChannel,

    /// Malformed scenario text (syntax); carries toml's line/column diagnostics.
    #[error("scenario parse error: {message}")]
    Parse { message: String },

    /// A key in the scenario file is not part of the documented schema.
    #[error("unknown scenario key: {message}")]
    UnknownKey { message: String },

    /// A scenario field violates its documented range or invariant.
    #[error("invalid scenario field `{field}`: {message}")]
    Validation { field: String, message: String },

    /// ACO parameters out of range.
    #[error("invalid parameters: {message}")]
    InvalidParams { message: String },

    /// Sweep request rejected (empty, zero counts, or not strictly increasing).
    #[error("invalid ant counts: {message}")]
    InvalidAntCounts { message: String },

    /// Scenario file could not be read.
    #[error("cannot read scenario file `{path}`: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Report serialization failed.
    #[error("report serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
