//! Error types shared across the simulator.

use crate::epidemic::{HealthState, TransitionEvent};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A scenario, topology or model parameter is out of range.
    #[error("configuration error: {0}")]
    Config(String),

    /// An epidemic state machine transition that is not in the legal table.
    #[error("illegal transition: state {state:?} does not accept event {event:?}")]
    Transition {
        state: HealthState,
        event: TransitionEvent,
    },

    /// Numeric failure (NaN, divergence, conservation drift) during integration.
    #[error("numeric error at t={time}: {detail}")]
    Numeric { time: f64, detail: String },

    /// An internal engine inconsistency; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("unknown virus profile '{0}'")]
    UnknownVirus(String),

    /// Failure parsing the catalog file format.
    #[error("catalog parse error at line {line}: {detail}")]
    CatalogParse { line: usize, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
