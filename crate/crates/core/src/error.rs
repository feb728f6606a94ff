use thiserror::Error;

/// Errors raised by the numerical routines and the command front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point {x} lies outside the weight domain [0, {length}]")]
    Domain { x: f64, length: f64 },

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("assembly error: {0}")]
    Assembly(String),

    /// The auxiliary eigenvalue curve never became negative below the cap.
    #[error("no sign change of mu(lambda) below lambda = {cap:e}; samples: {samples:?}")]
    BracketFailure { cap: f64, samples: Vec<(f64, f64)> },

    #[error("no root of the transcendental equation found; samples: {samples:?}")]
    RootNotFound { samples: Vec<(f64, f64)> },

    #[error("tangent pole within {distance:e} of probe lambda = {lambda}")]
    TangentPole { lambda: f64, distance: f64 },

    #[error("numerical rank deficiency: {0}")]
    NumericalRank(String),

    #[error("search space of {size} candidates exceeds the limit of {limit}")]
    SearchSpace { size: u128, limit: u128 },

    #[error("failed to evaluate objective at xi = {xi}: {source}")]
    Objective {
        xi: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
