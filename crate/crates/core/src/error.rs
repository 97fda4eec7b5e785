use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    /// `gamma * C*^2 >= 1`: the potential term is not dominated by the gradient.
    #[error("potential coupling too strong: gamma * C*^2 = {0} >= 1")]
    CouplingTooStrong(f64),

    /// The decay coefficient only exists strictly below the well depth.
    #[error("initial energy {energy} is not below the well depth {depth}")]
    EnergyNotBelowDepth { energy: f64, depth: f64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error("numerical blow-up at t = {t}")]
    NumericalBlowup { t: f64 },

    #[error("{0}")]
    Config(#[from] crate::harness::config::ConfigErrors),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
