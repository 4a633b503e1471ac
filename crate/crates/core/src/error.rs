use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A formula was evaluated at a point where it is singular.
    #[error("singular input: {0}")]
    Singular(String),

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error(
        "quadrature failed to converge: estimated error {estimate:.3e} with {nodes} nodes (tolerance {tolerance:.3e})"
    )]
    Quadrature {
        estimate: f64,
        tolerance: f64,
        nodes: usize,
    },

    /// The sampling grid of a signal does not capture its tails.
    #[error("grid resolution: {0}")]
    GridResolution(String),

    /// An iterative eigenvalue computation did not converge.
    #[error("eigenvalue iteration did not converge after {sweeps} sweeps (off-diagonal norm {residual:.3e})")]
    Convergence { sweeps: usize, residual: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
