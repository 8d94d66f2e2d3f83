use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller broke a documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("overlap matrix is ill-conditioned (condition number {condition:.3e})")]
    IllConditioned { condition: f64 },

    #[error("quadrature did not converge for {what}: error estimate {estimate:.3e} above tolerance {tolerance:.3e}")]
    QuadratureNotConverged { what: String, estimate: f64, tolerance: f64 },

    #[error("optimizer did not converge after {evaluations} evaluations (best energy {best_energy:.12})")]
    OptimizerNotConverged { evaluations: usize, best_energy: f64, best: Box<crate::hydrofit::FitResult> },

    #[error("degenerate Monte Carlo proposal: {0}")]
    DegenerateProposal(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
