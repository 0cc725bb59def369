use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("pole of {func} at {at}")]
    Pole { func: &'static str, at: String },
    #[error("series diverges: {0}")]
    Divergence(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("pole worse than logarithmic: {0}")]
    NonLogPole(String),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("step size underflow at t = {0}")]
    StepUnderflow(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
