use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("field has {got} values but grid has {expected} cells")]
    LengthMismatch { expected: usize, got: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    /// Neumann problem with `c = 0` whose source does not integrate to zero.
    #[error("incompatible data: source mean component {component:e} exceeds tolerance {tolerance:e}")]
    IncompatibleData { component: f64, tolerance: f64 },

    #[error("dominance precondition violated: worst concentration gap {gap:e} exceeds {tolerance:e}")]
    DominanceViolated { gap: f64, tolerance: f64 },

    #[error("positive support measure {support} exceeds ball measure {ball}")]
    SupportTooLarge { support: f64, ball: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
