use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {element} is outside the ground set of size {n}")]
    InvalidSet { element: usize, n: usize },

    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("packing width is undefined: the constraint matrix has no positive entry")]
    UndefinedWidth,

    #[error("instance with {n} elements exceeds the limit of {max}")]
    InstanceTooLarge { n: usize, max: usize },

    /// A condition that holds by construction was found broken.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
