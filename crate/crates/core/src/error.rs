use thiserror::Error;

/// Errors produced by the library. Each variant maps onto one CLI exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("size limit exceeded: {requested} > {limit}")]
    SizeLimit { requested: usize, limit: usize },

    #[error("numerical inconsistency: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SizeLimit { .. } => 3,
            Error::Io(_) => 4,
            _ => 2,
        }
    }
}

macro_rules! bail_arg {
    ($($t:tt)*) => {
        return Err($crate::error::Error::Argument(format!($($t)*)))
    };
}

macro_rules! bail_shape {
    ($($t:tt)*) => {
        return Err($crate::error::Error::Shape(format!($($t)*)))
    };
}

pub(crate) use bail_arg;
pub(crate) use bail_shape;
