use thiserror::Error;

use crate::modcat::Module;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller passed incompatible arguments (shape, algebra or prime mismatch).
    #[error("usage error: {0}")]
    Usage(String),

    /// An input object failed its axioms.
    #[error("validation failed: {0}")]
    Validation(String),

    /// A Krull-Schmidt summand matched no registry item.
    #[error("registry incomplete: indecomposable summand of dimension {} matches no registry item", .summand.dim())]
    RegistryIncomplete { summand: Box<Module> },

    /// A functor summand matched no item of the functor registry.
    #[error("functor registry incomplete: summand with evaluation dimensions {dims:?} matches no registry functor")]
    FunctorRegistryIncomplete { dims: Vec<usize> },

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    /// The tensor structure has no dual for some object.
    #[error("not rigid: {0}")]
    NotRigid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
