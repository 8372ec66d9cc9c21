use alloc::string::String;
use thiserror::Error;

/// Errors raised by the kernels. Warnings that do not abort a computation
/// (unresolved envelope points, bias budgets) are carried in result types instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a ψ profile or a region.
    #[error("domain error: {0}")]
    Domain(String),
    /// A precondition on an argument is violated; `field` names the argument.
    #[error("invalid `{field}`: {reason}")]
    Argument { field: &'static str, reason: String },
    /// The requested method does not apply to the given ψ profile.
    #[error("method error: {0}")]
    Method(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Argument { field, reason: reason.into() }
    }
}
