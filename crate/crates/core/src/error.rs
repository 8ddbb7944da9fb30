use alloc::string::String;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no connected sample found after {attempts} attempts")]
    GenerationFailure { attempts: usize },
    #[error("structural precondition violated: {0}")]
    Structural(String),
    #[error("{m}-connectivity cannot be reached on this graph")]
    UnachievableConnectivity { m: u8 },
    #[error("graph has {n} nodes, exhaustive search is limited to {limit}")]
    SizeLimit { n: usize, limit: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Stable kebab-case identifier, suitable for machine consumption.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::GenerationFailure { .. } => "generation-failure",
            Error::Structural(_) => "structural-error",
            Error::UnachievableConnectivity { .. } => "unachievable-connectivity",
            Error::SizeLimit { .. } => "size-limit",
            Error::Parse { .. } => "parse-error",
            Error::Internal(_) => "internal-invariant",
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// Parse failure at a 1-based line number.
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }
}
