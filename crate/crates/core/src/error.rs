use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("weight vector is empty")]
    Empty,

    #[error("weights must be positive integers")]
    NonPositive,

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("q = ({0}) is not reflexive")]
    NotReflexive(String),

    #[error("{0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("budget exceeded: {what} would need more than {cap} points")]
    Budget { what: String, cap: u128 },
}

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by malformed user input rather than by the math.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Empty | Error::NonPositive)
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
