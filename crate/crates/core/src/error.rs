//! Error type shared by all core modules.

use alloc::string::String;
use core::fmt;

/// Errors produced by scenario validation, channel-model preconditions,
/// and the optimizer.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A configuration field failed validation. `field` names the offending
    /// key; `message` explains the accepted range.
    InvalidConfig { field: &'static str, message: String },
    /// A model input violated a mathematical precondition.
    Domain { message: String },
    /// Exhaustive search was asked to enumerate more SBSs than its cap.
    SearchSpaceTooLarge { num_sbs: usize, cap: usize },
    /// The optimizer found no feasible assignment. Unreachable for the
    /// switching problem (all-ON is always feasible); kept as a defensive
    /// branch for restricted solves.
    Infeasible,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidConfig { field, message } => {
                write!(f, "invalid config: {field}: {message}")
            }
            Error::Domain { message } => write!(f, "domain error: {message}"),
            Error::SearchSpaceTooLarge { num_sbs, cap } => write!(
                f,
                "exhaustive search refused: {num_sbs} SBSs exceed the cap of {cap} \
                 (2^{num_sbs} switch configurations)"
            ),
            Error::Infeasible => write!(f, "no feasible assignment exists"),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// Shorthand for a domain error with a formatted message.
    pub fn domain(message: impl Into<String>) -> Self {
        Error::Domain { message: message.into() }
    }

    /// Shorthand for a config-field error.
    pub fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidConfig { field, message: message.into() }
    }
}
