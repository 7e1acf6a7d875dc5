//! Error taxonomy shared across the engine.

use crate::game::ActionProfile;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Malformed or out-of-contract input: bad labels, shapes, parameters,
    /// unreadable documents.
    #[error("input error: {0}")]
    Input(String),

    /// The game is well-formed but outside what the exact solvers support,
    /// e.g. a subgame without a unique pure Nash equilibrium.
    #[error("unsupported structure: {reason}")]
    UnsupportedStructure {
        reason: String,
        /// Equilibria that were found when the failure is about their count.
        equilibria: Vec<ActionProfile>,
    },

    /// A simulation produced a non-finite state.
    #[error("numerical failure at t={time}: {reason}")]
    Numerical { reason: String, time: f64 },
}

impl Error {
    pub fn input<S: Into<String>>(msg: S) -> Self {
        Error::Input(msg.into())
    }

    pub fn unsupported<S: Into<String>>(reason: S, equilibria: Vec<ActionProfile>) -> Self {
        Error::UnsupportedStructure {
            reason: reason.into(),
            equilibria,
        }
    }
}
