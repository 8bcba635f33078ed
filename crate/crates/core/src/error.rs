use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input: bad index, negative value, wrong dimensions.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A left-perfect matching needs at least as many goods as agents.
    #[error("infeasible: {agents} agents but only {goods} goods")]
    Infeasible { agents: usize, goods: usize },

    /// Brute-force enumeration would exceed the configured budget.
    #[error("enumeration of {required} cases exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    /// The outer loop ran past its cap; some oracle violates the valuation axioms.
    #[error("outer loop did not terminate within {cap} iterations")]
    Diverged { cap: u64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
