use thiserror::Error;

use crate::num::{Fixed, NumError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{context}: {message}")]
    Parse { context: String, message: String },
    #[error("invalid number at {context}: {source}")]
    Number {
        context: String,
        #[source]
        source: NumError,
    },
    #[error("unknown state {0}")]
    UnknownState(usize),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("unknown configuration `{0}`")]
    UnknownConfig(String),
    #[error("configuration `{config}` has no {table} entry for action `{label}`")]
    MissingCost { config: String, label: String, table: &'static str },
    #[error("index {index} out of range (length {len})")]
    OutOfRange { index: usize, len: usize },
    #[error("baseline infeasible: step {step} (`{label}`) takes {time} on r_max but its budget is {budget}")]
    BaselineInfeasible { step: usize, label: String, time: Fixed, budget: Fixed },
    #[error("no feasible schedule: every configuration sequence misses the deadline at step {step}")]
    NoFeasibleSchedule { step: usize },
    #[error("search space of {size} sequences exceeds the bound {bound}")]
    BoundExceeded { size: String, bound: u64 },
    #[error("alphabets differ: {0}")]
    AlphabetMismatch(String),
    #[error("transition system is nondeterministic at state {state} on `{action}`")]
    Nondeterministic { state: usize, action: String },
    #[error("transition weight must be finite")]
    OmegaWeight,
    #[error("unbounded ratio: {0}")]
    UnboundedRatio(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { context: context.into(), message: message.into() }
    }
}
