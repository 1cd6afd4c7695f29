use thiserror::Error;

use crate::kernel::Code;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("fuel must be at least one step")]
    ZeroFuel,
    #[error("unbound variable `{0}` after abstraction")]
    UnboundVariable(String),
    #[error("bad universe spec `{0}` (expected codes:N, terms:K or explicit:a,b,...)")]
    BadUniverse(String),
    #[error("universe is empty")]
    EmptyUniverse,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("PERs built under different budgets ({0} vs {1})")]
    BudgetMismatch(String, String),
    #[error("invalid PER: {0}")]
    InvalidPer(String),
    #[error("pairing {left:?} with {right:?} ran out of fuel")]
    PairingOutOfFuel { left: Code, right: Code },
    #[error("empty family")]
    EmptyFamily,
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("{0:?} does not track the stated morphism: {1}")]
    NotATracker(Code, String),
    #[error("no fixpoint at this budget within {0} iterations")]
    NoFixpoint(usize),
    #[error("object map is not monotone: {0}")]
    NotMonotone(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
