use alloc::string::String;

/// Errors raised by the construction and analysis pipelines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("lasso cycle must be non-empty")]
    EmptyCycle,
    #[error("vertex {0} has no successor")]
    NoSuccessor(usize),
    #[error("graph has no cycle")]
    Acyclic,
    #[error("problem is infeasible (threshold is infinite)")]
    Infeasible,
    #[error("epsilon must be strictly positive")]
    NonPositiveEpsilon,
    #[error("aggregator {0} is not supported by this operation")]
    WrongAggregator(&'static str),
    #[error("discount factor missing or outside (0,1)")]
    BadDiscount,
    #[error("mask synthesis for Mean is undecidable (already for finite words)")]
    UndecidableMeanMask,
    #[error("automaton has {states} states, above the complementation limit {limit}")]
    SizeLimit { states: usize, limit: usize },
    #[error("input automaton is nondeterministic")]
    NondeterministicInput,
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("solver did not converge: {0}")]
    NonConvergence(String),
}

pub type Result<T> = core::result::Result<T, Error>;
