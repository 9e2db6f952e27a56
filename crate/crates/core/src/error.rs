use thiserror::Error;

use crate::syntax::Label;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },

    #[error("{line}:{col}: `{name}` is defined more than once")]
    DuplicateDefinition { name: String, line: usize, col: usize },

    #[error("{line}:{col}: undefined identifier `{name}`")]
    UndefinedIdentifier { name: String, line: usize, col: usize },

    #[error("{line}:{col}: rate must be positive, found {value}")]
    NonPositiveRate { value: String, line: usize, col: usize },

    #[error("ill-founded definition: unfolding `{name}` never reaches a choice or nil")]
    IllFounded { name: String },

    #[error("unknown process or system `{0}`")]
    UnknownName(String),

    #[error("state budget of {limit} exceeded ({frontier} states still on the frontier)")]
    BudgetExceeded { limit: usize, frontier: usize },

    #[error("dimension {dimension} exceeds the dense solver budget of {limit}")]
    DimensionBudget { dimension: usize, limit: usize },

    #[error("rate_total is undefined for a self-loop (state {0})")]
    SelfLoopQuery(usize),

    #[error("no value assigned to variable x_{0}")]
    MissingVariable(Label),

    #[error("chain is reducible: {components} strongly connected components")]
    Reducible { components: usize },

    #[error("linear system is singular at pivot {pivot}")]
    Singular { pivot: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("invariant measure vanishes at state {state}")]
    ZeroMeasure { state: usize },

    #[error("component `{component}` has passive label `{label}` that no rate can close")]
    Unclosable { component: String, label: Label },

    #[error("component `{component}` is not well-formed: {reason}")]
    NotWellFormed { component: String, reason: String },

    #[error("invalid cooperation: {0}")]
    InvalidCooperation(String),

    #[error("system `{0}` nests another cooperation; the product-form solver needs simple components")]
    NestedSystem(String),

    #[error("invalid solver setting: {0}")]
    InvalidConfig(String),

    #[error("transition on `{0}` still carries a passive rate")]
    OpenTransition(Label),
}
