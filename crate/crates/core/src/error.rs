use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("dialect violation: {0}")]
    Dialect(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown action `{action}` for agent `{agent}` at state `{state}`")]
    UnknownAction { state: String, agent: String, action: String },
    #[error("goal assignment is not nexttime: {0}")]
    NotNexttime(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("partial strategy table: {0}")]
    PartialStrategy(String),
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
