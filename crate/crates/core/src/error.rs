use qsim::QsimError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error("malformed encoding: {0}")]
    Wire(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("token already consumed")]
    TokenConsumed,
    #[error("expected {expected} components, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("message has {got} bits, scheme expects {expected}")]
    MessageLength { expected: usize, got: usize },
    #[error("adversary protocol violation: {0}")]
    Protocol(String),
}

pub type Result<T> = std::result::Result<T, Error>;
