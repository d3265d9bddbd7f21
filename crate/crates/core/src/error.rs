use thiserror::Error;

#[derive(Debug, Error)]
pub enum SkatError {
    #[error("bad card name `{0}`")]
    BadCard(String),

    #[error("card {0} listed twice")]
    DuplicateCard(String),

    #[error("bad declaration `{0}`")]
    BadDecl(String),

    #[error("illegal move at index {index}: {reason}")]
    IllegalMove { index: usize, reason: String },

    #[error("invalid deal: {0}")]
    InvalidDeal(String),

    #[error("invalid observation: {0}")]
    InvalidObservation(String),

    #[error("line {line}: {msg}")]
    Record { line: usize, msg: String },

    #[error("bad weight file magic")]
    BadMagic,

    #[error("weight payload length mismatch: expected {expected} bytes, found {actual}")]
    PayloadLength { expected: usize, actual: usize },

    #[error("weight file is for {found}, expected {expected}")]
    WrongKind { expected: String, found: String },

    #[error("network shape error: {0}")]
    Shape(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = SkatError> = std::result::Result<T, E>;
