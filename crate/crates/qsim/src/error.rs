use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QsimError {
    #[error("width mismatch: expected {expected} bits, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("unknown register {0:?}")]
    UnknownRegister(String),
    #[error("duplicate register {0:?}")]
    DuplicateRegister(String),
    #[error("register {name:?} has width {width}, operation needs {needed}")]
    RegisterWidth {
        name: String,
        width: usize,
        needed: usize,
    },
    #[error("superposition has no terms")]
    EmptySuperposition,
    #[error("all amplitudes are zero")]
    ZeroNorm,
    #[error("support size {size} exceeds cap {cap}")]
    SupportCap { size: usize, cap: usize },
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("state support is not contained in the unitary's basis")]
    SupportOutsideBasis,
    #[error("register {0:?} is entangled with the rest of the state")]
    Entangled(String),
    #[error("{0} qubits is too many for dense enumeration")]
    TooLarge(usize),
    #[error("parse error: {0}")]
    Parse(String),
}
