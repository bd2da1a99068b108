use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the simulator can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero has no multiplicative inverse mod {modulus}")]
    ZeroInverse { modulus: u32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("matrix is not symplectic")]
    NotSymplectic,

    #[error("dimension {0} is not supported (expected an odd prime, or 2 for the qubit tableau)")]
    BadDimension(u64),

    #[error("a register needs at least one qudit")]
    NoQudits,

    #[error("qudit index {index} out of range for {n} qudits")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("control and target are both qudit {0}")]
    ControlEqualsTarget(usize),

    #[error("row {row} has a zero coefficient on the measured momentum and cannot be a pivot")]
    BadPivot { row: usize },

    #[error("frame is inconsistent: {0}")]
    InconsistentFrame(String),

    #[error("enumeration of {what} is too large (limit {limit})")]
    TooLarge { what: &'static str, limit: usize },

    #[error("rowsum of row {0} with itself")]
    SelfSum(usize),

    #[error("state has zero norm after projection")]
    ZeroNorm,

    #[error("the discrete Wigner function needs an odd dimension, got {0}")]
    EvenDimension(u32),

    #[error("forced outcome {forced} on qudit {qudit} is impossible (deterministic outcome {actual})")]
    ImpossibleOutcome { qudit: usize, forced: u32, actual: u32 },

    #[error("outcome {outcome} is out of range for dimension {d}")]
    OutcomeOutOfRange { outcome: u32, d: u32 },

    #[error("engine {engine} cannot simulate dimension {d}")]
    EngineDimensionMismatch { engine: &'static str, d: u32 },

    #[error("register of dimension {d}^{n} exceeds the dense oracle limit of {limit} amplitudes")]
    TooLargeForOracle { n: usize, d: u32, limit: usize },

    #[error("engine and oracle disagree: {0}")]
    OracleMismatch(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A circuit-text diagnostic with its 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    IndexOutOfRange { index: i64, n: usize },
    BadDimension(u64),
    ControlEqualsTarget(usize),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::IndexOutOfRange { index, n } => {
                write!(f, "qudit {index} out of range 1..={n}")
            }
            ParseErrorKind::BadDimension(d) => {
                write!(f, "dimension {d} must be 2 or an odd prime")
            }
            ParseErrorKind::ControlEqualsTarget(i) => {
                write!(f, "cx control and target are both qudit {i}")
            }
        }
    }
}
