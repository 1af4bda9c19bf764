use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty monomial")]
    EmptyMonomial,
    #[error("variable indices start at 1, got x{0}")]
    ZeroVariable(u32),
    #[error("derivation arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("derivation index {index} out of range for arity {arity}")]
    DerivationIndex { index: usize, arity: usize },
    #[error("{op} requires a single-derivation context, arity is {arity}")]
    NeedsSingleDerivation { op: &'static str, arity: usize },
    #[error("unknown product `{0}`")]
    UnknownProduct(String),
    #[error("unbound variable x{0}")]
    UnboundVariable(u32),
    #[error("ambiguous δ-derivation: {0}")]
    AmbiguousDelta(String),
    #[error("not multilinear: {0}")]
    NotMultilinear(String),
    #[error("associator or bracket used without a selected product")]
    NoProductSelected,
    #[error("δ used in a rational context")]
    DeltaInRationalContext,
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("degree must be at least {min}, got {got}")]
    DegreeTooSmall { min: usize, got: usize },
    #[error("variable x{var} missing from monomial {monomial}")]
    MissingVariable { var: u32, monomial: String },
    #[error("zero polynomial")]
    ZeroInput,
    #[error("unexpected shape: {0}")]
    Shape(String),
    #[error("x{0} is not fresh")]
    NotFresh(u32),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown operation `{name}` at line {line}, column {column}")]
    UnknownOperation {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
