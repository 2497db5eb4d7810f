use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("formal exponential needs a zero constant term")]
    NonzeroConstantTerm,
    #[error("cannot differentiate a series truncated at order 0")]
    OrderZeroDerivative,
    #[error("operand must be a polynomial in x alone, found λ")]
    LambdaInOperand,
    #[error("coefficient contains the indeterminate x; only λ can be specialized numerically")]
    XInCoefficient,
    #[error("normal form has off-diagonal word (ad^{i} a^{j}); number states are not eigenvectors")]
    OffDiagonal { i: u32, j: u32 },
    #[error("Fock cutoff must be at least 1")]
    ZeroCutoff,
    #[error("cutoff {cutoff} leaves no leakage-free block for a word of {length} generators")]
    NoLeakageFreeBlock { cutoff: usize, length: usize },
    #[error("truncation insufficient: {what} is {bound:e} at cutoff {cutoff}")]
    TruncationInsufficient {
        what: &'static str,
        cutoff: usize,
        bound: f64,
    },
    #[error("series did not reach tolerance {tol:e} within {steps} terms")]
    NonConvergence { tol: f64, steps: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
