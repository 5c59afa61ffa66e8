use thiserror::Error;

/// Errors raised by the algebra layers and the proof replayer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("pole at q = {at}")]
    Pole { at: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("malformed monomial: {0}")]
    Shape(String),

    #[error("expression has denominator factors; not a Laurent polynomial")]
    NotPolynomial,

    #[error("denominator factor {factor} cannot be expanded under the requested truncation")]
    NotExpandable { factor: String },

    #[error("repeated pole {pole}: partial fractions need distinct poles")]
    DistinctPoles { pole: String },

    #[error("not proper in x{var}: degree {degree} is not negative")]
    NotProper { var: usize, degree: i64 },

    #[error("substitution sends a denominator factor to zero: {factor}")]
    UncancelledPole { factor: String },

    #[error("invalid proof path: {0}")]
    InvalidPath(String),

    #[error("proof invariant violated: {0}")]
    ProofInvariant(String),

    #[error("certification failed at {path}: {reason}")]
    CertificationFailure { path: String, reason: String },

    #[error("tournament lemma has no witness for A={a:?}, k={k:?}")]
    LemmaViolation { a: Vec<u32>, k: Vec<u32> },

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
