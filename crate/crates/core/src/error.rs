use thiserror::Error;

/// Errors raised by the exact pipeline and its floating-point helpers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid signature: n = {n}, l = {l} (need n >= 2 and l <= n/2)")]
    InvalidSignature { n: usize, l: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("polynomial is not real-valued: coefficient of {key} is not the conjugate of its mirror")]
    NotReal { key: String },

    #[error("input is not in pre-normal form: {0}")]
    NotPrenormal(String),

    #[error("jet must fix the origin and be tangent to the identity")]
    JetNotTangent,

    #[error("truncation order {0} exceeds the supported maximum of 8")]
    TruncationTooHigh(u32),

    #[error("expected {what}")]
    Shape { what: String },

    #[error("gradient of the defining function vanishes at the base point")]
    SingularPoint,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix does not preserve the signature form")]
    NotPseudoUnitary,

    #[error("the null cone is trivial for l = 0")]
    EmptyNullCone,

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("Segre variety is degenerate (defining polynomial vanishes identically)")]
    DegenerateSegre,

    #[error("no witness at eps = {eps} by this construction (threshold {threshold})")]
    NoWitness { eps: String, threshold: String },

    #[error("Levi form is degenerate ({zero} zero eigenvalues)")]
    LeviDegenerate { zero: usize },

    #[error("null-cone samples do not reach full rank ({rank} of {needed})")]
    RankDeficient { rank: usize, needed: usize },

    #[error("fixed-point iteration did not stabilise after {0} rounds")]
    NoConvergence(usize),

    #[error("root bracketing failed along a sample ray")]
    Sampling,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Schema problems (malformed files, non-real input) as opposed to
    /// domain problems with well-formed input.
    pub fn is_schema(&self) -> bool {
        matches!(
            self,
            Error::Parse(_) | Error::NotReal { .. } | Error::DimensionMismatch { .. } | Error::Shape { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
