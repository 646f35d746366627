use thiserror::Error;

/// Errors raised by constructors and checkers.
///
/// Law violations found by a checker are normally reported inside a
/// [`crate::report::Report`]; the variants here are for operations that cannot
/// produce a result at all.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("malformed nesting: {0}")]
    MalformedNesting(String),
    #[error("enumeration of {what} needs {needed} values, ceiling is {ceiling}")]
    ExplosionGuard {
        what: String,
        needed: String,
        ceiling: u64,
    },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("hypothesis failed: {law} (witness {witness})")]
    HypothesisFailed { law: String, witness: String },
    #[error("not an isomorphism: {0}")]
    NotIso(String),
    #[error("element {0} is not generated")]
    NotGenerated(String),
    #[error("lattice is not distributive: witness {0}")]
    NotDistributive(String),
    #[error("diagram {diagram} fails at {witness}")]
    DiagramFailed { diagram: String, witness: String },
    #[error("no solution for {0}")]
    NoSolution(String),
    #[error("ambiguous solution for {0}")]
    AmbiguousSolution(String),
    #[error("law {law} fails at {witness}")]
    LawFailed { law: String, witness: String },
    #[error("similarity fails at {0}")]
    SimilarityFailed(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn guard(what: impl Into<String>, needed: u128, ceiling: u64) -> Result<()> {
    if needed > ceiling as u128 {
        Err(Error::ExplosionGuard {
            what: what.into(),
            needed: needed.to_string(),
            ceiling,
        })
    } else {
        Ok(())
    }
}
