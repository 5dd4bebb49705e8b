use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("the zero polynomial is not a valid input here")]
    ZeroPolynomial,
    #[error("polynomial is not self-reciprocal")]
    NotSelfReciprocal,
    #[error("expected an even degree, got {0}")]
    OddDegree(usize),
    #[error("polynomial vanishes at an interval endpoint")]
    EndpointRoot,
    #[error("matrix is singular")]
    Singular,
    #[error("{what}: required {required} exceeds budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: String,
        budget: String,
    },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("root isolation did not resolve: {0}")]
    Unresolved(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
