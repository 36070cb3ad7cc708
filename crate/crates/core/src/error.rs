use alloc::string::String;

/// Failures of the exact and numerical kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("not invertible")]
    NotInvertible,
    #[error("not a ring: {0}")]
    NotARing(String),
    #[error("not unital")]
    NotUnital,
    #[error("not maximal: reduced discriminant {found}, algebra discriminant {expected}")]
    NotMaximal { found: u64, expected: u64 },
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("not a fractional ideal")]
    NotAFractionalIdeal,
    #[error("not a Heisenberg point")]
    NotAHeisenbergPoint,
    #[error("element not in the Heisenberg lattice")]
    NotInLattice,
    #[error("inadmissible triple")]
    InadmissibleTriple,
    #[error("c must be nonzero")]
    ZeroDenominator,
    #[error("insufficient rows: {0}")]
    InsufficientRows(String),
    #[error("empty sample")]
    EmptySample,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("g fixes infinity")]
    FixesInfinity,
    #[error("quadrature did not converge (estimate {estimate}, error {error})")]
    Quadrature { estimate: f64, error: f64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unknown case: {0}")]
    UnknownCase(String),
    #[error("oracle failure: {0}")]
    Oracle(String),
}

pub type Result<T> = core::result::Result<T, Error>;
