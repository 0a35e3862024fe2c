use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("Gram matrix is not symmetric")]
    NotSymmetric,

    #[error("reflection needs a root of square -2, got square {0}")]
    NotARoot(BigInt),

    #[error("ill-posed enumeration query: {0}")]
    IllPosedQuery(String),

    #[error("c1^2 = {0} is odd; Chern data must live on an even lattice")]
    OddSelfIntersection(BigInt),

    #[error("nef walk exceeded the cap of {0} reflections")]
    IterationCapExceeded(usize),

    #[error("lattice was not built from K3 parameters (a, u)")]
    MissingParams,

    #[error("malformed lattice data: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
