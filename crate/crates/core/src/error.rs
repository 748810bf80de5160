use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph size overflows the 32-bit edge index: {0}")]
    Overflow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} is {actual}, exceeding the exact-computation cap of {limit}")]
    CapExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("host graph carries no lattice direction labels")]
    MissingLabels,

    #[error("operation requires a torus built by build_torus")]
    NotTorus,

    #[error("invalid boundary condition: {0}")]
    InvalidBoundary(String),

    #[error("not a perfect matching: {0}")]
    NotPerfectMatching(String),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("observable incompatible with host: {0}")]
    Incompatible(String),

    #[error("mismatched hosts: {0}")]
    Mismatch(String),

    #[error("host has no planar embedding: {0}")]
    NotPlanar(String),
}

pub type Result<T> = std::result::Result<T, Error>;
