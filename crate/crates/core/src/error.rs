use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed topology document: {0}")]
    Syntax(String),

    #[error("invalid topology: {0}")]
    Validation(String),

    #[error("coupling matrix is not positive definite (pivot {pivot:e} at row {index})")]
    Singular { index: usize, pivot: f64 },

    #[error("unknown built-in topology `{0}`")]
    UnknownTopology(String),

    #[error("topology `{0}` is not the ordinary four-triangle stack")]
    WrongTopology(String),

    #[error("automorphism search supports at most {limit} plaquettes, got {n}")]
    TooLarge { n: usize, limit: usize },

    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("energy prefactor must lie in (0, 1], got {0}")]
    InvalidKappa(f64),

    #[error("unphysical parameters: energy prefactor {0} is not positive")]
    Unphysical(f64),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("invalid enumeration window: {0}")]
    InvalidWindow(String),

    #[error("enumeration window yields {count} configurations (limit {limit})")]
    WindowTooLarge { count: u128, limit: u128 },

    #[error("invalid flux grid: {0}")]
    InvalidGrid(String),
}

impl Error {
    /// True for failures of the linear algebra rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Singular { .. })
    }
}
