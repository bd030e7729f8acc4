use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates its documented constraint.
    #[error("{field}: {constraint} (got {value})")]
    InvalidParameter {
        field: &'static str,
        constraint: &'static str,
        value: String,
    },

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("covariance diagonal entry {index} is {value}, expected 1")]
    NotUnitDiagonal { index: usize, value: f64 },

    #[error("matrix is not positive semidefinite (value {value:e} at index {index})")]
    NotPositiveSemidefinite { index: usize, value: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("{0} must not be empty")]
    EmptyInput(&'static str),

    #[error("user {user} has a zero-norm channel vector")]
    DegenerateUser { user: usize },

    #[error("transmit symbols have mean energy {mean_energy}, expected 1")]
    SymbolEnergy { mean_energy: f64 },
}

impl Error {
    pub(crate) fn invalid(
        field: &'static str,
        constraint: &'static str,
        value: impl ToString,
    ) -> Self {
        Error::InvalidParameter {
            field,
            constraint,
            value: value.to_string(),
        }
    }
}
