use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("accuracy error in {what}: estimated error {estimate:e} exceeds {limit:e}")]
    Accuracy {
        what: String,
        estimate: f64,
        limit: f64,
    },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("covariance factorization failed: {0}")]
    Factorization(String),

    #[error("admissibility condition mu > 1/(2 rho) fails for mu = {mu}, rho = {rho}")]
    Condition { mu: f64, rho: f64 },

    #[error("truncation tolerance {tol:e} not reachable with history length <= {max_horizon:e}")]
    Truncation { tol: f64, max_horizon: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn accuracy(what: impl Into<String>, estimate: f64, limit: f64) -> Self {
        Error::Accuracy {
            what: what.into(),
            estimate,
            limit,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
