use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point is singular for this operation: {0}")]
    SingularPoint(String),
    #[error("cylindrical frame is undefined on the center line (r = 0)")]
    SingularFrame,
    #[error("adaptive quadrature did not converge (estimate {estimate:e}, error {error:e})")]
    Integration { estimate: f64, error: f64 },
    #[error("domain truncation too small: {0}")]
    Truncation(String),
    #[error("minimum lies on the boundary of the scan range (g = {g})")]
    ScanRange { g: f64 },
    #[error("solver did not converge: {0}")]
    Convergence(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a numerical procedure rather than of the caller.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Integration { .. }
                | Error::Truncation(_)
                | Error::ScanRange { .. }
                | Error::Convergence(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Contract(msg()))
    }
}
