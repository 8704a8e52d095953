use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The requested (p_φ, E) pair has no real closed orbit.
    #[error("region forbidden: {0}")]
    RegionForbidden(String),

    /// E = α p_φ², so the ellipse scale D is undefined.
    #[error("degenerate orbit: {0}")]
    DegenerateSpec(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("integrator exceeded {max_steps} steps before reaching t = {t_end}")]
    StepLimitExceeded { max_steps: usize, t_end: f64 },

    #[error("non-finite state encountered at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
