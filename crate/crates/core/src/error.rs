use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate system: {0}")]
    Degenerate(&'static str),

    #[error("target fill rate {target} is unattainable; achievable range is [{min:.6}, {max:.6}]")]
    Unattainable { target: f64, min: f64, max: f64 },

    #[error("fill rate undefined in replication {replication}: total demand is zero")]
    UndefinedFillRate { replication: u64 },

    #[error("quadrature failed to converge on [{lower}, {upper}]")]
    QuadratureDiverged { lower: f64, upper: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
