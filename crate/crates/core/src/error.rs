use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("vertex {0} is not in the vertex set")]
    UnknownVertex(u32),
    #[error("link endpoints coincide at vertex {0}")]
    SelfLink(u32),
    #[error("duplicate link phase {0}")]
    DuplicatePhase(f64),
    #[error("malformed configuration: {0}")]
    Malformed(&'static str),
    #[error("trajectory ends at {end} before the requested time {requested}")]
    TrajectoryTooShort { end: f64, requested: f64 },
    #[error("point {0} lies outside [0, 1)")]
    OutOfUnitInterval(f64),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: &'static str) -> Error {
    Error::InvalidParameter { name, reason }
}
