use crate::geom::Point;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point ({}, {}) is not in the domain", .0.re, .0.im)]
    NotInDomain(Point),
    #[error("segment {0} of the path leaves the domain")]
    PathOutside(usize),
    #[error("domain is not hyperbolic; only the quasihyperbolic metric is available")]
    NotHyperbolic,
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("beta vanishes at ({}, {}); no extremal annulus", .0.re, .0.im)]
    NoAnnulus(Point),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("solver resolution: {0}")]
    Resolution(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resolution(_) => 3,
            _ => 2,
        }
    }
}
