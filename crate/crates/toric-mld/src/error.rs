//! Error type shared by every module of the crate.

use std::fmt;

/// Everything that can go wrong while building or querying toric data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// The zero vector has no primitive representative.
    ZeroVector,
    /// The generated cone contains a line.
    NotPointed,
    /// The operation needs a simplicial cone.
    NotSimplicial,
    /// Two cones of a candidate fan do not meet along a common face.
    NotAFan(String),
    /// The subdivision center is outside the support of the fan.
    NotInSupport,
    /// The cone handed to a log-pair query does not belong to its fan.
    ConeNotInFan,
    /// No linear form takes the prescribed values on the rays of the cone.
    NotRCartier { cone: usize },
    /// A boundary coefficient lies outside [0, 1].
    CoefficientOutOfRange { ray: usize },
    /// The boundary vector length does not match the number of rays.
    BoundaryLength { expected: usize, got: usize },
    /// A nerve is not downward closed or exceeds the ambient dimension.
    InvalidNerve(String),
    /// A point specification is inconsistent with its pair.
    InvalidPoint(String),
    /// The second point is not a specialization of the first.
    NotSpecialization,
    /// Random generation failed to produce a valid instance in budget.
    GenerationExhausted,
    /// A pair file failed to parse, or a command was misused. Line numbers
    /// are 1-based; 0 marks errors with no file location.
    Parse { line: usize, msg: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroVector => write!(f, "the zero vector has no primitive representative"),
            Error::NotPointed => write!(f, "cone is not pointed (contains a line)"),
            Error::NotSimplicial => write!(f, "cone is not simplicial"),
            Error::NotAFan(msg) => write!(f, "not a fan: {msg}"),
            Error::NotInSupport => write!(f, "vector lies outside the support of the fan"),
            Error::ConeNotInFan => write!(f, "cone does not belong to the fan"),
            Error::NotRCartier { cone } => {
                write!(
                    f,
                    "K+B is not R-Cartier: no linear form exists on cone {cone}"
                )
            }
            Error::CoefficientOutOfRange { ray } => {
                write!(f, "boundary coefficient of ray {ray} lies outside [0, 1]")
            }
            Error::BoundaryLength { expected, got } => {
                write!(f, "expected {expected} boundary coefficients, got {got}")
            }
            Error::InvalidNerve(msg) => write!(f, "invalid nerve: {msg}"),
            Error::InvalidPoint(msg) => write!(f, "invalid point: {msg}"),
            Error::NotSpecialization => write!(f, "points are not a specialization pair"),
            Error::GenerationExhausted => {
                write!(f, "random generation exhausted its retry budget")
            }
            Error::Parse { line: 0, msg } => write!(f, "{msg}"),
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
